//! Homology of free complexes, computed one internal degree at a time.
//!
//! Every slice splits into torus-weight blocks when the complex carries
//! weights; ranks, cycle representatives and boundary spans are cached per
//! block `(j, d, w)`.

mod betti;
mod certificate;
mod duality;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::complex::{weight_add, weight_sub, BlockBasis, FreeComplex, SliceEngine};
use crate::error::{Error, Result};
use crate::linalg::{kernel_of, rank_of, CoeffDomain, DomainKind, EchelonBasis, Field, PrimeField, Rationals, SparseVec};
use crate::poly::{Multidegree, Polynomial, Weight};

pub use betti::{minimal_betti, BettiTable, Presentation};
pub use certificate::{be_rank_certificate, torsion_report, BeAttempt, BeCertificate, TorsionReport};
pub use duality::{duality_pairing, hom_pairing, DualityReport, HomPairing, PairingCheck};

/// Runs `$body` with `$f` bound to the field behind a domain; Z is rejected.
macro_rules! with_field {
    ($domain:expr, $f:ident => $body:expr) => {
        match $domain.kind() {
            DomainKind::Rationals => {
                let $f = Rationals;
                $body
            }
            DomainKind::PrimeField(p) => {
                let $f = PrimeField::new(p)?;
                $body
            }
            DomainKind::Integers => Err(Error::RequiresField),
        }
    };
}
pub(crate) use with_field;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySlice {
    pub j: i32,
    pub degree: Multidegree,
    pub cycles: usize,
    pub boundaries: usize,
    pub homology: usize,
    /// Elementary divisors of the boundary map, when computed over Z.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "crate::ser::opt_bigints")]
    pub divisors: Option<Vec<BigInt>>,
}

/// Homology of one weight block.
#[derive(Clone, Debug)]
pub struct HomologyBlock<F: Field> {
    pub basis: BlockBasis,
    pub cycles: usize,
    pub boundaries: EchelonBasis<F>,
    /// Cycles whose classes form a basis of the block's homology.
    pub reps: Vec<SparseVec<F::Elem>>,
    /// Boundaries followed by the representatives, the latter tagged by their index,
    /// so reducing a cycle yields its homology coordinates.
    pub coords: EchelonBasis<F>,
}

impl<F: Field> HomologyBlock<F> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a cycle in the basis of representatives.
    pub fn coordinates(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let (rem, tag) = self.coords.reduce(v);
        debug_assert!(rem.is_empty(), "not a cycle of this block");
        tag
    }
}

type BlockKey = (i32, Multidegree, Weight);

/// Block-wise homology of one complex over one field, with caches.
pub struct Homology<'a, F: Field> {
    engine: SliceEngine<'a>,
    field: F,
    ranks: Mutex<FxHashMap<BlockKey, usize>>,
    blocks: Mutex<FxHashMap<BlockKey, Arc<HomologyBlock<F>>>>,
}

impl<'a, F: Field> Homology<'a, F> {
    /// `bound` is the largest internal degree that will be asked for (componentwise).
    pub fn new(c: &'a FreeComplex, bound: Multidegree, field: F) -> Result<Self> {
        Ok(Homology {
            engine: SliceEngine::new(c, bound, true)?,
            field,
            ranks: Mutex::new(FxHashMap::default()),
            blocks: Mutex::new(FxHashMap::default()),
        })
    }

    pub fn engine(&self) -> &SliceEngine<'a> {
        &self.engine
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn complex(&self) -> &FreeComplex {
        self.engine.complex()
    }

    /// Rank of the block of `d_j` at `(d, w)`.
    pub fn rank(&self, j: i32, d: Multidegree, w: &Weight) -> usize {
        let c = self.engine.complex();
        if c.differential(j).is_none() || !d.is_nonnegative_shifted(c, j) {
            return 0;
        }
        let key = (j, d, w.clone());
        if let Some(&r) = self.ranks.lock().expect("rank cache").get(&key) {
            return r;
        }
        let m = self.engine.block_matrix(&self.field, j, d, w);
        let r = if m.rows() == 0 || m.cols() == 0 { 0 } else { rank_of(&self.field, &m) };
        self.ranks.lock().expect("rank cache").insert(key, r);
        r
    }

    /// Homology dimension of one block.
    pub fn block_dim(&self, j: i32, d: Multidegree, w: &Weight) -> (usize, usize, usize) {
        let len = self.engine.block_basis(j, d, w).len();
        if len == 0 {
            return (0, 0, 0);
        }
        let cycles = len - self.rank(j, d, w);
        let boundaries = self.rank(j + 1, d, w);
        // saturating: on input that is not a complex the image need not lie in the kernel
        (cycles, boundaries, cycles.saturating_sub(boundaries))
    }

    /// Dimensions of `H_j` in degree `d`, summed over weight blocks.
    pub fn slice(&self, j: i32, d: Multidegree) -> HomologySlice {
        let weights = self.engine.weights(j, d);
        let parts: Vec<(usize, usize, usize)> = weights.par_iter().map(|w| self.block_dim(j, d, w)).collect();
        let (cycles, boundaries, homology) = parts.iter().fold((0, 0, 0), |(a, b, h), p| (a + p.0, b + p.1, h + p.2));
        HomologySlice { j, degree: d, cycles, boundaries, homology, divisors: None }
    }

    /// Cycle representatives and boundary span of one block.
    pub fn block(&self, j: i32, d: Multidegree, w: &Weight) -> Arc<HomologyBlock<F>> {
        let key = (j, d, w.clone());
        if let Some(b) = self.blocks.lock().expect("block cache").get(&key) {
            return b.clone();
        }
        let f = &self.field;
        let basis = if d.is_nonnegative_shifted(self.engine.complex(), j) {
            self.engine.block_basis(j, d, w)
        } else {
            BlockBasis::default()
        };
        let (cycles, boundaries) = if basis.is_empty() {
            (Vec::new(), EchelonBasis::new(f, 0))
        } else {
            let dj = self.engine.block_matrix(f, j, d, w);
            let cycles = kernel_of(f, &dj).col_vecs();
            let (rows, cols) = self.engine.block_columns(f, j + 1, d, w);
            debug_assert_eq!(rows, basis.len());
            (cycles, EchelonBasis::from_vectors(f, basis.len(), cols))
        };
        let mut coords = boundaries.clone();
        let mut reps = Vec::new();
        for z in &cycles {
            if coords.insert(z, vec![(reps.len(), f.one())]) {
                reps.push(z.clone());
            }
        }
        let block = Arc::new(HomologyBlock { basis, cycles: cycles.len(), boundaries, reps, coords });
        self.blocks.lock().expect("block cache").entry(key).or_insert(block).clone()
    }

    /// Multiplies a vector of block `(j, d, w)` by the monomial with packed key `key`,
    /// whose degree and weight are `(e, u)`.
    pub fn shift(&self, j: i32, d: Multidegree, w: &Weight, v: &[(usize, F::Elem)], key: u128, e: Multidegree, u: &Weight) -> SparseVec<F::Elem> {
        let src = self.engine.block_basis(j, d, w);
        let dst = self.engine.block_basis(j, d + e, &weight_add(w, u));
        let mut out: SparseVec<F::Elem> = v
            .iter()
            .map(|(i, x)| {
                let (g, m) = src.locate(*i);
                (dst.index_of(g, m + key).expect("product lies in the target block"), x.clone())
            })
            .collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// Splits an element of module `j` given by one polynomial per generator
    /// into weight blocks of degree `d`. Fails if it is not homogeneous of degree `d`.
    pub fn element(&self, j: i32, d: Multidegree, elem: &[Polynomial]) -> Result<BTreeMap<Weight, SparseVec<F::Elem>>> {
        let c = self.engine.complex();
        let m = c.module(j).ok_or_else(|| Error::OutOfRange(format!("no module at index {j}")))?;
        if elem.len() != m.rank() {
            return Err(Error::DimensionMismatch(format!("{} components for a module of rank {}", elem.len(), m.rank())));
        }
        let mut parts: BTreeMap<Weight, SparseVec<F::Elem>> = BTreeMap::new();
        for (g, p) in elem.iter().enumerate() {
            let gw = self.engine.generator_weight(j, g);
            for (mono, coef) in p.terms() {
                if mono.degree(c.ring()) != d + m.twist(g) {
                    return Err(Error::InhomogeneousPolynomial(format!("component {g} is not of degree {}", d + m.twist(g))));
                }
                let key = self.engine.packer().pack(mono.exponents());
                let w = weight_add(&self.engine.key_weight(key), &gw);
                let idx = self.engine.block_basis(j, d, &w).index_of(g, key).expect("monomial in block");
                let v = self.field.from_bigint(coef);
                if !self.field.is_zero(&v) {
                    parts.entry(w).or_default().push((idx, v));
                }
            }
        }
        for v in parts.values_mut() {
            v.sort_unstable_by_key(|e| e.0);
        }
        Ok(parts)
    }

    /// Whether an element of module `j` in degree `d` is a cycle and whether it is a boundary.
    pub fn classify(&self, j: i32, d: Multidegree, elem: &[Polynomial]) -> Result<(bool, bool)> {
        let parts = self.element(j, d, elem)?;
        let mut cycle = true;
        let mut boundary = true;
        for (w, v) in &parts {
            let m = self.engine.block_matrix(&self.field, j, d, w);
            cycle &= m.apply(&self.field, v).is_empty();
            boundary &= self.block(j, d, w).boundaries.contains(v);
        }
        Ok((cycle, boundary))
    }

    /// `Σ_j (-1)^j dim H_j(d)` and `Σ_j (-1)^j dim (K_j)_d`.
    pub fn euler(&self, d: Multidegree) -> (i64, i64) {
        let c = self.engine.complex();
        let (mut h, mut k) = (0i64, 0i64);
        for j in c.lo()..=c.hi() {
            let s = if j.rem_euclid(2) == 0 { 1 } else { -1 };
            h += s * self.slice(j, d).homology as i64;
            k += s * self.engine.module_dim(j, d) as i64;
        }
        (h, k)
    }

    pub(crate) fn weights(&self, j: i32, d: Multidegree) -> Vec<Weight> {
        self.engine.weights(j, d)
    }

    pub(crate) fn sub_weight(a: &Weight, b: &Weight) -> Weight {
        weight_sub(a, b)
    }
}

trait ShiftedDegree {
    fn is_nonnegative_shifted(&self, c: &FreeComplex, j: i32) -> bool;
}

impl ShiftedDegree for Multidegree {
    /// False only when no generator of module `j` can reach degree `self`.
    fn is_nonnegative_shifted(&self, c: &FreeComplex, j: i32) -> bool {
        match c.module(j) {
            Some(m) => m.generators().iter().any(|g| (*self + g.twist).is_nonnegative()),
            None => false,
        }
    }
}

/// All degrees `0 ≤ d ≤ bound` (componentwise), sorted by total degree then lexicographically.
pub fn degrees_up_to(bound: Multidegree) -> Vec<Multidegree> {
    let mut out = Vec::new();
    match bound.components() {
        [a] => out.extend((0..=*a).map(Multidegree::single)),
        [a, b] => {
            for x in 0..=*a {
                for y in 0..=*b {
                    out.push(Multidegree::bi(x, y));
                }
            }
        }
        _ => unreachable!("arity is 1 or 2"),
    }
    out.sort_by_key(|d| (d.total(), *d));
    out
}

/// Dimensions of `H_j(d)`. Over Z the slice also carries the elementary divisors.
pub fn homology_dim(c: &FreeComplex, j: i32, d: Multidegree, field: CoeffDomain) -> Result<HomologySlice> {
    if field.kind() == DomainKind::Integers {
        let t = torsion_report(c, j, d)?;
        let mut s = Homology::new(c, d, Rationals)?.slice(j, d);
        s.divisors = Some(t.torsion);
        return Ok(s);
    }
    with_field!(field, f => Ok(Homology::new(c, d, f)?.slice(j, d)))
}

/// `d ↦ dim H_j(d)` for every degree up to `bound`.
pub fn hilbert_function(c: &FreeComplex, j: i32, bound: Multidegree, field: CoeffDomain) -> Result<BTreeMap<Multidegree, usize>> {
    with_field!(field, f => {
        let h = Homology::new(c, bound, f)?;
        Ok(degrees_up_to(bound).into_iter().map(|d| (d, h.slice(j, d).homology)).collect())
    })
}
