//! Degree slices of differentials as exact sparse matrices.
//!
//! Basis of a module in internal degree `d`: pairs (generator `g`, monomial of
//! degree `d + twist(g)`), ordered by generator, then by decreasing lex order
//! on monomials. When the complex carries torus weights, each slice splits
//! further into weight blocks and every differential preserves the blocks.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rustc_hash::FxHashMap;

use super::FreeComplex;
use crate::error::{Error, Result};
use crate::linalg::{Integers, ScalarRing, SparseMatrix, SparseVec};
use crate::poly::{for_each_exponent, Monomial, Multidegree, PolyRing, Weight};

/// Packs an exponent vector into a `u128` with a fixed number of bits per
/// variable, so that multiplying monomials is adding keys.
#[derive(Clone, Copy, Debug)]
pub struct Packer {
    bits: u32,
    nvars: usize,
}

impl Packer {
    pub fn new(nvars: usize, max_exponent: u32) -> Result<Self> {
        let bits = (32 - max_exponent.leading_zeros()).max(1);
        if bits as usize * nvars > 128 {
            return Err(Error::OutOfRange(format!(
                "{nvars} variables with exponents up to {max_exponent} do not fit a packed key"
            )));
        }
        Ok(Packer { bits, nvars })
    }

    pub fn pack(&self, exps: &[u8]) -> u128 {
        exps.iter().enumerate().fold(0u128, |k, (i, &e)| k | (e as u128) << (self.bits as usize * i))
    }

    pub fn unpack(&self, key: u128) -> Monomial {
        let mask = (1u128 << self.bits) - 1;
        let exps: Vec<u8> = (0..self.nvars).map(|i| ((key >> (self.bits as usize * i)) & mask) as u8).collect();
        Monomial::from_exponents(&exps)
    }
}

/// Monomials of one degree and one weight, in decreasing lex order.
#[derive(Debug, Default)]
pub struct MonoGroup {
    pub keys: Vec<u128>,
    index: FxHashMap<u128, u32>,
}

impl MonoGroup {
    fn from_keys(keys: Vec<u128>) -> Self {
        let index = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        MonoGroup { keys, index }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn position(&self, key: u128) -> Option<usize> {
        self.index.get(&key).map(|&i| i as usize)
    }
}

#[derive(Debug, Default)]
struct DegreeBasis {
    groups: BTreeMap<Weight, Arc<MonoGroup>>,
}

/// Ordered basis of one block: consecutive runs of monomials, one run per generator.
#[derive(Clone, Debug, Default)]
pub struct BlockBasis {
    /// `(generator, monomials, offset)` in generator order.
    pub parts: Vec<(usize, Arc<MonoGroup>, usize)>,
    pub len: usize,
}

impl BlockBasis {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Generator and monomial key of a basis position.
    pub fn locate(&self, idx: usize) -> (usize, u128) {
        let p = self.parts.partition_point(|(_, _, off)| *off <= idx) - 1;
        let (g, grp, off) = &self.parts[p];
        (*g, grp.keys[idx - off])
    }

    pub fn index_of(&self, g: usize, key: u128) -> Option<usize> {
        let p = self.parts.binary_search_by_key(&g, |e| e.0).ok()?;
        let (_, grp, off) = &self.parts[p];
        grp.position(key).map(|i| off + i)
    }
}

#[derive(Clone, Debug)]
enum Coef {
    Small(i64),
    Big(BigInt),
}

impl Coef {
    fn to<R: ScalarRing>(&self, ring: &R) -> R::Elem {
        match self {
            Coef::Small(v) => ring.from_i64(*v),
            Coef::Big(v) => ring.from_bigint(v),
        }
    }
}

/// Per-column term lists: `(row generator, monomial key, coefficient)`.
type Compiled = Vec<Vec<(usize, u128, Coef)>>;

/// Builds degree slices of a complex up to a total-degree bound, caching
/// monomial bases per degree.
pub struct SliceEngine<'a> {
    cx: &'a FreeComplex,
    packer: Packer,
    torus: bool,
    compiled: Vec<Compiled>,
    bases: Mutex<FxHashMap<Multidegree, Arc<DegreeBasis>>>,
    empty_weight: Weight,
    max_exp: i32,
}

impl<'a> SliceEngine<'a> {
    /// `bound` is the largest internal degree that will be sliced (componentwise).
    /// Torus blocks are used when requested and available.
    pub fn new(cx: &'a FreeComplex, bound: Multidegree, use_torus: bool) -> Result<Self> {
        let max_twist = cx
            .modules()
            .iter()
            .flat_map(|m| m.generators().iter().map(|g| g.twist.total()))
            .max()
            .unwrap_or(0);
        let max_exp = (bound.total() + max_twist.max(0)).max(0) as u32;
        let packer = Packer::new(cx.ring().nvars(), max_exp)?;
        let compiled = cx
            .differentials()
            .iter()
            .map(|d| {
                (0..d.cols())
                    .map(|c| {
                        let mut terms = Vec::new();
                        for (r, p) in d.column(c) {
                            for (m, v) in p.terms() {
                                let coef = v.to_i64().map_or_else(|| Coef::Big(v.clone()), Coef::Small);
                                terms.push((*r, packer.pack(m.exponents()), coef));
                            }
                        }
                        terms
                    })
                    .collect()
            })
            .collect();
        Ok(SliceEngine {
            cx,
            packer,
            torus: use_torus && cx.torus_weights().is_some(),
            compiled,
            bases: Mutex::new(FxHashMap::default()),
            empty_weight: Weight::new(),
            max_exp: max_exp as i32,
        })
    }

    pub fn complex(&self) -> &FreeComplex {
        self.cx
    }

    pub fn ring(&self) -> &PolyRing {
        self.cx.ring()
    }

    pub fn packer(&self) -> &Packer {
        &self.packer
    }

    pub fn uses_torus(&self) -> bool {
        self.torus
    }

    fn degree_basis(&self, e: Multidegree) -> Arc<DegreeBasis> {
        if let Some(b) = self.bases.lock().expect("basis cache").get(&e) {
            return b.clone();
        }
        assert!(e.total() <= self.max_exp, "degree {e} beyond the slicing bound");
        let ring = self.cx.ring();
        let mut groups: BTreeMap<Weight, Vec<u128>> = BTreeMap::new();
        for_each_exponent(ring, e, |exps| {
            let key = self.packer.pack(exps);
            let w = if self.torus { monomial_weight(ring, exps) } else { Weight::new() };
            groups.entry(w).or_default().push(key);
        });
        let basis = Arc::new(DegreeBasis {
            groups: groups.into_iter().map(|(w, keys)| (w, Arc::new(MonoGroup::from_keys(keys)))).collect(),
        });
        self.bases.lock().expect("basis cache").entry(e).or_insert(basis).clone()
    }

    fn gen_weight(&self, j: i32, g: usize) -> &Weight {
        match (self.torus, self.cx.torus_weights()) {
            (true, Some(w)) => &w[(j - self.cx.lo()) as usize][g],
            _ => &self.empty_weight,
        }
    }

    /// Monomials of degree `e` and weight `w` (any weight when the engine has no torus).
    pub fn monomials(&self, e: Multidegree, w: &Weight) -> Option<Arc<MonoGroup>> {
        if !e.is_nonnegative() {
            return None;
        }
        self.degree_basis(e).groups.get(w).cloned()
    }

    /// Packed key and weight of a single variable.
    pub fn variable(&self, v: usize) -> (u128, Weight) {
        let mut exps = vec![0u8; self.cx.ring().nvars()];
        exps[v] = 1;
        let w = if self.torus { monomial_weight(self.cx.ring(), &exps) } else { Weight::new() };
        (self.packer.pack(&exps), w)
    }

    /// Weight of a generator of module `j` (empty without torus).
    pub fn generator_weight(&self, j: i32, g: usize) -> Weight {
        self.gen_weight(j, g).clone()
    }

    /// Weight of a monomial key (empty without torus).
    pub fn key_weight(&self, key: u128) -> Weight {
        if !self.torus {
            return Weight::new();
        }
        monomial_weight(self.cx.ring(), self.packer.unpack(key).exponents())
    }

    /// Weights of the nonempty blocks of module `j` in degree `d`, sorted.
    pub fn weights(&self, j: i32, d: Multidegree) -> Vec<Weight> {
        let Some(m) = self.cx.module(j) else { return Vec::new() };
        let mut out: Vec<Weight> = Vec::new();
        for (g, label) in m.generators().iter().enumerate() {
            let basis = self.degree_basis(d + label.twist);
            let gw = self.gen_weight(j, g);
            for w in basis.groups.keys() {
                out.push(add(w, gw));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn block_basis(&self, j: i32, d: Multidegree, w: &Weight) -> BlockBasis {
        let Some(m) = self.cx.module(j) else { return BlockBasis::default() };
        let mut parts = Vec::new();
        let mut len = 0;
        for (g, label) in m.generators().iter().enumerate() {
            let basis = self.degree_basis(d + label.twist);
            let want = sub(w, self.gen_weight(j, g));
            if let Some(grp) = basis.groups.get(&want) {
                parts.push((g, grp.clone(), len));
                len += grp.len();
            }
        }
        BlockBasis { parts, len }
    }

    /// Dimension of module `j` in degree `d`, summed over blocks.
    pub fn module_dim(&self, j: i32, d: Multidegree) -> usize {
        self.weights(j, d).iter().map(|w| self.block_basis(j, d, w).len()).sum()
    }

    /// Block of `d_j` from `(j, d, w)` to `(j-1, d, w)`, as sparse columns.
    pub fn block_columns<R: ScalarRing>(&self, ring: &R, j: i32, d: Multidegree, w: &Weight) -> (usize, Vec<SparseVec<R::Elem>>) {
        let cols = self.block_basis(j, d, w);
        let rows = self.block_basis(j - 1, d, w);
        let Some(diff) = self.cx.differential(j) else {
            return (rows.len(), vec![Vec::new(); cols.len()]);
        };
        let compiled = &self.compiled[(j - self.cx.lo() - 1) as usize];
        let mut row_parts: Vec<Option<(&Arc<MonoGroup>, usize)>> = vec![None; diff.rows()];
        for (h, grp, off) in &rows.parts {
            row_parts[*h] = Some((grp, *off));
        }
        let mut out = Vec::with_capacity(cols.len());
        for (g, grp, _) in &cols.parts {
            for &mkey in &grp.keys {
                let mut col: SparseVec<R::Elem> = Vec::with_capacity(compiled[*g].len());
                for (h, tkey, coef) in &compiled[*g] {
                    let Some((rg, roff)) = row_parts[*h] else { continue };
                    let pos = rg.position(mkey + tkey).expect("row monomial lies in the matching block");
                    let v = coef.to(ring);
                    if !ring.is_zero(&v) {
                        col.push((roff + pos, v));
                    }
                }
                col.sort_unstable_by_key(|e| e.0);
                out.push(col);
            }
        }
        (rows.len(), out)
    }

    pub fn block_matrix<R: ScalarRing>(&self, ring: &R, j: i32, d: Multidegree, w: &Weight) -> SparseMatrix<R::Elem> {
        let (rows, cols) = self.block_columns(ring, j, d, w);
        SparseMatrix::from_columns(rows, cols)
    }
}

fn monomial_weight(ring: &PolyRing, exps: &[u8]) -> Weight {
    let mut w: Weight = smallvec::SmallVec::from_elem(0, ring.torus_dim());
    for (i, &e) in exps.iter().enumerate() {
        if e > 0 {
            for (acc, x) in w.iter_mut().zip(ring.torus()[i].iter()) {
                *acc += x * e as i32;
            }
        }
    }
    w
}

/// Sum of weights; an empty weight acts as zero.
pub fn add(a: &Weight, b: &Weight) -> Weight {
    if b.is_empty() {
        return a.clone();
    }
    if a.is_empty() {
        return b.clone();
    }
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &Weight, b: &Weight) -> Weight {
    if b.is_empty() {
        return a.clone();
    }
    if a.is_empty() {
        return b.iter().map(|y| -y).collect();
    }
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Degree-`d` matrix of `d_j` over Z in the global basis order (no weight blocks).
pub fn slice(c: &FreeComplex, j: i32, d: Multidegree) -> Result<SparseMatrix<BigInt>> {
    let engine = SliceEngine::new(c, d, false)?;
    Ok(engine.block_matrix(&Integers, j, d, &Weight::new()))
}
