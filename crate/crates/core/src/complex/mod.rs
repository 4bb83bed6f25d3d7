//! Graded free modules with labeled generators and complexes of polynomial matrices.
//!
//! A generator with twist `t` sits in internal degree `-t`; the module is a sum
//! of copies of `A(t)`. A differential entry from column generator `g` to row
//! generator `h` is homogeneous of degree `twist(h) - twist(g)`.

mod json;
mod slice;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exterior::IndexSet;
use crate::poly::{monomial_count, Multidegree, PolyRing, Polynomial, Weight};

pub use json::{complex_from_json, complex_to_json, ComplexJson};
pub use slice::{add as weight_add, slice, sub as weight_sub, BlockBasis, MonoGroup, Packer, SliceEngine};

/// Functor part of a generator label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    Scalar,
    /// Basis vector `e_S` of `∧^{|S|}` of a rank-`n` module.
    Exterior { n: usize, subset: IndexSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorLabel {
    pub functor: Functor,
    pub det_power: i32,
    pub twist: Multidegree,
}

impl GeneratorLabel {
    pub fn scalar(twist: Multidegree) -> Self {
        GeneratorLabel { functor: Functor::Scalar, det_power: 0, twist }
    }

    pub fn exterior(subset: IndexSet, det_power: i32, twist: Multidegree) -> Self {
        GeneratorLabel { functor: Functor::Exterior { n: subset.ground(), subset }, det_power, twist }
    }

    /// Torus weight `indicator(S) + det_power * (1, …, 1)` when the label lives
    /// over a module of the torus rank.
    pub fn torus_weight(&self, torus_dim: usize) -> Option<Weight> {
        if torus_dim == 0 {
            return None;
        }
        let mut w: Weight = SmallVec::from_elem(self.det_power, torus_dim);
        match &self.functor {
            Functor::Scalar => Some(w),
            Functor::Exterior { n, subset } if *n == torus_dim => {
                for e in subset.elems() {
                    w[e - 1] += 1;
                }
                Some(w)
            }
            Functor::Exterior { .. } => None,
        }
    }

    /// Label of the dual generator: `(∧^k ⊗ det^p)^* = ∧^{N-k} ⊗ det^{-p-1}` on the complement.
    fn dual(&self, shift: Multidegree) -> GeneratorLabel {
        let twist = shift - self.twist;
        match &self.functor {
            Functor::Scalar => GeneratorLabel { functor: Functor::Scalar, det_power: -self.det_power, twist },
            Functor::Exterior { n, subset } => GeneratorLabel {
                functor: Functor::Exterior { n: *n, subset: subset.complement() },
                det_power: -self.det_power - 1,
                twist,
            },
        }
    }

    /// Everything except the subset; consecutive generators sharing it form a block.
    fn block_key(&self) -> (usize, usize, i32, Multidegree) {
        match &self.functor {
            Functor::Scalar => (0, 0, self.det_power, self.twist),
            Functor::Exterior { n, subset } => (*n, subset.len() + 1, self.det_power, self.twist),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFreeModule {
    generators: Vec<GeneratorLabel>,
}

impl GradedFreeModule {
    pub fn new(generators: Vec<GeneratorLabel>) -> Self {
        GradedFreeModule { generators }
    }

    pub fn zero() -> Self {
        GradedFreeModule { generators: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[GeneratorLabel] {
        &self.generators
    }

    pub fn twist(&self, g: usize) -> Multidegree {
        self.generators[g].twist
    }

    /// Multiplicity of each twist.
    pub fn graded_ranks(&self) -> BTreeMap<Multidegree, usize> {
        let mut out = BTreeMap::new();
        for g in &self.generators {
            *out.entry(g.twist).or_insert(0) += 1;
        }
        out
    }

    /// Dimension of the degree-`d` part.
    pub fn dim_at(&self, ring: &PolyRing, d: Multidegree) -> BigInt {
        self.graded_ranks().iter().map(|(t, m)| monomial_count(ring, d + *t) * BigInt::from(*m)).sum()
    }
}

/// Sparse matrix of polynomials stored by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    columns: Vec<Vec<(usize, Polynomial)>>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, columns: vec![Vec::new(); cols] }
    }

    /// From `(row, col, entry)` triples; zero entries are dropped, repeated positions are summed.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<(usize, usize, Polynomial)>) -> Result<Self> {
        let mut m = Self::zero(rows, cols);
        for (r, c, p) in entries {
            if r >= rows || c >= cols {
                return Err(Error::MalformedMatrix(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            m.add_to(r, c, &p)?;
        }
        Ok(m)
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Polynomial)>>) -> Result<Self> {
        let cols = columns.len();
        let entries = columns
            .into_iter()
            .enumerate()
            .flat_map(|(c, col)| col.into_iter().map(move |(r, p)| (r, c, p)))
            .collect();
        Self::from_entries(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &[(usize, Polynomial)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Polynomial> {
        let col = &self.columns[c];
        col.binary_search_by_key(&r, |e| e.0).ok().map(|i| &col[i].1)
    }

    pub fn add_to(&mut self, r: usize, c: usize, p: &Polynomial) -> Result<()> {
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(i) => {
                let s = col[i].1.checked_add(p)?;
                if s.is_zero() {
                    col.remove(i);
                } else {
                    col[i].1 = s;
                }
            }
            Err(i) => {
                if !p.is_zero() {
                    col.insert(i, (r, p.clone()));
                }
            }
        }
        Ok(())
    }

    /// Replaces an entry (zero removes it).
    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(i) if p.is_zero() => {
                col.remove(i);
            }
            Ok(i) => col[i].1 = p,
            Err(_) if p.is_zero() => {}
            Err(i) => col.insert(i, (r, p)),
        }
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, p)| (*r, c, p)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut columns = vec![Vec::new(); self.rows];
        for (r, c, p) in self.entries() {
            columns[r].push((c, p.clone()));
        }
        PolyMatrix { rows: self.cols(), columns }
    }

    /// `self * v` for a column vector of polynomials.
    pub fn apply(&self, ring: &Arc<PolyRing>, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if v.len() != self.cols() {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols())));
        }
        let mut out = vec![Polynomial::zero(ring); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, a) in &self.columns[c] {
                out[*r] = out[*r].checked_add(&a.checked_mul(x)?)?;
            }
        }
        Ok(out)
    }

    /// `self * other`, columns computed in parallel.
    pub fn compose(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols() != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        let columns: Vec<Vec<(usize, Polynomial)>> = other
            .columns
            .par_iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, Vec<(crate::poly::Monomial, BigInt)>> = BTreeMap::new();
                for (k, b) in col {
                    for (r, a) in &self.columns[*k] {
                        let prod = a * b;
                        acc.entry(*r).or_default().extend(prod.terms().iter().cloned());
                    }
                }
                acc.into_iter()
                    .filter_map(|(r, terms)| {
                        let ring = col.first().map(|(_, p)| p.ring().clone()).expect("nonempty column");
                        let p = Polynomial::from_terms(&ring, terms).expect("same ring");
                        (!p.is_zero()).then_some((r, p))
                    })
                    .collect()
            })
            .collect();
        Ok(PolyMatrix { rows: self.rows, columns })
    }
}

/// Complex `module_hi → … → module_lo` with `d_j : module_j → module_{j-1}`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    ring: Arc<PolyRing>,
    lo: i32,
    modules: Vec<GradedFreeModule>,
    diffs: Vec<PolyMatrix>,
    weights: Option<Vec<Vec<Weight>>>,
}

impl PartialEq for FreeComplex {
    fn eq(&self, o: &Self) -> bool {
        *self.ring == *o.ring && self.lo == o.lo && self.modules == o.modules && self.diffs == o.diffs
    }
}

impl FreeComplex {
    /// `diffs[k]` is `d_{lo+k+1}`. Checks shapes, rings, twist arity and entry homogeneity.
    pub fn new(ring: Arc<PolyRing>, lo: i32, modules: Vec<GradedFreeModule>, diffs: Vec<PolyMatrix>) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::InvalidParameter("a complex needs at least one module".into()));
        }
        if diffs.len() + 1 != modules.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len() - 1,
                diffs.len()
            )));
        }
        for m in &modules {
            if m.generators.iter().any(|g| g.twist.arity() != ring.arity()) {
                return Err(Error::InvalidParameter("twist arity differs from the ring grading".into()));
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            let j = lo + k as i32 + 1;
            if d.rows() != modules[k].rank() || d.cols() != modules[k + 1].rank() {
                return Err(Error::DimensionMismatch(format!(
                    "d_{j} is {}x{} between modules of rank {} and {}",
                    d.rows(),
                    d.cols(),
                    modules[k + 1].rank(),
                    modules[k].rank()
                )));
            }
            for (r, c, p) in d.entries() {
                if !crate::poly::same_ring(p.ring(), &ring) {
                    return Err(Error::RingMismatch);
                }
                let want = modules[k].twist(r) - modules[k + 1].twist(c);
                match p.homogeneous_degree() {
                    Ok(Some(deg)) if deg == want => {}
                    _ => return Err(Error::Inhomogeneous { j, row: r, col: c }),
                }
            }
        }
        let mut cx = FreeComplex { ring, lo, modules, diffs, weights: None };
        cx.weights = cx.compute_weights();
        Ok(cx)
    }

    fn compute_weights(&self) -> Option<Vec<Vec<Weight>>> {
        let t = self.ring.torus_dim();
        if t == 0 {
            return None;
        }
        let weights: Vec<Vec<Weight>> = self
            .modules
            .iter()
            .map(|m| m.generators.iter().map(|g| g.torus_weight(t)).collect::<Option<Vec<_>>>())
            .collect::<Option<_>>()?;
        for (k, d) in self.diffs.iter().enumerate() {
            for (r, c, p) in d.entries() {
                let w = p.homogeneous_weight().ok()??;
                let want: Weight = weights[k + 1][c].iter().zip(&weights[k][r]).map(|(a, b)| a - b).collect();
                if w != want {
                    return None;
                }
            }
        }
        Some(weights)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.modules.len() as i32 - 1
    }

    pub fn modules(&self) -> &[GradedFreeModule] {
        &self.modules
    }

    /// Module at homological index `j`, if inside the range.
    pub fn module(&self, j: i32) -> Option<&GradedFreeModule> {
        if j < self.lo {
            return None;
        }
        self.modules.get((j - self.lo) as usize)
    }

    /// `d_j : module_j → module_{j-1}`, for `lo < j ≤ hi`.
    pub fn differential(&self, j: i32) -> Option<&PolyMatrix> {
        if j <= self.lo {
            return None;
        }
        self.diffs.get((j - self.lo - 1) as usize)
    }

    pub fn differentials(&self) -> &[PolyMatrix] {
        &self.diffs
    }

    /// Per-generator torus weights, when every label carries one consistent with the entries.
    pub fn torus_weights(&self) -> Option<&Vec<Vec<Weight>>> {
        self.weights.as_ref()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    /// Copy with one differential entry replaced; fails if the result is not homogeneous.
    pub fn with_entry(&self, j: i32, r: usize, c: usize, p: Polynomial) -> Result<FreeComplex> {
        let k = (j - self.lo - 1) as usize;
        if j <= self.lo || k >= self.diffs.len() {
            return Err(Error::OutOfRange(format!("no differential d_{j}")));
        }
        let mut diffs = self.diffs.clone();
        if r >= diffs[k].rows() || c >= diffs[k].cols() {
            return Err(Error::OutOfRange(format!("entry ({r}, {c}) outside d_{j}")));
        }
        diffs[k].set(r, c, p);
        FreeComplex::new(self.ring.clone(), self.lo, self.modules.clone(), diffs)
    }
}

/// A nonzero entry of a composite `d_{j-1} ∘ d_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeFailure {
    pub j: i32,
    pub row: usize,
    pub col: usize,
    pub value: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexCheck {
    pub pairs_checked: usize,
    pub failures: Vec<CompositeFailure>,
}

impl ComplexCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Symbolic check that every composite `d_{j-1} ∘ d_j` vanishes.
pub fn verify_complex(c: &FreeComplex) -> Result<ComplexCheck> {
    for (k, d) in c.diffs.iter().enumerate() {
        for (r, col, p) in d.entries() {
            let want = c.modules[k].twist(r) - c.modules[k + 1].twist(col);
            if p.homogeneous_degree().ok().flatten() != Some(want) {
                return Err(Error::Inhomogeneous { j: c.lo + k as i32 + 1, row: r, col });
            }
        }
    }
    let mut failures = Vec::new();
    let mut pairs = 0;
    for j in c.lo + 2..=c.hi() {
        let upper = c.differential(j).expect("in range");
        let lower = c.differential(j - 1).expect("in range");
        let comp = lower.compose(upper)?;
        pairs += 1;
        for (row, col, p) in comp.entries() {
            failures.push(CompositeFailure { j, row, col, value: p.clone() });
        }
    }
    Ok(ComplexCheck { pairs_checked: pairs, failures })
}

/// `Hom(c, A(shift))`: module `j` becomes the dual of module `lo + hi - j`,
/// differentials are transposed without extra signs, twists become `shift - twist`.
/// Generators are re-sorted into lex subset order inside each label block.
pub fn dualize(c: &FreeComplex, shift: Multidegree) -> Result<FreeComplex> {
    let n = c.modules.len();
    let mut perms = Vec::with_capacity(n);
    let mut modules = Vec::with_capacity(n);
    for m in c.modules.iter().rev() {
        let labels: Vec<GeneratorLabel> = m.generators.iter().map(|g| g.dual(shift)).collect();
        let perm = block_sort(&labels);
        modules.push(GradedFreeModule::new(perm.iter().map(|&i| labels[i].clone()).collect()));
        perms.push(perm);
    }
    // position of old generator i in the new order
    let inverse: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            let mut inv = vec![0; p.len()];
            for (new, &old) in p.iter().enumerate() {
                inv[old] = new;
            }
            inv
        })
        .collect();
    let mut diffs = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        // new d_{lo+k+1}: new module k+1 (old n-2-k) → new module k (old n-1-k),
        // the transpose of old diffs[n-2-k]
        let old = &c.diffs[n - 2 - k];
        let rows_inv = &inverse[k];
        let cols_inv = &inverse[k + 1];
        let entries = old.entries().map(|(r, col, p)| (rows_inv[col], cols_inv[r], p.clone())).collect();
        diffs.push(PolyMatrix::from_entries(modules[k].rank(), modules[k + 1].rank(), entries)?);
    }
    FreeComplex::new(c.ring.clone(), c.lo, modules, diffs)
}

fn block_sort(labels: &[GeneratorLabel]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    let mut start = 0;
    while start < labels.len() {
        let key = labels[start].block_key();
        let mut end = start + 1;
        while end < labels.len() && labels[end].block_key() == key {
            end += 1;
        }
        order[start..end].sort_by(|&a, &b| match (&labels[a].functor, &labels[b].functor) {
            (Functor::Exterior { subset: x, .. }, Functor::Exterior { subset: y, .. }) => x.cmp(y),
            _ => std::cmp::Ordering::Equal,
        });
        start = end;
    }
    order
}

/// `Σ_j (-1)^j dim (module_j)_d`.
pub fn euler_hf(c: &FreeComplex, d: Multidegree) -> BigInt {
    let mut acc = BigInt::from(0);
    for (k, m) in c.modules.iter().enumerate() {
        let j = c.lo + k as i32;
        let dim = m.dim_at(&c.ring, d);
        if j % 2 == 0 {
            acc += dim;
        } else {
            acc -= dim;
        }
    }
    acc
}

/// Largest `dim (module_j)_d` over all `j`, saturated to `u64`. Used as a cost budget.
pub fn max_slice_dim(c: &FreeComplex, d: Multidegree) -> u64 {
    c.modules
        .iter()
        .map(|m| u64::try_from(m.dim_at(&c.ring, d)).unwrap_or(u64::MAX))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests;
