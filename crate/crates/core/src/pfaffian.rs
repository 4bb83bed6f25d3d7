//! Generic skew-symmetric matrices and Pfaffians of their principal submatrices.

use std::sync::{Arc, RwLock};

use rustc_hash::FxHashMap;
use smallvec::smallvec;

use crate::error::{Error, Result};
use crate::exterior::{IndexSet, MAX_GROUND};
use crate::linalg::CoeffDomain;
use crate::poly::{Multidegree, PolyRing, Polynomial, Weight};

/// Skew-symmetric matrix of polynomials, indexed from 1. Pfaffians of principal
/// submatrices are memoized on the subset.
pub struct GenericSkewMatrix {
    ring: Arc<PolyRing>,
    size: usize,
    upper: Vec<Polynomial>,
    memo: RwLock<FxHashMap<u64, Polynomial>>,
}

fn upper_index(size: usize, i: usize, j: usize) -> usize {
    // rows 1..i-1 hold (size - r) entries each
    let before: usize = (1..i).map(|r| size - r).sum();
    before + (j - i - 1)
}

impl GenericSkewMatrix {
    /// Entries `(i, j)`, `i < j`, are the ring variables `first_var, first_var + 1, …` in lex order of `(i, j)`.
    pub fn over_ring(ring: &Arc<PolyRing>, size: usize, first_var: usize) -> Result<Self> {
        let count = size * size.saturating_sub(1) / 2;
        if first_var + count > ring.nvars() {
            return Err(Error::OutOfRange("not enough ring variables for the matrix".into()));
        }
        let upper = (0..count).map(|k| Polynomial::var(ring, first_var + k)).collect();
        Self::from_entries(ring, size, upper)
    }

    /// Entries above the diagonal, row by row.
    pub fn from_entries(ring: &Arc<PolyRing>, size: usize, upper: Vec<Polynomial>) -> Result<Self> {
        if size > MAX_GROUND {
            return Err(Error::OutOfRange(format!("matrix size {size} too large")));
        }
        if upper.len() != size * size.saturating_sub(1) / 2 {
            return Err(Error::DimensionMismatch("wrong number of entries above the diagonal".into()));
        }
        if upper.iter().any(|p| !crate::poly::same_ring(p.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(GenericSkewMatrix { ring: ring.clone(), size, upper, memo: RwLock::new(FxHashMap::default()) })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry `(i, j)` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        assert!(i >= 1 && j >= 1 && i <= self.size && j <= self.size, "index out of range");
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Polynomial::zero(&self.ring),
            std::cmp::Ordering::Less => self.upper[upper_index(self.size, i, j)].clone(),
            std::cmp::Ordering::Greater => self.upper[upper_index(self.size, j, i)].neg(),
        }
    }

    fn full_mask(&self) -> u64 {
        (1u64 << self.size) - 1
    }

    /// Pfaffian of the principal submatrix on a subset of rows and columns.
    pub fn pf_sub(&self, set: &IndexSet) -> Result<Polynomial> {
        if set.len() % 2 == 1 {
            return Err(Error::OddPfaffian);
        }
        if set.elems().any(|e| e > self.size) {
            return Err(Error::OutOfRange(format!("{set:?} not inside [1, {}]", self.size)));
        }
        Ok(self.pf_mask(set.mask()))
    }

    /// Pfaffian on an even-cardinality bitmask (bit `e-1` for index `e`).
    pub fn pf_mask(&self, mask: u64) -> Polynomial {
        debug_assert!(mask.count_ones() % 2 == 0 && mask & !self.full_mask() == 0);
        if mask == 0 {
            return Polynomial::one(&self.ring);
        }
        if let Some(p) = self.memo.read().expect("memo lock").get(&mask) {
            return p.clone();
        }
        let first = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut acc = Polynomial::zero(&self.ring);
        let mut it = rest;
        let mut positive = true;
        while it != 0 {
            let t = it.trailing_zeros() as usize;
            it &= it - 1;
            let entry = self.entry(first + 1, t + 1);
            if !entry.is_zero() {
                let minor = self.pf_mask(rest & !(1u64 << t));
                let term = &entry * &minor;
                acc = if positive { &acc + &term } else { &acc - &term };
            }
            positive = !positive;
        }
        self.memo.write().expect("memo lock").entry(mask).or_insert_with(|| acc.clone());
        acc
    }

    /// Pf of the sorted union, or zero when the sets meet. No reordering sign is applied.
    pub fn pf_union(&self, a: &IndexSet, b: &IndexSet) -> Result<Polynomial> {
        if !a.is_disjoint(b) {
            return Ok(Polynomial::zero(&self.ring));
        }
        if (a.len() + b.len()) % 2 == 1 {
            return Err(Error::OddPfaffian);
        }
        self.pf_sub(&a.disjoint_union(b)?)
    }

    /// Pfaffian of the submatrix with row and column `i` removed.
    pub fn pf_delete(&self, i: usize) -> Result<Polynomial> {
        if i == 0 || i > self.size {
            return Err(Error::OutOfRange(format!("row {i}")));
        }
        if (self.size - 1) % 2 == 1 {
            return Err(Error::OddPfaffian);
        }
        Ok(self.pf_mask(self.full_mask() & !(1u64 << (i - 1))))
    }
}

pub fn pfaffian(m: &GenericSkewMatrix) -> Result<Polynomial> {
    m.pf_sub(&IndexSet::full(m.size()))
}

/// Names `{prefix}{i}_{j}`, weight `e_i + e_j` in the torus of rank `size`.
fn skew_variables(size: usize, prefix: &str) -> (Vec<String>, Vec<Weight>) {
    let mut names = Vec::new();
    let mut weights = Vec::new();
    for i in 1..=size {
        for j in i + 1..=size {
            names.push(format!("{prefix}{i}_{j}"));
            let mut w: Weight = smallvec![0; size];
            w[i - 1] = 1;
            w[j - 1] = 1;
            weights.push(w);
        }
    }
    (names, weights)
}

/// `A = Sym(∧²E)` for `rank E = size`: all variables of degree 1, over Z.
pub fn skew_ring(size: usize) -> Result<Arc<PolyRing>> {
    let (names, torus) = skew_variables(size, "p");
    let degrees = vec![Multidegree::single(1); names.len()];
    Ok(Arc::new(PolyRing::with_torus(names, degrees, torus, CoeffDomain::INTEGERS)?))
}

/// Bigraded ring of a generic `size × size` skew matrix (degree (1,0)) and a
/// generic vector (degree (0,1)), over Z.
pub fn skew_vector_ring(size: usize) -> Result<Arc<PolyRing>> {
    let (mut names, mut torus) = skew_variables(size, "x");
    let mut degrees = vec![Multidegree::bi(1, 0); names.len()];
    for i in 1..=size {
        names.push(format!("y{i}"));
        degrees.push(Multidegree::bi(0, 1));
        let mut w: Weight = smallvec![0; size];
        w[i - 1] = -1;
        torus.push(w);
    }
    Ok(Arc::new(PolyRing::with_torus(names, degrees, torus, CoeffDomain::INTEGERS)?))
}

/// The `2n+1` submaximal Pfaffians `Y_i = (-1)^{i+1} Pf φ(i)` of an odd skew matrix.
pub fn pfaffian_generators(phi: &GenericSkewMatrix) -> Result<Vec<Polynomial>> {
    if phi.size() % 2 == 0 {
        return Err(Error::InvalidParameter("submaximal Pfaffians need an odd-size matrix".into()));
    }
    (1..=phi.size())
        .map(|i| {
            let pf = phi.pf_delete(i)?;
            Ok(if i % 2 == 1 { pf } else { pf.neg() })
        })
        .collect()
}

/// Entries of `Φ v` in row order, then `Pf(Φ)`.
pub fn hu_generators(phi: &GenericSkewMatrix, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
    if v.len() != phi.size() {
        return Err(Error::DimensionMismatch("vector length must match the matrix".into()));
    }
    let mut out = Vec::with_capacity(phi.size() + 1);
    for i in 1..=phi.size() {
        let mut acc = Polynomial::zero(phi.ring());
        for (j, vj) in v.iter().enumerate() {
            acc = &acc + &(&phi.entry(i, j + 1) * vj);
        }
        out.push(acc);
    }
    out.push(pfaffian(phi)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::text::parse_text;

    fn generic(size: usize) -> GenericSkewMatrix {
        let r = skew_ring(size).unwrap();
        GenericSkewMatrix::over_ring(&r, size, 0).unwrap()
    }

    fn set(e: &[usize], n: usize) -> IndexSet {
        IndexSet::new(e, n).unwrap()
    }

    /// Cofactor expansion along the first row.
    fn det(m: &[Vec<Polynomial>], ring: &Arc<PolyRing>) -> Polynomial {
        if m.is_empty() {
            return Polynomial::one(ring);
        }
        let mut acc = Polynomial::zero(ring);
        for c in 0..m.len() {
            if m[0][c].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Polynomial>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, p)| p.clone()).collect())
                .collect();
            let t = &m[0][c] * &det(&minor, ring);
            acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn small_pfaffians() {
        let m2 = generic(2);
        assert_eq!(pfaffian(&m2).unwrap(), m2.entry(1, 2));
        let m4 = generic(4);
        let r = m4.ring().clone();
        let want = parse_text(&r, "p1_2*p3_4 - p1_3*p2_4 + p1_4*p2_3").unwrap();
        assert_eq!(pfaffian(&m4).unwrap(), want);
        assert_eq!(pfaffian(&generic(0)).unwrap(), Polynomial::one(generic(0).ring()));
        assert_eq!(pfaffian(&generic(3)).err(), Some(Error::OddPfaffian));
    }

    #[test]
    fn sub_and_union() {
        let m = generic(5);
        let r = m.ring().clone();
        assert_eq!(m.pf_sub(&set(&[1, 2], 5)).unwrap(), m.entry(1, 2));
        assert_eq!(m.pf_sub(&set(&[], 5)).unwrap(), Polynomial::one(&r));
        let want = parse_text(&r, "p1_2*p3_4 - p1_3*p2_4 + p1_4*p2_3").unwrap();
        assert_eq!(m.pf_sub(&set(&[1, 2, 3, 4], 5)).unwrap(), want);
        assert!(m.pf_union(&set(&[1, 2], 5), &set(&[2, 3], 5)).unwrap().is_zero());
        assert_eq!(m.pf_union(&set(&[1, 2], 5), &set(&[3, 4], 5)).unwrap(), want);
        assert_eq!(m.pf_union(&set(&[], 5), &set(&[1, 2], 5)).unwrap(), m.entry(1, 2));
        assert!(m.pf_union(&set(&[1], 5), &set(&[2, 3], 5)).is_err());
    }

    #[test]
    fn square_is_determinant() {
        for size in [2, 4, 6] {
            let m = generic(size);
            let dense: Vec<Vec<Polynomial>> =
                (1..=size).map(|i| (1..=size).map(|j| m.entry(i, j)).collect()).collect();
            let pf = pfaffian(&m).unwrap();
            assert_eq!(&pf * &pf, det(&dense, m.ring()), "size {size}");
        }
        for size in [1, 3, 5] {
            let m = generic(size);
            let dense: Vec<Vec<Polynomial>> =
                (1..=size).map(|i| (1..=size).map(|j| m.entry(i, j)).collect()).collect();
            assert!(det(&dense, m.ring()).is_zero());
        }
    }

    #[test]
    fn alternating_under_index_swap() {
        // Permuting rows and columns of a 4x4 principal submatrix by a transposition
        // negates its Pfaffian.
        let m = generic(6);
        let r = m.ring().clone();
        let rows = [2usize, 3, 5, 6];
        for (a, b) in [(0, 1), (1, 3), (0, 2)] {
            let mut perm = rows;
            perm.swap(a, b);
            let mut upper = Vec::new();
            for i in 0..4 {
                for j in i + 1..4 {
                    upper.push(m.entry(perm[i], perm[j]));
                }
            }
            let permuted = GenericSkewMatrix::from_entries(&r, 4, upper).unwrap();
            let original = m.pf_sub(&set(&rows, 6)).unwrap();
            assert_eq!(pfaffian(&permuted).unwrap(), original.neg());
        }
    }

    #[test]
    fn generators_and_laplace_identity() {
        let m3 = generic(3);
        let y = pfaffian_generators(&m3).unwrap();
        assert_eq!(y, vec![m3.entry(2, 3), m3.entry(1, 3).neg(), m3.entry(1, 2)]);
        for n in 1..=3 {
            let m = generic(2 * n + 1);
            let y = pfaffian_generators(&m).unwrap();
            assert_eq!(y.len(), 2 * n + 1);
            for g in &y {
                assert_eq!(g.homogeneous_degree().unwrap(), Some(Multidegree::single(n as i32)));
            }
            for k in 1..=2 * n + 1 {
                let mut acc = Polynomial::zero(m.ring());
                for (i, yi) in y.iter().enumerate() {
                    acc = &acc + &(&m.entry(k, i + 1) * yi);
                }
                assert!(acc.is_zero(), "n = {n}, row {k}");
            }
        }
    }

    #[test]
    fn huneke_ulrich_generators() {
        for n in 2..=3 {
            let size = 2 * n;
            let r = skew_vector_ring(size).unwrap();
            let phi = GenericSkewMatrix::over_ring(&r, size, 0).unwrap();
            let first_y = size * (size - 1) / 2;
            let v: Vec<Polynomial> = (0..size).map(|i| Polynomial::var(&r, first_y + i)).collect();
            let g = hu_generators(&phi, &v).unwrap();
            assert_eq!(g.len(), 2 * n + 1);
            for p in &g[..size] {
                assert_eq!(p.homogeneous_degree().unwrap(), Some(Multidegree::bi(1, 1)));
                assert!(p.homogeneous_weight().is_ok());
            }
            assert_eq!(g[size].homogeneous_degree().unwrap(), Some(Multidegree::bi(n as i32, 0)));
            if n == 2 {
                let want = parse_text(&r, "x1_2*x3_4 - x1_3*x2_4 + x1_4*x2_3").unwrap();
                assert_eq!(g[4], want);
                let row1 = parse_text(&r, "x1_2*y2 + x1_3*y3 + x1_4*y4").unwrap();
                assert_eq!(g[0], row1);
            }
        }
    }

    #[test]
    fn memo_is_consistent_across_threads() {
        let m = Arc::new(generic(7));
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let m = m.clone();
                std::thread::spawn(move || pfaffian_generators(&m).unwrap())
            })
            .collect();
        let results: Vec<Vec<Polynomial>> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }
}
