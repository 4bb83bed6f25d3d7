//! Sparse Gaussian elimination with Markowitz-style pivot selection.
//!
//! The engine works on a list of sparse row vectors. At each step it takes the
//! open column with the fewest active entries and, among the rows holding a
//! unit in that column, the shortest one. Pivot rows are recorded exactly as
//! they were when chosen; a pivot row never contains the column of an earlier
//! pivot, which is what back-substitution and [`EchelonBasis`] rely on.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::linalg::domain::{Field, ScalarRing};
use crate::linalg::sparse::{SparseMatrix, SparseVec};

#[derive(Clone, Debug)]
pub struct Elimination<E> {
    pub ncols: usize,
    /// `(pivot column, pivot row)` in pivot order.
    pub pivots: Vec<(usize, SparseVec<E>)>,
    /// Rows still active when no unit pivot remained (always empty over a field).
    pub residual: Vec<SparseVec<E>>,
}

impl<E> Elimination<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn find<E>(row: &[(usize, E)], c: usize) -> Option<usize> {
    row.binary_search_by_key(&c, |e| e.0).ok()
}

const OPEN: u8 = 0;
const DONE: u8 = 1;
const DEFERRED: u8 = 2;

pub fn eliminate<R: ScalarRing>(ring: &R, rows: Vec<SparseVec<R::Elem>>, ncols: usize) -> Elimination<R::Elem> {
    let mut rows = rows;
    let nrows = rows.len();
    let mut active = vec![true; nrows];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut col_cnt = vec![0u32; ncols];
    for (r, row) in rows.iter().enumerate() {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0), "row not sorted");
        for (c, _) in row {
            col_rows[*c].push(r as u32);
            col_cnt[*c] += 1;
        }
    }
    let mut state = vec![OPEN; ncols];
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..ncols)
        .filter(|&c| col_cnt[c] > 0)
        .map(|c| Reverse((col_cnt[c], c as u32)))
        .collect();

    let mut pivots = Vec::new();
    let mut dirty: Vec<usize> = Vec::new();
    let mut is_dirty = vec![false; ncols];

    while let Some(Reverse((cnt, c))) = heap.pop() {
        let c = c as usize;
        if state[c] != OPEN || col_cnt[c] != cnt || cnt == 0 {
            continue;
        }
        let mut cands: Vec<u32> = col_rows[c]
            .iter()
            .copied()
            .filter(|&r| active[r as usize] && find(&rows[r as usize], c).is_some())
            .collect();
        cands.sort_unstable();
        cands.dedup();
        col_rows[c] = cands.clone();

        let piv = cands
            .iter()
            .copied()
            .filter(|&r| {
                let row = &rows[r as usize];
                ring.is_unit(&row[find(row, c).unwrap()].1)
            })
            .min_by_key(|&r| (rows[r as usize].len(), r));
        let Some(p) = piv else {
            state[c] = DEFERRED;
            continue;
        };
        let p = p as usize;
        active[p] = false;
        let prow = std::mem::take(&mut rows[p]);
        let pinv = ring.unit_inv(&prow[find(&prow, c).unwrap()].1);
        for (cc, _) in &prow {
            col_cnt[*cc] -= 1;
            if !is_dirty[*cc] {
                is_dirty[*cc] = true;
                dirty.push(*cc);
            }
        }

        for &r in &cands {
            let r = r as usize;
            if r == p {
                continue;
            }
            let old = std::mem::take(&mut rows[r]);
            let f = ring.mul(&old[find(&old, c).unwrap()].1, &pinv);
            let mut new: SparseVec<R::Elem> = Vec::with_capacity(old.len() + prow.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < prow.len() {
                let take_old = j >= prow.len() || (i < old.len() && old[i].0 < prow[j].0);
                let take_piv = i >= old.len() || (j < prow.len() && prow[j].0 < old[i].0);
                if take_old {
                    new.push(old[i].clone());
                    i += 1;
                } else if take_piv {
                    let col = prow[j].0;
                    let v = ring.neg(&ring.mul(&f, &prow[j].1));
                    if !ring.is_zero(&v) {
                        new.push((col, v));
                        col_cnt[col] += 1;
                        col_rows[col].push(r as u32);
                        if !is_dirty[col] {
                            is_dirty[col] = true;
                            dirty.push(col);
                        }
                    }
                    j += 1;
                } else {
                    let col = old[i].0;
                    let v = ring.mul_sub(&old[i].1, &f, &prow[j].1);
                    if ring.is_zero(&v) {
                        col_cnt[col] -= 1;
                        if !is_dirty[col] {
                            is_dirty[col] = true;
                            dirty.push(col);
                        }
                    } else {
                        new.push((col, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            rows[r] = new;
        }
        state[c] = DONE;
        col_rows[c] = Vec::new();
        for cc in dirty.drain(..) {
            is_dirty[cc] = false;
            if state[cc] == OPEN && col_cnt[cc] > 0 {
                heap.push(Reverse((col_cnt[cc], cc as u32)));
            }
        }
        pivots.push((c, prow));
    }

    let residual = rows
        .into_iter()
        .zip(active)
        .filter(|(row, a)| *a && !row.is_empty())
        .map(|(row, _)| row)
        .collect();
    Elimination { ncols, pivots, residual }
}

/// Rank of a matrix over a field.
pub fn rank_of<F: Field>(field: &F, m: &SparseMatrix<F::Elem>) -> usize {
    // Eliminate along the shorter dimension's vectors: rank is transpose-invariant.
    let (vecs, n) = if m.rows() <= m.cols() { (m.row_vecs(), m.cols()) } else { (m.col_vecs(), m.rows()) };
    eliminate(field, vecs, n).rank()
}

/// Basis of the right null space, as columns of a `cols x (cols - rank)` matrix.
pub fn kernel_of<F: Field>(field: &F, m: &SparseMatrix<F::Elem>) -> SparseMatrix<F::Elem> {
    let elim = eliminate(field, m.row_vecs(), m.cols());
    let basis = kernel_from_elimination(field, &elim);
    SparseMatrix::from_columns(m.cols(), basis)
}

/// Null-space vectors from a finished elimination, one per free column
/// (in increasing free-column order).
pub fn kernel_from_elimination<F: Field>(field: &F, elim: &Elimination<F::Elem>) -> Vec<SparseVec<F::Elem>> {
    let n = elim.ncols;
    let mut is_pivot = vec![false; n];
    for (c, _) in &elim.pivots {
        is_pivot[*c] = true;
    }
    let inv: Vec<F::Elem> = elim
        .pivots
        .iter()
        .map(|(c, row)| field.inv(&row[find(row, *c).unwrap()].1))
        .collect();
    let mut out = Vec::new();
    let mut x: Vec<F::Elem> = vec![field.zero(); n];
    let mut touched: Vec<usize> = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        x[f] = field.one();
        touched.push(f);
        for (k, (c, row)) in elim.pivots.iter().enumerate().rev() {
            let mut s = field.zero();
            for (j, a) in row {
                if *j != *c && !field.is_zero(&x[*j]) {
                    s = field.add(&s, &field.mul(a, &x[*j]));
                }
            }
            if !field.is_zero(&s) {
                x[*c] = field.neg(&field.mul(&s, &inv[k]));
                touched.push(*c);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let v: SparseVec<F::Elem> = touched
            .iter()
            .filter(|&&i| !field.is_zero(&x[i]))
            .map(|&i| (i, x[i].clone()))
            .collect();
        for &i in &touched {
            x[i] = field.zero();
        }
        touched.clear();
        out.push(v);
    }
    out
}

/// True iff `v` lies in the column span of `m`.
pub fn image_contains_vec<F: Field>(field: &F, m: &SparseMatrix<F::Elem>, v: &[(usize, F::Elem)]) -> bool {
    let basis = EchelonBasis::from_columns(field, m);
    basis.contains(v)
}

/// A spanning set kept in semi-echelon form: each stored vector is zero at the
/// pivot columns of all vectors stored before it. Reduction against the vectors
/// in storage order is then a linear projection onto a complement of the span.
///
/// Each stored vector optionally carries a tag (a vector in an auxiliary
/// coordinate space); reducing a vector accumulates the tags, which is how
/// homology coordinates are read off.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    dim: usize,
    pivots: Vec<(usize, SparseVec<F::Elem>, F::Elem)>,
    tags: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: &F, dim: usize) -> Self {
        EchelonBasis { field: field.clone(), dim, pivots: Vec::new(), tags: Vec::new() }
    }

    /// Span of the given vectors (of length `dim`), built by Markowitz elimination.
    pub fn from_vectors(field: &F, dim: usize, vecs: Vec<SparseVec<F::Elem>>) -> Self {
        let elim = eliminate(field, vecs, dim);
        let mut b = Self::new(field, dim);
        for (c, row) in elim.pivots {
            let inv = field.inv(&row[find(&row, c).unwrap()].1);
            b.pivots.push((c, row, inv));
            b.tags.push(Vec::new());
        }
        b
    }

    pub fn from_columns(field: &F, m: &SparseMatrix<F::Elem>) -> Self {
        Self::from_vectors(field, m.rows(), m.col_vecs())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce_dense(&self, acc: &mut [F::Elem], tag: &mut Vec<(usize, F::Elem)>) {
        let field = &self.field;
        for (k, (c, row, inv)) in self.pivots.iter().enumerate() {
            if field.is_zero(&acc[*c]) {
                continue;
            }
            let f = field.mul(&acc[*c], inv);
            for (j, a) in row {
                acc[*j] = field.mul_sub(&acc[*j], &f, a);
            }
            for (t, a) in &self.tags[k] {
                tag.push((*t, field.mul(&f, a)));
            }
        }
    }

    fn collapse(&self, mut tag: Vec<(usize, F::Elem)>) -> SparseVec<F::Elem> {
        tag.sort_by_key(|e| e.0);
        let mut out: SparseVec<F::Elem> = Vec::new();
        for (i, v) in tag {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w = self.field.add(w, &v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !self.field.is_zero(v));
        out
    }

    /// Remainder of `v` modulo the span, and the accumulated tag
    /// (`v = remainder + sum of multiples of stored vectors`, whose tags sum to the returned tag).
    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        let mut acc = vec![self.field.zero(); self.dim];
        for (i, x) in v {
            acc[*i] = x.clone();
        }
        let mut tag = Vec::new();
        self.reduce_dense(&mut acc, &mut tag);
        let rem = acc
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !self.field.is_zero(x))
            .collect();
        (rem, self.collapse(tag))
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Adds `v` with the given tag; returns false (and stores nothing) if `v`
    /// is already in the span.
    pub fn insert(&mut self, v: &[(usize, F::Elem)], tag: SparseVec<F::Elem>) -> bool {
        let (rem, acc_tag) = self.reduce(v);
        let Some((c, lead)) = rem.first().cloned() else {
            return false;
        };
        let mut t = tag;
        for (i, a) in acc_tag {
            t.push((i, self.field.neg(&a)));
        }
        let t = self.collapse(t);
        let inv = self.field.inv(&lead);
        self.pivots.push((c, rem, inv));
        self.tags.push(t);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::domain::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn kernel_annihilated() {
        let f = PrimeField::new(101).unwrap();
        let dense = vec![vec![1u32, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 0, 1]];
        let m = SparseMatrix::from_dense(&f, &dense);
        let k = kernel_of(&f, &m);
        assert_eq!(k.cols(), 4 - rank_of(&f, &m));
        assert_eq!(m.mul(&f, &k).unwrap().nnz(), 0);
    }

    #[test]
    fn echelon_tags_recover_coordinates() {
        let f = Rationals;
        let mut b = EchelonBasis::new(&f, 3);
        assert!(b.insert(&[(0, q(1)), (1, q(1))], vec![(0, q(1))]));
        assert!(b.insert(&[(1, q(1)), (2, q(1))], vec![(1, q(1))]));
        assert!(!b.insert(&[(0, q(1)), (2, q(-1))], vec![]));
        // (2, 3, 1) = 2*(1,1,0) + 1*(0,1,1)
        let (rem, tag) = b.reduce(&[(0, q(2)), (1, q(3)), (2, q(1))]);
        assert!(rem.is_empty());
        assert_eq!(tag, vec![(0, q(2)), (1, q(1))]);
    }
}
