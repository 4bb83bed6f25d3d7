use std::fmt::{self, Display};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::domain::ScalarRing;

/// Sorted `(index, value)` pairs with no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Coordinate-format sparse matrix. Entries are kept sorted by `(row, col)`,
/// without duplicates or stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, E)>,
}

impl<E: Clone> SparseMatrix<E> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: Vec::new() }
    }

    /// Validating constructor: rejects out-of-range indices, duplicate
    /// positions and explicit zeros.
    pub fn new<R>(ring: &R, rows: usize, cols: usize, mut entries: Vec<(usize, usize, E)>) -> Result<Self>
    where
        R: ScalarRing<Elem = E>,
    {
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for w in entries.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::MalformedMatrix(format!("duplicate entry at ({}, {})", w[0].0, w[0].1)));
            }
        }
        for (r, c, v) in &entries {
            if *r >= rows || *c >= cols {
                return Err(Error::MalformedMatrix(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            if ring.is_zero(v) {
                return Err(Error::MalformedMatrix(format!("stored zero at ({r}, {c})")));
            }
        }
        Ok(SparseMatrix { rows, cols, entries })
    }

    /// Builds from dense rows, dropping zeros.
    pub fn from_dense<R>(ring: &R, dense: &[Vec<E>]) -> Self
    where
        R: ScalarRing<Elem = E>,
    {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let mut entries = Vec::new();
        for (i, row) in dense.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                if !ring.is_zero(v) {
                    entries.push((i, j, v.clone()));
                }
            }
        }
        SparseMatrix { rows, cols, entries }
    }

    /// Builds from sparse columns; each column must already be sorted and zero-free.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec<E>>) -> Self {
        let cols = columns.len();
        let mut entries: Vec<(usize, usize, E)> = columns
            .into_iter()
            .enumerate()
            .flat_map(|(c, col)| col.into_iter().map(move |(r, v)| (r, c, v)))
            .collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        debug_assert!(entries.iter().all(|e| e.0 < rows));
        SparseMatrix { rows, cols, entries }
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec<E>>) -> Self {
        let nrows = rows.len();
        let entries = rows
            .into_iter()
            .enumerate()
            .flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v)))
            .collect();
        SparseMatrix { rows: nrows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, E)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&E> {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(r, c)))
            .ok()
            .map(|i| &self.entries[i].2)
    }

    pub fn row_vecs(&self) -> Vec<SparseVec<E>> {
        let mut out: Vec<SparseVec<E>> = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].push((*c, v.clone()));
        }
        out
    }

    pub fn col_vecs(&self) -> Vec<SparseVec<E>> {
        let mut out: Vec<SparseVec<E>> = vec![Vec::new(); self.cols];
        for (r, c, v) in &self.entries {
            out[*c].push((*r, v.clone()));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        SparseMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Applies `f` entrywise, dropping entries that become zero.
    pub fn map<R, F>(&self, ring: &R, f: F) -> SparseMatrix<R::Elem>
    where
        R: ScalarRing,
        F: Fn(&E) -> R::Elem,
    {
        let entries = self
            .entries
            .iter()
            .filter_map(|(r, c, v)| {
                let w = f(v);
                (!ring.is_zero(&w)).then_some((*r, *c, w))
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn to_dense<R: ScalarRing<Elem = E>>(&self, ring: &R) -> Vec<Vec<E>> {
        let mut d = vec![vec![ring.zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            d[*r][*c] = v.clone();
        }
        d
    }

    /// Matrix product; `None` on incompatible shapes.
    pub fn mul<R: ScalarRing<Elem = E>>(&self, ring: &R, other: &SparseMatrix<E>) -> Option<SparseMatrix<E>> {
        if self.cols != other.rows {
            return None;
        }
        let other_rows = other.row_vecs();
        let mut out_rows: Vec<SparseVec<E>> = Vec::with_capacity(self.rows);
        for row in self.row_vecs() {
            let mut acc: std::collections::BTreeMap<usize, E> = std::collections::BTreeMap::new();
            for (k, a) in &row {
                for (c, b) in &other_rows[*k] {
                    let p = ring.mul(a, b);
                    let slot = acc.entry(*c).or_insert_with(|| ring.zero());
                    *slot = ring.add(slot, &p);
                }
            }
            out_rows.push(acc.into_iter().filter(|(_, v)| !ring.is_zero(v)).collect());
        }
        Some(SparseMatrix::from_rows(other.cols, out_rows))
    }

    /// `self * v` for a sparse column vector.
    pub fn apply<R: ScalarRing<Elem = E>>(&self, ring: &R, v: &[(usize, E)]) -> SparseVec<E> {
        let mut dense: Vec<Option<E>> = vec![None; self.cols];
        for (i, x) in v {
            dense[*i] = Some(x.clone());
        }
        let mut out: SparseVec<E> = Vec::new();
        let mut cur: Option<(usize, E)> = None;
        for (r, c, a) in &self.entries {
            if let Some(x) = &dense[*c] {
                let p = ring.mul(a, x);
                match &mut cur {
                    Some((row, acc)) if *row == *r => *acc = ring.add(acc, &p),
                    _ => {
                        if let Some((row, acc)) = cur.take() {
                            if !ring.is_zero(&acc) {
                                out.push((row, acc));
                            }
                        }
                        cur = Some((*r, p));
                    }
                }
            }
        }
        if let Some((row, acc)) = cur {
            if !ring.is_zero(&acc) {
                out.push((row, acc));
            }
        }
        out
    }
}

impl<E: Display> SparseMatrix<E> {
    /// Text export: header `rows cols nnz`, then one 1-indexed `row col value` per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.entries.len());
        for (r, c, v) in &self.entries {
            s.push_str(&format!("{} {} {}\n", r + 1, c + 1, v));
        }
        s
    }
}

impl SparseMatrix<BigInt> {
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad header '{header}'"))))
            .collect::<Result<_>>()?;
        if h.len() != 3 {
            return Err(Error::Parse(format!("header must be 'rows cols nnz', got '{header}'")));
        }
        let (rows, cols, nnz) = (h[0], h[1], h[2]);
        let mut entries = Vec::with_capacity(nnz.min(1 << 20));
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(Error::Parse(format!("bad entry line '{line}'")));
            }
            let r: usize = t[0].parse().map_err(|_| Error::Parse(format!("bad row in '{line}'")))?;
            let c: usize = t[1].parse().map_err(|_| Error::Parse(format!("bad col in '{line}'")))?;
            let v: BigInt = t[2].parse().map_err(|_| Error::Parse(format!("bad value in '{line}'")))?;
            if r == 0 || c == 0 {
                return Err(Error::Parse("indices are 1-based".into()));
            }
            entries.push((r - 1, c - 1, v));
        }
        if entries.len() != nnz {
            return Err(Error::Parse(format!("header declares {nnz} entries, found {}", entries.len())));
        }
        SparseMatrix::new(&crate::linalg::Integers, rows, cols, entries)
    }
}

impl<E: Display> Display for SparseMatrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Integers;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn text_round_trip() {
        let m = SparseMatrix::new(&Integers, 2, 3, vec![(1, 2, int(-7)), (0, 0, int(5))]).unwrap();
        let t = m.to_text();
        assert_eq!(t, "2 3 2\n1 1 5\n2 3 -7\n");
        assert_eq!(SparseMatrix::parse_text(&t).unwrap(), m);
    }

    #[test]
    fn rejects_malformed() {
        assert!(SparseMatrix::new(&Integers, 2, 2, vec![(0, 0, int(1)), (0, 0, int(2))]).is_err());
        assert!(SparseMatrix::new(&Integers, 2, 2, vec![(2, 0, int(1))]).is_err());
        assert!(SparseMatrix::new(&Integers, 2, 2, vec![(0, 1, int(0))]).is_err());
        assert!(SparseMatrix::parse_text("2 2 1\n0 1 3\n").is_err());
        assert!(SparseMatrix::parse_text("2 2 2\n1 1 3\n").is_err());
        assert!(SparseMatrix::parse_text("").is_err());
    }

    #[test]
    fn apply_and_mul() {
        let m = SparseMatrix::from_dense(&Integers, &[vec![int(1), int(2)], vec![int(0), int(3)]]);
        assert_eq!(m.apply(&Integers, &[(0, int(1)), (1, int(1))]), vec![(0, int(3)), (1, int(3))]);
        let sq = m.mul(&Integers, &m).unwrap();
        assert_eq!(sq.to_dense(&Integers), vec![vec![int(1), int(8)], vec![int(0), int(9)]]);
    }
}
