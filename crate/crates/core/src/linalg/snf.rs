//! Smith normal form over Z.
//!
//! Unit pivots are eliminated sparsely first (each contributes an elementary
//! divisor 1 and leaves the rest unchanged); whatever remains is reduced with a
//! dense algorithm that always pivots on the smallest entry.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::domain::Integers;
use crate::linalg::elim::eliminate;
use crate::linalg::sparse::SparseMatrix;

/// Largest residual block (rows × cols after unit elimination) handed to the
/// dense algorithm.
pub const DENSE_SNF_LIMIT: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfOutcome {
    /// Nonzero elementary divisors in divisibility order.
    pub divisors: Vec<BigInt>,
}

impl SnfOutcome {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Divisors different from 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// `None` when the residual after unit elimination exceeds [`DENSE_SNF_LIMIT`]
/// in either dimension.
pub fn smith_normal_form(m: &SparseMatrix<BigInt>) -> Option<SnfOutcome> {
    let (vecs, n) = if m.rows() <= m.cols() { (m.row_vecs(), m.cols()) } else { (m.col_vecs(), m.rows()) };
    let elim = eliminate(&Integers, vecs, n);
    let units = elim.rank();
    let residual = elim.residual;
    let mut cols: Vec<usize> = residual.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
    cols.sort_unstable();
    cols.dedup();
    if residual.len() > DENSE_SNF_LIMIT || cols.len() > DENSE_SNF_LIMIT {
        return None;
    }
    let mut dense = vec![vec![BigInt::zero(); cols.len()]; residual.len()];
    for (i, row) in residual.iter().enumerate() {
        for (c, v) in row {
            let j = cols.binary_search(c).unwrap();
            dense[i][j] = v.clone();
        }
    }
    let mut divisors = vec![BigInt::one(); units];
    divisors.extend(dense_snf(dense));
    Some(SnfOutcome { divisors })
}

/// Elementary divisors of a dense integer matrix.
pub fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        move_to(&mut a, t, bi, bj);
        loop {
            let mut clean = true;
            for i in (t + 1)..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..ncols {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..nrows {
                    let v = &a[i][j] - &q * &a[i][t];
                    a[i][j] = v;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // A remainder smaller than the pivot sits in row or column t.
                let mut best = (t, t);
                for i in t..nrows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..ncols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                move_to(&mut a, t, best.0, best.1);
                continue;
            }
            let offender = ((t + 1)..nrows)
                .find(|&i| ((t + 1)..ncols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    for j in t..ncols {
                        let v = &a[t][j] + &a[i][j];
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

fn move_to(a: &mut [Vec<BigInt>], t: usize, i: usize, j: usize) {
    a.swap(t, i);
    if j != t {
        for row in a.iter_mut() {
            row.swap(t, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[&[i64]]) -> Vec<i64> {
        let d: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let m = SparseMatrix::from_dense(&Integers, &d);
        smith_normal_form(&m)
            .unwrap()
            .divisors
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(snf(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(snf(&[&[0]]), Vec::<i64>::new());
        assert_eq!(snf(&[&[2, 4], &[6, 8]]), vec![2, 4]);
        assert_eq!(snf(&[&[1, 2], &[3, 4]]), vec![1, 2]);
        assert_eq!(snf(&[&[2, 0, 0], &[0, 4, 0], &[0, 0, 6]]), vec![2, 2, 12]);
    }
}
