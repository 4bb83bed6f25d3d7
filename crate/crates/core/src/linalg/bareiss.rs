//! Fraction-free (Bareiss) elimination for dense integer blocks.

use num_bigint::BigInt;
use num_traits::Zero;

/// Rank over Q of a dense integer matrix. Every intermediate entry is a minor
/// of the input, so the exact divisions never leave Z.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            for j in (c + 1)..ncols {
                let v = &prow[c] * &row[j] - &row[c] * &prow[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(bareiss_rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(m(&[&[0, 0, 0], &[0, 0, 0]])), 0);
        assert_eq!(bareiss_rank(m(&[&[2, 4, 1], &[6, 8, 0], &[4, 4, -1]])), 2);
        assert_eq!(bareiss_rank(m(&[&[0, 1], &[1, 0]])), 2);
    }
}
