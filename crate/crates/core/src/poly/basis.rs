use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::ring::{Multidegree, PolyRing};

/// All monomials of multidegree exactly `d`, in decreasing lex order.
/// Negative degrees give the empty list.
pub fn monomial_basis(ring: &PolyRing, d: Multidegree) -> Vec<Monomial> {
    let mut out = Vec::new();
    for_each_exponent(ring, d, |e| out.push(Monomial::from_exponents(e)));
    out
}

/// Calls `f` on the exponent vector of every monomial of multidegree `d`,
/// in decreasing lex order.
pub fn for_each_exponent(ring: &PolyRing, d: Multidegree, mut f: impl FnMut(&[u8])) {
    if !d.is_nonnegative() || d.arity() != ring.arity() {
        return;
    }
    let n = ring.nvars();
    // reach[i][c]: some variable at index >= i has a positive c-component
    let arity = ring.arity();
    let mut reach = vec![[false; 2]; n + 1];
    for i in (0..n).rev() {
        for c in 0..arity {
            reach[i][c] = reach[i + 1][c] || ring.degree_of(i).components()[c] > 0;
        }
    }
    let mut exp = vec![0u8; n];
    let mut rem = [0i32; 2];
    rem[..arity].copy_from_slice(d.components());
    walk(ring, &reach, 0, &mut rem, &mut exp, &mut f);
}

fn walk(ring: &PolyRing, reach: &[[bool; 2]], i: usize, rem: &mut [i32; 2], exp: &mut [u8], f: &mut impl FnMut(&[u8])) {
    let arity = ring.arity();
    if (0..arity).any(|c| rem[c] > 0 && !reach[i][c]) {
        return;
    }
    if i == exp.len() {
        f(exp);
        return;
    }
    let deg = ring.degree_of(i);
    let dc = deg.components();
    let mut max = i32::MAX;
    for c in 0..arity {
        if dc[c] > 0 {
            max = max.min(rem[c] / dc[c]);
        }
    }
    let max = max.min(u8::MAX as i32);
    for e in (0..=max).rev() {
        exp[i] = e as u8;
        for c in 0..arity {
            rem[c] -= e * dc[c];
        }
        walk(ring, reach, i + 1, rem, exp, f);
        for c in 0..arity {
            rem[c] += e * dc[c];
        }
    }
    exp[i] = 0;
}

/// Number of monomials of multidegree `d`, by dynamic programming over the
/// variables (stars and bars when every variable has degree 1).
pub fn monomial_count(ring: &PolyRing, d: Multidegree) -> BigInt {
    if !d.is_nonnegative() || d.arity() != ring.arity() {
        return BigInt::zero();
    }
    let (a, b) = match d.components() {
        [a] => (*a as usize, 0usize),
        [a, b] => (*a as usize, *b as usize),
        _ => unreachable!(),
    };
    let w = b + 1;
    let mut table = vec![BigInt::zero(); (a + 1) * w];
    table[0] = BigInt::one();
    for deg in ring.degrees() {
        let (da, db) = match deg.components() {
            [x] => (*x as usize, 0usize),
            [x, y] => (*x as usize, *y as usize),
            _ => unreachable!(),
        };
        // unbounded knapsack: iterate upward so each variable may repeat
        for i in da..=a {
            for j in db..=b {
                let prev = table[(i - da) * w + (j - db)].clone();
                if !prev.is_zero() {
                    table[i * w + j] += prev;
                }
            }
        }
    }
    table[a * w + b].clone()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `binomial` for small results.
pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(r).expect("binomial overflow")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CoeffDomain;

    fn ring(degs: Vec<Multidegree>) -> PolyRing {
        let names = (0..degs.len()).map(|i| format!("v{i}")).collect();
        PolyRing::new(names, degs, CoeffDomain::INTEGERS).unwrap()
    }

    #[test]
    fn standard_counts() {
        let r = ring(vec![Multidegree::single(1); 10]);
        assert_eq!(monomial_basis(&r, Multidegree::single(2)).len(), 55);
        assert_eq!(monomial_count(&r, Multidegree::single(2)), BigInt::from(55));
        let zero = monomial_basis(&r, Multidegree::single(0));
        assert_eq!(zero.len(), 1);
        assert!(zero[0].is_one());
        assert!(monomial_basis(&r, Multidegree::single(-1)).is_empty());
    }

    #[test]
    fn bigraded_counts() {
        let mut degs = vec![Multidegree::bi(1, 0); 15];
        degs.extend(vec![Multidegree::bi(0, 1); 6]);
        let r = ring(degs);
        assert_eq!(monomial_basis(&r, Multidegree::bi(1, 1)).len(), 90);
        let d = Multidegree::bi(2, 3);
        assert_eq!(BigInt::from(monomial_basis(&r, d).len()), monomial_count(&r, d));
        assert_eq!(monomial_count(&r, d), binomial(16, 2) * binomial(8, 3));
    }

    #[test]
    fn basis_is_sorted_and_exact() {
        let r = ring(vec![Multidegree::single(1), Multidegree::single(2), Multidegree::single(3)]);
        let d = Multidegree::single(7);
        let b = monomial_basis(&r, d);
        assert!(b.windows(2).all(|w| w[0] > w[1]));
        assert!(b.iter().all(|m| m.degree(&r) == d));
        assert_eq!(BigInt::from(b.len()), monomial_count(&r, d));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(3, 5), 0);
        assert_eq!(binomial(40, 20), BigInt::from(137846528820u64));
    }
}
