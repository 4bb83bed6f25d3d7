//! Index subsets of [1, N], shuffle signs and comultiplication of exterior powers.
//! Every enumeration here is in lex order on the element lists.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::binom;

/// Largest ground set supported (subsets are also kept as `u64` masks).
pub const MAX_GROUND: usize = 63;

/// Strictly increasing subset of [1, N].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    n: u8,
    elems: SmallVec<[u8; 16]>,
}

impl IndexSet {
    pub fn new(elems: &[usize], n: usize) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::OutOfRange(format!("ground set size {n} exceeds {MAX_GROUND}")));
        }
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::OutOfRange(format!("{elems:?} is not strictly increasing")));
        }
        if elems.iter().any(|&e| e == 0 || e > n) {
            return Err(Error::OutOfRange(format!("{elems:?} not inside [1, {n}]")));
        }
        Ok(IndexSet { n: n as u8, elems: elems.iter().map(|&e| e as u8).collect() })
    }

    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        IndexSet { n: n as u8, elems: SmallVec::new() }
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        IndexSet { n: n as u8, elems: (1..=n as u8).collect() }
    }

    pub fn from_mask(mask: u64, n: usize) -> Self {
        assert!(n <= MAX_GROUND && mask >> n == 0, "mask outside ground set");
        IndexSet { n: n as u8, elems: (1..=n as u8).filter(|&e| mask >> (e - 1) & 1 == 1).collect() }
    }

    pub fn ground(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.elems.iter().map(|&e| e as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elems().collect()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elems.binary_search(&(e as u8)).is_ok()
    }

    /// Bit `e-1` set for each element `e`.
    pub fn mask(&self) -> u64 {
        self.elems.iter().fold(0u64, |m, &e| m | 1 << (e - 1))
    }

    pub fn is_disjoint(&self, o: &IndexSet) -> bool {
        self.mask() & o.mask() == 0
    }

    pub fn complement(&self) -> IndexSet {
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        IndexSet::from_mask(full & !self.mask(), self.ground())
    }

    /// Sorted union of disjoint sets.
    pub fn disjoint_union(&self, o: &IndexSet) -> Result<IndexSet> {
        if !self.is_disjoint(o) {
            return Err(Error::Overlap);
        }
        Ok(IndexSet::from_mask(self.mask() | o.mask(), self.ground().max(o.ground())))
    }

    pub fn rank(&self) -> usize {
        subset_rank(self)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Sign of the permutation sorting the concatenation `(a, b)`.
pub fn shuffle_sign(a: &IndexSet, b: &IndexSet) -> Result<i32> {
    if !a.is_disjoint(b) {
        return Err(Error::Overlap);
    }
    Ok(shuffle_sign_masks(a.mask(), b.mask()))
}

/// Shuffle sign for disjoint masks: parity of pairs (x in a, y in b) with x > y.
pub fn shuffle_sign_masks(a: u64, b: u64) -> i32 {
    debug_assert_eq!(a & b, 0);
    let mut inv = 0u32;
    let mut rest = a;
    while rest != 0 {
        let x = rest.trailing_zeros();
        inv += (b & ((1u64 << x) - 1)).count_ones();
        rest &= rest - 1;
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All splittings `I = I' ⊔ I''` with `|I'| = k`, lex on `I'`, with `shuffle_sign(I', I'')`.
pub fn comultiply(set: &IndexSet, k: usize) -> Result<Vec<(IndexSet, IndexSet, i32)>> {
    if k > set.len() {
        return Err(Error::OutOfRange(format!("k = {k} exceeds |I| = {}", set.len())));
    }
    let elems = set.to_vec();
    let n = set.ground();
    let mut out = Vec::with_capacity(binom(elems.len(), k));
    for pick in subsets(k, elems.len()) {
        let mut first = 0u64;
        for p in pick.elems() {
            first |= 1 << (elems[p - 1] - 1);
        }
        let second = set.mask() & !first;
        out.push((IndexSet::from_mask(first, n), IndexSet::from_mask(second, n), shuffle_sign_masks(first, second)));
    }
    Ok(out)
}

/// Position of a `k`-subset of [1, N] in lex order.
pub fn subset_rank(set: &IndexSet) -> usize {
    let n = set.ground();
    let k = set.len();
    let mut r = 0;
    let mut prev = 0;
    for (t, a) in set.elems().enumerate() {
        for v in prev + 1..a {
            r += binom(n - v, k - t - 1);
        }
        prev = a;
    }
    r
}

pub fn subset_unrank(mut r: usize, k: usize, n: usize) -> Result<IndexSet> {
    if k > n || r >= binom(n, k) {
        return Err(Error::OutOfRange(format!("rank {r} outside [0, C({n},{k}))")));
    }
    let mut elems = Vec::with_capacity(k);
    let mut v = 1;
    for t in 0..k {
        loop {
            let block = binom(n - v, k - t - 1);
            if r < block {
                break;
            }
            r -= block;
            v += 1;
        }
        elems.push(v);
        v += 1;
    }
    IndexSet::new(&elems, n)
}

/// All `k`-subsets of [1, N] in lex order.
pub fn subsets(k: usize, n: usize) -> Vec<IndexSet> {
    let mut out = Vec::with_capacity(binom(n, k));
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(IndexSet::new(&cur, n).expect("valid subset"));
        let mut t = k;
        while t > 0 && cur[t - 1] == n - k + t {
            t -= 1;
        }
        if t == 0 {
            return out;
        }
        cur[t - 1] += 1;
        for s in t..k {
            cur[s] = cur[s - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn s(e: &[usize]) -> IndexSet {
        IndexSet::new(e, 8).unwrap()
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle_sign(&s(&[1, 2]), &s(&[3, 4])).unwrap(), 1);
        assert_eq!(shuffle_sign(&s(&[2]), &s(&[1, 3])).unwrap(), -1);
        assert_eq!(shuffle_sign(&s(&[2, 4]), &s(&[1, 3])).unwrap(), -1);
        assert_eq!(shuffle_sign(&s(&[1, 2]), &s(&[2])), Err(Error::Overlap));
    }

    #[test]
    fn comultiply_examples() {
        let i = s(&[1, 2, 3]);
        let got = comultiply(&i, 1).unwrap();
        let want = vec![(s(&[1]), s(&[2, 3]), 1), (s(&[2]), s(&[1, 3]), -1), (s(&[3]), s(&[1, 2]), 1)];
        assert_eq!(got, want);
        assert_eq!(comultiply(&i, 0).unwrap(), vec![(s(&[]), i.clone(), 1)]);
        assert_eq!(comultiply(&i, 3).unwrap(), vec![(i.clone(), s(&[]), 1)]);
        assert!(comultiply(&i, 4).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(subset_unrank(0, 2, 5).unwrap().to_vec(), vec![1, 2]);
        assert_eq!(subset_rank(&IndexSet::new(&[4, 5], 5).unwrap()), 9);
        assert!(subset_unrank(10, 2, 5).is_err());
        let all = subsets(3, 6);
        assert_eq!(all.len(), 20);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (i, t) in all.iter().enumerate() {
            assert_eq!(subset_rank(t), i);
        }
        assert_eq!(subsets(0, 4), vec![IndexSet::empty(4)]);
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(IndexSet::new(&[2, 1], 5).is_err());
        assert!(IndexSet::new(&[0], 5).is_err());
        assert!(IndexSet::new(&[6], 5).is_err());
    }

    fn arb_disjoint() -> impl Strategy<Value = (IndexSet, IndexSet)> {
        prop::collection::vec(0u8..3, 10).prop_map(|tags| {
            let a: Vec<usize> = (1..=10).filter(|&e| tags[e - 1] == 1).collect();
            let b: Vec<usize> = (1..=10).filter(|&e| tags[e - 1] == 2).collect();
            (IndexSet::new(&a, 10).unwrap(), IndexSet::new(&b, 10).unwrap())
        })
    }

    fn parity_of(seq: &[usize]) -> i32 {
        let mut inv = 0;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] > seq[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    proptest! {
        #[test]
        fn swapped_shuffle_sign((a, b) in arb_disjoint()) {
            let expect = if (a.len() * b.len()) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(shuffle_sign(&a, &b).unwrap() * shuffle_sign(&b, &a).unwrap(), expect);
        }

        #[test]
        fn shuffle_sign_is_inversion_parity((a, b) in arb_disjoint()) {
            let mut cat = a.to_vec();
            cat.extend(b.elems());
            prop_assert_eq!(shuffle_sign(&a, &b).unwrap(), parity_of(&cat));
        }

        #[test]
        fn rank_unrank_inverse(n in 0usize..12, k in 0usize..12, seed in any::<usize>()) {
            prop_assume!(k <= n);
            let r = seed % binom(n, k);
            prop_assert_eq!(subset_rank(&subset_unrank(r, k, n).unwrap()), r);
        }

        #[test]
        fn comultiply_is_coassociative(mask in 0u64..64, k in 0usize..7, m in 0usize..7) {
            let set = IndexSet::from_mask(mask, 6);
            prop_assume!(k + m <= set.len());
            let mut left = Vec::new();
            for (a, rest, s1) in comultiply(&set, k).unwrap() {
                for (b, c, s2) in comultiply(&rest, m).unwrap() {
                    left.push((a.clone(), b, c, s1 * s2));
                }
            }
            let mut right = Vec::new();
            for (x, c, s1) in comultiply(&set, k + m).unwrap() {
                for (a, b, s2) in comultiply(&x, k).unwrap() {
                    right.push((a, b, c.clone(), s1 * s2));
                }
            }
            left.sort();
            right.sort();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn reassembly_sign_is_consistent(mask in 0u64..256, k in 0usize..9) {
            let set = IndexSet::from_mask(mask, 8);
            prop_assume!(k <= set.len());
            for (a, b, sign) in comultiply(&set, k).unwrap() {
                let mut cat = a.to_vec();
                cat.extend(b.elems());
                prop_assert_eq!(sign * parity_of(&cat), 1);
                prop_assert_eq!(a.disjoint_union(&b).unwrap(), set.clone());
            }
        }
    }
}
