use smallvec::SmallVec;

use super::ring::{Multidegree, PolyRing, Weight};

/// Dense exponent vector. The derived ordering is lexicographic on exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u8; 40]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u8]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Product; panics if an exponent leaves `u8`.
    pub fn mul(&self, o: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), o.0.len());
        Monomial(
            self.0
                .iter()
                .zip(o.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// `self / o` if `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(o.0.iter()) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    pub fn degree(&self, ring: &PolyRing) -> Multidegree {
        let mut d = ring.zero_degree();
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                d = d + ring.degree_of(i).scale(e as i32);
            }
        }
        d
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn weight(&self, ring: &PolyRing) -> Weight {
        let mut w: Weight = SmallVec::from_elem(0, ring.torus_dim());
        if ring.torus_dim() == 0 {
            return w;
        }
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                for (acc, x) in w.iter_mut().zip(ring.torus()[i].iter()) {
                    *acc += x * e as i32;
                }
            }
        }
        w
    }
}
