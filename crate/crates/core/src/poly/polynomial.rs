use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use super::coeff::Coefficient;
use super::monomial::Monomial;
use super::ring::{Multidegree, PolyRing, Weight};
use crate::error::{Error, Result};
use crate::linalg::ScalarRing;

/// Sparse polynomial. Terms are sorted by decreasing lex order on exponent
/// vectors and never hold a zero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<C: Coefficient = BigInt> {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, C)>,
}

pub fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        debug_assert!(C::supports(ring.domain()));
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: C) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.push((Monomial::one(ring.nvars()), c));
        }
        p
    }

    pub fn from_i64(ring: &Arc<PolyRing>, c: i64) -> Self {
        Self::constant(ring, C::from_i64(c, ring.domain()))
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::from_i64(ring, 1)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::var(ring.nvars(), i), C::from_i64(1, ring.domain()))] }
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: C) -> Self {
        assert_eq!(m.nvars(), ring.nvars());
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Normalizes arbitrary terms: combines duplicates, drops zeros, sorts.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, C)>) -> Result<Self> {
        if !C::supports(ring.domain()) {
            return Err(Error::InvalidParameter(format!("coefficient type does not match domain {}", ring.domain())));
        }
        if let Some((m, _)) = terms.iter().find(|(m, _)| m.nvars() != ring.nvars()) {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector of length {} in a ring with {} variables",
                m.nvars(),
                ring.nvars()
            )));
        }
        Ok(Self::collect(ring, terms))
    }

    fn collect(ring: &Arc<PolyRing>, terms: Vec<(Monomial, C)>) -> Self {
        let mut acc: FxHashMap<Monomial, C> = FxHashMap::default();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if same_ring(&self.ring, &o.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a.1.add(&b.1);
                    if !c.is_zero() {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Ok(Polynomial { ring: self.ring.clone(), terms: out })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                terms.push((ma.mul(mb), ca.mul(cb)));
            }
        }
        Ok(Self::collect(&self.ring, terms))
    }

    pub fn neg(&self) -> Self {
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a.mul(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect() }
    }

    /// Degree if homogeneous; `Ok(None)` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<Multidegree>> {
        let mut it = self.terms.iter().map(|(m, _)| m.degree(&self.ring));
        let Some(d) = it.next() else { return Ok(None) };
        if it.all(|e| e == d) {
            Ok(Some(d))
        } else {
            Err(Error::InhomogeneousPolynomial(self.to_string()))
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_ok()
    }

    /// Torus weight if every term has the same weight; `Ok(None)` for zero.
    pub fn homogeneous_weight(&self) -> Result<Option<Weight>> {
        let mut it = self.terms.iter().map(|(m, _)| m.weight(&self.ring));
        let Some(w) = it.next() else { return Ok(None) };
        if it.all(|e| e == w) {
            Ok(Some(w))
        } else {
            Err(Error::InhomogeneousPolynomial(format!("torus weights differ in {self}")))
        }
    }

    /// Evaluation at a point with coordinates in the same coefficient type.
    pub fn evaluate(&self, point: &[C]) -> Result<C> {
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let domain = self.ring.domain();
        let mut acc = C::from_i64(0, domain);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitutes a polynomial for every variable (all in `target`'s ring).
    pub fn substitute(&self, values: &[Polynomial<C>], target: &Arc<PolyRing>) -> Result<Polynomial<C>> {
        if values.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch("one value per variable required".into()));
        }
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t.checked_mul(&values[i])?;
                }
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| C::from_i64(0, self.ring.domain()))
    }
}

impl Polynomial<BigInt> {
    /// Evaluation with coefficients mapped into another scalar ring.
    pub fn evaluate_in<R: ScalarRing>(&self, ring: &R, point: &[R::Elem]) -> Result<R::Elem> {
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = ring.from_bigint(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = ring.mul(&t, &point[i]);
                }
            }
            acc = ring.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Reduces coefficients into another coefficient type over `target`.
    pub fn map_coefficients<D: Coefficient>(&self, target: &Arc<PolyRing>) -> Polynomial<D> {
        assert_eq!(target.nvars(), self.ring.nvars());
        let domain = target.domain();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), D::from_bigint(c, domain)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Polynomial { ring: target.clone(), terms }
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<C: Coefficient> std::ops::$tr<&Polynomial<C>> for &Polynomial<C> {
            type Output = Polynomial<C>;
            /// Panics on ring mismatch; use the `checked_` variant to get an error instead.
            fn $method(self, o: &Polynomial<C>) -> Polynomial<C> {
                self.$checked(o).expect("ring mismatch")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl<C: Coefficient> std::ops::Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::neg(self)
    }
}

impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::to_text(self))
    }
}

impl<C: Coefficient> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}
