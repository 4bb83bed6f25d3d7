use std::fmt;
use std::ops::{Add, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::CoeffDomain;

/// Internal degree of a homogeneous element; arity 1 (single grading) or 2 (bigrading).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multidegree {
    arity: u8,
    c: [i32; 2],
}

impl Multidegree {
    pub fn single(d: i32) -> Self {
        Multidegree { arity: 1, c: [d, 0] }
    }

    pub fn bi(a: i32, b: i32) -> Self {
        Multidegree { arity: 2, c: [a, b] }
    }

    pub fn zero(arity: usize) -> Self {
        assert!(arity == 1 || arity == 2, "multidegree arity must be 1 or 2");
        Multidegree { arity: arity as u8, c: [0, 0] }
    }

    pub fn from_slice(c: &[i32]) -> Result<Self> {
        match c {
            [a] => Ok(Self::single(*a)),
            [a, b] => Ok(Self::bi(*a, *b)),
            _ => Err(Error::InvalidParameter(format!("multidegree arity {} not in {{1, 2}}", c.len()))),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn components(&self) -> &[i32] {
        &self.c[..self.arity as usize]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.components().iter().all(|&x| x >= 0)
    }

    pub fn total(&self) -> i32 {
        self.components().iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Multidegree) -> bool {
        self.components().iter().zip(other.components()).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, k: i32) -> Self {
        Multidegree { arity: self.arity, c: [self.c[0] * k, self.c[1] * k] }
    }
}

impl Add for Multidegree {
    type Output = Multidegree;
    fn add(self, o: Multidegree) -> Multidegree {
        debug_assert_eq!(self.arity, o.arity);
        Multidegree { arity: self.arity, c: [self.c[0] + o.c[0], self.c[1] + o.c[1]] }
    }
}

impl Sub for Multidegree {
    type Output = Multidegree;
    fn sub(self, o: Multidegree) -> Multidegree {
        debug_assert_eq!(self.arity, o.arity);
        Multidegree { arity: self.arity, c: [self.c[0] - o.c[0], self.c[1] - o.c[1]] }
    }
}

impl Neg for Multidegree {
    type Output = Multidegree;
    fn neg(self) -> Multidegree {
        Multidegree { arity: self.arity, c: [-self.c[0], -self.c[1]] }
    }
}

/// Serialized as an integer (single grading) or a pair.
impl serde::Serialize for Multidegree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.arity {
            1 => s.serialize_i32(self.c[0]),
            _ => self.components().serialize(s),
        }
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.arity {
            1 => write!(f, "{}", self.c[0]),
            _ => write!(f, "({},{})", self.c[0], self.c[1]),
        }
    }
}

/// Torus weight (fine grading by the diagonal of GL(E)); empty when the ring has none.
pub type Weight = SmallVec<[i32; 10]>;

/// Polynomial ring with graded variables and an optional torus weight per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    names: Vec<String>,
    degrees: Vec<Multidegree>,
    torus: Vec<Weight>,
    torus_dim: usize,
    domain: CoeffDomain,
}

impl PolyRing {
    pub fn new(names: Vec<String>, degrees: Vec<Multidegree>, domain: CoeffDomain) -> Result<Self> {
        Self::with_torus(names, degrees, Vec::new(), domain)
    }

    /// `torus` is either empty or holds one weight vector per variable, all of one length.
    pub fn with_torus(
        names: Vec<String>,
        degrees: Vec<Multidegree>,
        torus: Vec<Weight>,
        domain: CoeffDomain,
    ) -> Result<Self> {
        if names.len() != degrees.len() {
            return Err(Error::InvalidParameter("one degree per variable required".into()));
        }
        if names.len() > u16::MAX as usize {
            return Err(Error::InvalidParameter("too many variables".into()));
        }
        let arity = degrees.first().map_or(1, |d| d.arity());
        if degrees.iter().any(|d| d.arity() != arity) {
            return Err(Error::InvalidParameter("variable degrees must share one arity".into()));
        }
        if degrees.iter().any(|d| !d.is_nonnegative() || d.total() == 0) {
            return Err(Error::InvalidParameter("variable degrees must be nonnegative and nonzero".into()));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(Error::InvalidParameter("variable names must be distinct".into()));
        }
        if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
            return Err(Error::InvalidParameter(format!("invalid variable name '{bad}'")));
        }
        let torus_dim = torus.first().map_or(0, |w| w.len());
        if !torus.is_empty() && (torus.len() != names.len() || torus.iter().any(|w| w.len() != torus_dim)) {
            return Err(Error::InvalidParameter("torus weights must be given for every variable with one length".into()));
        }
        Ok(PolyRing { names, degrees, torus, torus_dim, domain })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[Multidegree] {
        &self.degrees
    }

    pub fn degree_of(&self, var: usize) -> Multidegree {
        self.degrees[var]
    }

    pub fn arity(&self) -> usize {
        self.degrees.first().map_or(1, |d| d.arity())
    }

    pub fn domain(&self) -> CoeffDomain {
        self.domain
    }

    pub fn torus(&self) -> &[Weight] {
        &self.torus
    }

    pub fn torus_dim(&self) -> usize {
        self.torus_dim
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero_degree(&self) -> Multidegree {
        Multidegree::zero(self.arity())
    }

    /// Same variables over another coefficient domain.
    pub fn with_domain(&self, domain: CoeffDomain) -> PolyRing {
        PolyRing { domain, ..self.clone() }
    }
}

fn valid_name(n: &str) -> bool {
    let mut chars = n.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_validation() {
        let q = CoeffDomain::rationals();
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert!(PolyRing::new(names(&["x", "y"]), vec![Multidegree::single(1); 2], q).is_ok());
        assert!(PolyRing::new(names(&["x", "x"]), vec![Multidegree::single(1); 2], q).is_err());
        assert!(PolyRing::new(names(&["x", "y"]), vec![Multidegree::single(1), Multidegree::bi(0, 1)], q).is_err());
        assert!(PolyRing::new(names(&["x"]), vec![Multidegree::single(0)], q).is_err());
        assert!(PolyRing::new(names(&["1x"]), vec![Multidegree::single(1)], q).is_err());
    }

    #[test]
    fn multidegree_ops() {
        let a = Multidegree::bi(3, 1);
        let b = Multidegree::bi(1, 2);
        assert_eq!(a + b, Multidegree::bi(4, 3));
        assert_eq!(a - b, Multidegree::bi(2, -1));
        assert!(!(a - b).is_nonnegative());
        assert_eq!(a.to_string(), "(3,1)");
        assert_eq!(Multidegree::single(4).to_string(), "4");
    }
}
