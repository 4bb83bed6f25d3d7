use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{CoeffDomain, DomainKind};

/// Coefficient type of a [`Polynomial`](super::Polynomial). Each implementor
/// serves exactly one kind of [`CoeffDomain`].
pub trait Coefficient: Clone + PartialEq + Eq + Debug + Send + Sync + 'static {
    fn supports(domain: CoeffDomain) -> bool;
    fn from_bigint(v: &BigInt, domain: CoeffDomain) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_decimal(&self) -> String;
    fn parse(s: &str, domain: CoeffDomain) -> Result<Self>;

    fn from_i64(v: i64, domain: CoeffDomain) -> Self {
        Self::from_bigint(&BigInt::from(v), domain)
    }

    fn is_one(&self) -> bool;
}

impl Coefficient for BigInt {
    fn supports(domain: CoeffDomain) -> bool {
        domain.kind() == DomainKind::Integers
    }
    fn from_bigint(v: &BigInt, _: CoeffDomain) -> Self {
        v.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_decimal(&self) -> String {
        self.to_string()
    }
    fn parse(s: &str, _: CoeffDomain) -> Result<Self> {
        s.parse().map_err(|_| Error::Parse(format!("bad integer '{s}'")))
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
}

impl Coefficient for BigRational {
    fn supports(domain: CoeffDomain) -> bool {
        domain.kind() == DomainKind::Rationals
    }
    fn from_bigint(v: &BigInt, _: CoeffDomain) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_decimal(&self) -> String {
        self.to_string()
    }
    fn parse(s: &str, _: CoeffDomain) -> Result<Self> {
        let bad = || Error::Parse(format!("bad rational '{s}'"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if Zero::is_zero(&d) {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
}

/// Element of F_p carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn new(value: i64, modulus: u32) -> Self {
        Fp { value: value.rem_euclid(modulus as i64) as u32, modulus }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }
}

impl Coefficient for Fp {
    fn supports(domain: CoeffDomain) -> bool {
        matches!(domain.kind(), DomainKind::PrimeField(_))
    }
    fn from_bigint(v: &BigInt, domain: CoeffDomain) -> Self {
        let p = domain.characteristic();
        assert!(p > 0, "F_p coefficient needs a prime-field domain");
        let r = v.mod_floor(&BigInt::from(p)).to_u32().unwrap();
        Fp { value: r, modulus: p }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, o: &Self) -> Self {
        assert_eq!(self.modulus, o.modulus, "mixed moduli");
        Fp { value: ((self.value as u64 + o.value as u64) % self.modulus as u64) as u32, modulus: self.modulus }
    }
    fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.modulus, o.modulus, "mixed moduli");
        Fp { value: ((self.value as u64 * o.value as u64) % self.modulus as u64) as u32, modulus: self.modulus }
    }
    fn neg(&self) -> Self {
        Fp { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
    fn to_decimal(&self) -> String {
        self.value.to_string()
    }
    fn parse(s: &str, domain: CoeffDomain) -> Result<Self> {
        let v: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad integer '{s}'")))?;
        Ok(Self::from_bigint(&v, domain))
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
}
