//! Coefficient domains and the scalar arithmetic used by elimination.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which base ring a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainKind {
    Integers,
    Rationals,
    PrimeField(u32),
}

/// A validated coefficient domain. Prime moduli are checked at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffDomain {
    kind: DomainKind,
}

impl CoeffDomain {
    pub const INTEGERS: CoeffDomain = CoeffDomain { kind: DomainKind::Integers };
    pub const RATIONALS: CoeffDomain = CoeffDomain { kind: DomainKind::Rationals };

    pub fn integers() -> Self {
        Self::INTEGERS
    }

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoeffDomain { kind: DomainKind::PrimeField(p as u32) })
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn is_field(&self) -> bool {
        !matches!(self.kind, DomainKind::Integers)
    }

    pub fn characteristic(&self) -> u32 {
        match self.kind {
            DomainKind::PrimeField(p) => p,
            _ => 0,
        }
    }
}

impl fmt::Display for CoeffDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DomainKind::Integers => write!(f, "z"),
            DomainKind::Rationals => write!(f, "q"),
            DomainKind::PrimeField(p) => write!(f, "zp:{p}"),
        }
    }
}

impl FromStr for CoeffDomain {
    type Err = Error;

    /// Accepts `q`, `z` or `zp:P`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "q" | "Q" => Ok(Self::RATIONALS),
            "z" | "Z" => Ok(Self::INTEGERS),
            _ => {
                let rest = s
                    .strip_prefix("zp:")
                    .ok_or_else(|| Error::Parse(format!("unknown field spec '{s}'")))?;
                let p: u64 = rest
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad modulus '{rest}'")))?;
                Self::prime_field(p)
            }
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Arithmetic needed by sparse elimination. Pivoting is restricted to units,
/// so the same engine serves fields (every nonzero is a unit) and the
/// integers (only ±1).
pub trait ScalarRing: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a unit. Panics on non-units.
    fn unit_inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    /// `a - f*b`
    fn mul_sub(&self, a: &Self::Elem, f: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(f, b))
    }
}

/// Marker for rings in which every nonzero element is a unit.
pub trait Field: ScalarRing {
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        self.unit_inv(a)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn domain(&self) -> CoeffDomain;
}

/// Z/p with word arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        CoeffDomain::prime_field(p as u64)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let m = self.p as u64;
        let mut r = 1u64;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    }
}

impl ScalarRing for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn is_unit(&self, a: &u32) -> bool {
        *a != 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn unit_inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        self.pow(*a as u64, self.p as u64 - 2) as u32
    }
    fn from_bigint(&self, v: &BigInt) -> u32 {
        let m = BigInt::from(self.p);
        v.mod_floor(&m).to_u32().expect("residue fits in u32")
    }
    #[inline]
    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i64(v)
    }
    #[inline]
    fn mul_sub(&self, a: &u32, f: &u32, b: &u32) -> u32 {
        let m = self.p as u64;
        let prod = (*f as u64 * *b as u64) % m;
        ((*a as u64 + m - prod) % m) as u32
    }
}

impl Field for PrimeField {
    fn domain(&self) -> CoeffDomain {
        CoeffDomain { kind: DomainKind::PrimeField(self.p) }
    }
}

/// Q with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl ScalarRing for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigRational) -> bool {
        !a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn unit_inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
}

impl Field for Rationals {
    fn domain(&self) -> CoeffDomain {
        CoeffDomain::RATIONALS
    }
}

/// Z, usable for unit-pivot elimination ahead of a Smith normal form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl ScalarRing for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn unit_inv(&self, a: &BigInt) -> BigInt {
        assert!(self.is_unit(a), "{a} is not a unit in Z");
        a.clone()
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_round_trip() {
        for s in ["q", "z", "zp:32003", "zp:2"] {
            let d: CoeffDomain = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert_eq!("zp:32004".parse::<CoeffDomain>(), Err(Error::NotPrime(32004)));
        assert!("zp:2147483659".parse::<CoeffDomain>().is_err());
        assert!("r".parse::<CoeffDomain>().is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(65521).unwrap();
        for a in [1u32, 2, 3, 100, 65520] {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 65520);
        assert_eq!(f.from_bigint(&BigInt::from(-65522)), 65520);
    }
}
