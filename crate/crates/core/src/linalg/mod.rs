//! Coefficient domains and exact linear algebra over Z, Q and F_p.

mod bareiss;
mod domain;
mod elim;
mod snf;
mod sparse;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use bareiss::bareiss_rank;
pub use domain::{is_prime, CoeffDomain, DomainKind, Field, Integers, PrimeField, Rationals, ScalarRing};
pub use elim::{eliminate, image_contains_vec, kernel_from_elimination, kernel_of, rank_of, EchelonBasis, Elimination};
pub use snf::{dense_snf, smith_normal_form, SnfOutcome, DENSE_SNF_LIMIT};
pub use sparse::{SparseMatrix, SparseVec};

use crate::error::{Error, Result};

/// Default primes for modular certificates.
pub const DEFAULT_PRIMES: [u32; 2] = [32003, 65521];

/// Dense Bareiss is used for rational ranks when the block is at most this
/// many entries and at least a quarter full.
const BAREISS_MAX_ENTRIES: usize = 40_000;

/// Rank of an integer matrix over a field domain.
pub fn rank(m: &SparseMatrix<BigInt>, d: CoeffDomain) -> Result<usize> {
    match d.kind() {
        DomainKind::Integers => Err(Error::RequiresField),
        DomainKind::PrimeField(p) => {
            let f = PrimeField::new(p)?;
            Ok(rank_of(&f, &m.map(&f, |v| f.from_bigint(v))))
        }
        DomainKind::Rationals => Ok(rational_rank(m)),
    }
}

/// Rank over Q: Bareiss on small dense-ish blocks, sparse elimination otherwise.
pub fn rational_rank(m: &SparseMatrix<BigInt>) -> usize {
    let size = m.rows() * m.cols();
    if size == 0 {
        return 0;
    }
    if size <= BAREISS_MAX_ENTRIES && 4 * m.nnz() >= size {
        return bareiss_rank(m.to_dense(&Integers));
    }
    let q = m.map(&Rationals, |v| BigRational::from_integer(v.clone()));
    rank_of(&Rationals, &q)
}

/// Basis of the right null space over a field domain, returned as an integer
/// matrix when the domain is F_p (canonical residues) or as rationals scaled
/// column-wise to primitive integer vectors when the domain is Q.
pub fn kernel_basis(m: &SparseMatrix<BigInt>, d: CoeffDomain) -> Result<SparseMatrix<BigInt>> {
    match d.kind() {
        DomainKind::Integers => Err(Error::RequiresField),
        DomainKind::PrimeField(p) => {
            let f = PrimeField::new(p)?;
            let k = kernel_of(&f, &m.map(&f, |v| f.from_bigint(v)));
            Ok(k.map(&Integers, |v| BigInt::from(*v)))
        }
        DomainKind::Rationals => {
            let qm = m.map(&Rationals, |v| BigRational::from_integer(v.clone()));
            let k = kernel_of(&Rationals, &qm);
            let cols = k.col_vecs().into_iter().map(primitive_integer_vector).collect();
            Ok(SparseMatrix::from_columns(m.cols(), cols))
        }
    }
}

fn primitive_integer_vector(v: SparseVec<BigRational>) -> SparseVec<BigInt> {
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let lcm = v.iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let scaled: Vec<(usize, BigInt)> = v
        .iter()
        .map(|(i, x)| (*i, (x * BigRational::from_integer(lcm.clone())).to_integer()))
        .collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if g.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|(i, x)| (i, x / &g)).collect()
}

/// True iff `v` is in the column span of `m` over the field domain.
pub fn image_contains(m: &SparseMatrix<BigInt>, v: &[BigInt], d: CoeffDomain) -> Result<bool> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!("vector of length {} against {} rows", v.len(), m.rows())));
    }
    match d.kind() {
        DomainKind::Integers => Err(Error::RequiresField),
        DomainKind::PrimeField(p) => {
            let f = PrimeField::new(p)?;
            let sv: SparseVec<u32> = v
                .iter()
                .enumerate()
                .map(|(i, x)| (i, f.from_bigint(x)))
                .filter(|(_, x)| *x != 0)
                .collect();
            Ok(image_contains_vec(&f, &m.map(&f, |x| f.from_bigint(x)), &sv))
        }
        DomainKind::Rationals => {
            let sv: SparseVec<BigRational> = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
                .map(|(i, x)| (i, BigRational::from_integer(x.clone())))
                .collect();
            let qm = m.map(&Rationals, |x| BigRational::from_integer(x.clone()));
            Ok(image_contains_vec(&Rationals, &qm, &sv))
        }
    }
}

/// Elementary divisors of an integer matrix (nonzero, in divisibility order).
/// Returns `None` when the residual dense problem exceeds the SNF size limit.
pub fn elementary_divisors(m: &SparseMatrix<BigInt>) -> Option<Vec<BigInt>> {
    smith_normal_form(m).map(|o| o.divisors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> SparseMatrix<BigInt> {
        let d: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        SparseMatrix::from_dense(&Integers, &d)
    }

    fn f7() -> CoeffDomain {
        CoeffDomain::prime_field(7).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&mat(&[&[1, 0], &[0, 1]]), f7()).unwrap(), 2);
        assert_eq!(rank(&SparseMatrix::zero(3, 4), CoeffDomain::rationals()).unwrap(), 0);
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]]), CoeffDomain::rationals()).unwrap(), 1);
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]]), CoeffDomain::integers()), Err(Error::RequiresField));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&mat(&[&[1, 1]]), CoeffDomain::rationals()).unwrap();
        assert_eq!(k.cols(), 1);
        let col = &k.col_vecs()[0];
        assert_eq!(col[0].1, -col[1].1.clone());
        assert_eq!(kernel_basis(&mat(&[&[1, 0], &[0, 1]]), f7()).unwrap().cols(), 0);
        let k = kernel_basis(&mat(&[&[1, 2], &[2, 4]]), CoeffDomain::rationals()).unwrap();
        assert_eq!(k.cols(), 1);
        let col = &k.col_vecs()[0];
        // proportional to (2, -1)
        assert_eq!(&col[0].1 + &col[1].1 * BigInt::from(2), BigInt::from(0));
        assert!(kernel_basis(&mat(&[&[1]]), CoeffDomain::integers()).is_err());
    }

    #[test]
    fn image_examples() {
        let q = CoeffDomain::rationals();
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(image_contains(&mat(&[&[1, 0], &[0, 1]]), &v(&[3, -5]), q).unwrap());
        assert!(!image_contains(&SparseMatrix::zero(2, 2), &v(&[1, 0]), q).unwrap());
        assert!(image_contains(&mat(&[&[1], &[2]]), &v(&[2, 4]), q).unwrap());
        assert!(!image_contains(&mat(&[&[1], &[2]]), &v(&[1, 0]), q).unwrap());
        assert!(image_contains(&mat(&[&[1], &[2]]), &v(&[1]), q).is_err());
    }
}
