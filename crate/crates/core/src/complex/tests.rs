use super::*;
use crate::linalg::{rank, CoeffDomain, Integers};
use crate::poly::{Multidegree, PolyRing};

fn xy_ring() -> Arc<PolyRing> {
    Arc::new(PolyRing::new(vec!["x".into(), "y".into()], vec![Multidegree::single(1); 2], CoeffDomain::INTEGERS).unwrap())
}

/// Koszul complex on (x, y): R(-2) -> R(-1)^2 -> R.
fn koszul_xy() -> FreeComplex {
    let r = xy_ring();
    let x = Polynomial::var(&r, 0);
    let y = Polynomial::var(&r, 1);
    let m0 = GradedFreeModule::new(vec![GeneratorLabel::scalar(Multidegree::single(0))]);
    let m1 = GradedFreeModule::new(vec![GeneratorLabel::scalar(Multidegree::single(-1)); 2]);
    let m2 = GradedFreeModule::new(vec![GeneratorLabel::scalar(Multidegree::single(-2))]);
    let d1 = PolyMatrix::from_entries(1, 2, vec![(0, 0, x.clone()), (0, 1, y.clone())]).unwrap();
    let d2 = PolyMatrix::from_entries(2, 1, vec![(0, 0, -&y), (1, 0, x)]).unwrap();
    FreeComplex::new(r, 0, vec![m0, m1, m2], vec![d1, d2]).unwrap()
}

#[test]
fn koszul_is_a_complex() {
    let c = koszul_xy();
    let chk = verify_complex(&c).unwrap();
    assert!(chk.passed());
    assert_eq!(chk.pairs_checked, 1);
}

#[test]
fn slices_compose_to_zero() {
    let c = koszul_xy();
    for d in 0..5 {
        let d = Multidegree::single(d);
        let a = slice(&c, 1, d).unwrap();
        let b = slice(&c, 2, d).unwrap();
        assert_eq!(a.cols(), b.rows());
        let p = a.mul(&Integers, &b).unwrap();
        assert_eq!(p.nnz(), 0);
    }
}

#[test]
fn degree_one_slice() {
    let c = koszul_xy();
    let s = slice(&c, 1, Multidegree::single(1)).unwrap();
    assert_eq!((s.rows(), s.cols()), (2, 2));
    assert_eq!(rank(&s, CoeffDomain::RATIONALS).unwrap(), 2);
    let s = slice(&c, 2, Multidegree::single(2)).unwrap();
    assert_eq!((s.rows(), s.cols()), (4, 1));
    assert_eq!(rank(&s, CoeffDomain::RATIONALS).unwrap(), 1);
}

#[test]
fn inhomogeneous_entry_rejected() {
    let c = koszul_xy();
    let r = c.ring().clone();
    let bad = &Polynomial::var(&r, 0) * &Polynomial::var(&r, 1);
    assert!(matches!(c.with_entry(1, 0, 0, bad), Err(Error::Inhomogeneous { .. })));
}

#[test]
fn sign_flip_breaks_complex() {
    let c = koszul_xy();
    let y = Polynomial::var(c.ring(), 1);
    let m = c.with_entry(2, 0, 0, y).unwrap();
    let chk = verify_complex(&m).unwrap();
    assert!(!chk.passed());
    assert_eq!(chk.failures.len(), 1);
}

#[test]
fn dualize_twice_is_identity() {
    let c = koszul_xy();
    let s = Multidegree::single(-2);
    let dd = dualize(&dualize(&c, s).unwrap(), s).unwrap();
    assert_eq!(dd, c);
    assert!(verify_complex(&dualize(&c, s).unwrap()).unwrap().passed());
}

#[test]
fn euler_matches_quotient() {
    let c = koszul_xy();
    assert_eq!(euler_hf(&c, Multidegree::single(0)), BigInt::from(1));
    for d in 1..6 {
        assert_eq!(euler_hf(&c, Multidegree::single(d)), BigInt::from(0));
    }
}

#[test]
fn json_round_trip() {
    let c = koszul_xy();
    let s = complex_to_json(&c);
    assert_eq!(complex_from_json(&s).unwrap(), c);
    assert!(complex_from_json("{\"ring\":1}").is_err());
}
