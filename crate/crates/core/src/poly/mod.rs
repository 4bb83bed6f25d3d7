//! Sparse multivariate polynomials over Z, Q or F_p with single or double grading.

mod basis;
mod coeff;
mod monomial;
mod polynomial;
mod ring;
pub mod text;

pub use basis::{binom, binomial, for_each_exponent, monomial_basis, monomial_count};
pub use coeff::{Coefficient, Fp};
pub use monomial::Monomial;
pub use polynomial::{same_ring, Polynomial};
pub use ring::{Multidegree, PolyRing, Weight};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_bigint::BigInt;
    use proptest::prelude::*;

    use super::*;
    use crate::linalg::{CoeffDomain, PrimeField, ScalarRing};

    fn xy() -> Arc<PolyRing> {
        Arc::new(
            PolyRing::new(vec!["x".into(), "y".into(), "z".into()], vec![Multidegree::single(1); 3], CoeffDomain::INTEGERS)
                .unwrap(),
        )
    }

    fn p(r: &Arc<PolyRing>, s: &str) -> Polynomial {
        text::parse_text(r, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let r = xy();
        let x = Polynomial::<BigInt>::var(&r, 0);
        assert!((&x + &x.neg()).is_zero());
        let prod = &(&x + &p(&r, "y")) * &(&x - &p(&r, "y"));
        assert_eq!(prod, p(&r, "x^2 - y^2"));
        assert_eq!(&Polynomial::one(&r) * &prod, prod);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let r1 = xy();
        let r2 = Arc::new(PolyRing::new(vec!["u".into()], vec![Multidegree::single(1)], CoeffDomain::INTEGERS).unwrap());
        let a = Polynomial::<BigInt>::var(&r1, 0);
        let b = Polynomial::<BigInt>::var(&r2, 0);
        assert_eq!(a.checked_add(&b), Err(crate::Error::RingMismatch));
    }

    #[test]
    fn evaluation_examples() {
        let r = xy();
        let v = |a: i64, b: i64, c: i64| [BigInt::from(a), BigInt::from(b), BigInt::from(c)];
        assert_eq!(p(&r, "x*y").evaluate(&v(2, 3, 7)).unwrap(), BigInt::from(6));
        assert_eq!(p(&r, "5").evaluate(&v(9, 9, 9)).unwrap(), BigInt::from(5));
        assert_eq!(p(&r, "x + y").evaluate(&v(1, -1, 0)).unwrap(), BigInt::from(0));
        assert!(p(&r, "x").evaluate(&[BigInt::from(1)]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let r = xy();
        let q = p(&r, "3*x^2*y - z + 2 - 7*x*z^3");
        assert_eq!(q.to_string(), "3*x^2*y + -7*x*z^3 + -1*z + 2");
        assert_eq!(p(&r, &q.to_string()), q);
        assert_eq!(text::parse_json::<BigInt>(&r, &text::to_json(&q)).unwrap(), q);
        assert_eq!(Polynomial::<BigInt>::zero(&r).to_string(), "0");
        assert!(text::parse_text::<BigInt>(&r, "x +").is_err());
        assert!(text::parse_text::<BigInt>(&r, "w").is_err());
    }

    #[test]
    fn homogeneity() {
        let r = xy();
        assert_eq!(p(&r, "x*y + z^2").homogeneous_degree().unwrap(), Some(Multidegree::single(2)));
        assert!(p(&r, "x*y + z").homogeneous_degree().is_err());
        assert_eq!(Polynomial::<BigInt>::zero(&r).homogeneous_degree().unwrap(), None);
    }

    fn arb_poly(r: Arc<PolyRing>) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u8..4, 3), -20i64..20), 0..6).prop_map(move |ts| {
            let terms = ts.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), BigInt::from(c))).collect();
            Polynomial::from_terms(&r, terms).unwrap()
        })
    }

    fn arb_homogeneous(r: Arc<PolyRing>, d: u8) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((0..=d, 0..=d, -9i64..9), 1..5).prop_map(move |ts| {
            let terms = ts
                .into_iter()
                .map(|(a, b, c)| {
                    let a = a.min(d);
                    let b = b.min(d - a);
                    (Monomial::from_exponents(&[a, b, d - a - b]), BigInt::from(c))
                })
                .collect();
            Polynomial::from_terms(&r, terms).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

        #[test]
        fn ring_axioms(a in arb_poly(xy()), b in arb_poly(xy()), c in arb_poly(xy())) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(xy()), b in arb_poly(xy()),
                                        pt in prop::collection::vec(0u32..65521, 3)) {
            let f = PrimeField::new(65521).unwrap();
            let ea = a.evaluate_in(&f, &pt).unwrap();
            let eb = b.evaluate_in(&f, &pt).unwrap();
            prop_assert_eq!((&a * &b).evaluate_in(&f, &pt).unwrap(), f.mul(&ea, &eb));
            prop_assert_eq!((&a + &b).evaluate_in(&f, &pt).unwrap(), f.add(&ea, &eb));
        }

        #[test]
        fn degree_is_additive(a in arb_homogeneous(xy(), 2), b in arb_homogeneous(xy(), 3)) {
            let prod = &a * &b;
            if !prod.is_zero() {
                prop_assert_eq!(prod.homogeneous_degree().unwrap(), Some(Multidegree::single(5)));
            }
        }

        #[test]
        fn text_forms_round_trip(a in arb_poly(xy())) {
            let r = xy();
            prop_assert_eq!(text::parse_text::<BigInt>(&r, &a.to_string()).unwrap(), a.clone());
            prop_assert_eq!(text::parse_json::<BigInt>(&r, &text::to_json(&a)).unwrap(), a);
        }
    }
}
