use std::sync::Arc;

use num_bigint::BigInt;
use pfk_core::builders::{build_c, build_koszul, PfaffianContext};
use pfk_core::complex::{complex_from_json, complex_to_json, dualize, euler_hf, verify_complex};
use pfk_core::hilbert::{hf_m, predicted_hf, FiltrationPrediction, Part};
use pfk_core::homology::{hilbert_function, Homology};
use pfk_core::linalg::{CoeffDomain, PrimeField};
use pfk_core::poly::{Multidegree, PolyRing, Polynomial};
use pfk_core::report::{Entry, Report, ReportFile, Status};
use proptest::prelude::*;

fn xyz() -> Arc<PolyRing> {
    Arc::new(
        PolyRing::new(vec!["x".into(), "y".into(), "z".into()], vec![Multidegree::single(1); 3], CoeffDomain::INTEGERS).unwrap(),
    )
}

/// Homogeneous form of degree `deg` with the given coefficients on the monomials
/// `x^a y^b z^(deg-a-b)`, in a fixed order.
fn form(ring: &Arc<PolyRing>, deg: u32, coeffs: &[i64]) -> Polynomial {
    let mut p = Polynomial::zero(ring);
    let mut k = 0;
    for a in 0..=deg {
        for b in 0..=deg - a {
            let c = coeffs[k % coeffs.len()];
            k += 1;
            let mut m = Polynomial::from_i64(ring, c);
            for (v, e) in [(0, a), (1, b), (2, deg - a - b)] {
                for _ in 0..e {
                    m = &m * &Polynomial::var(ring, v);
                }
            }
            p = &p + &m;
        }
    }
    p
}

fn forms() -> impl Strategy<Value = Vec<(u32, Vec<i64>)>> {
    prop::collection::vec((1u32..=2, prop::collection::vec(-3i64..=3, 6)), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn euler_identity_for_random_koszul_complexes(spec in forms()) {
        let ring = xyz();
        let gens: Vec<Polynomial> = spec.iter().map(|(d, c)| form(&ring, *d, c)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let k = build_koszul(&ring, &gens).unwrap();
        prop_assert!(verify_complex(&k.complex).unwrap().passed());
        let h = Homology::new(&k.complex, Multidegree::single(4), PrimeField::new(32003).unwrap()).unwrap();
        for d in 0..=4 {
            let d = Multidegree::single(d);
            let (lhs, rhs) = h.euler(d);
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(BigInt::from(rhs), euler_hf(&k.complex, d));
            for j in k.complex.lo()..=k.complex.hi() {
                let s = h.slice(j, d);
                prop_assert!(s.boundaries <= s.cycles);
            }
        }
    }

    #[test]
    fn json_round_trip(spec in forms()) {
        let ring = xyz();
        let gens: Vec<Polynomial> = spec.iter().map(|(d, c)| form(&ring, *d, c)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let c = build_koszul(&ring, &gens).unwrap().complex;
        let s = complex_to_json(&c);
        let back = complex_from_json(&s).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(complex_to_json(&back), s);
    }

    #[test]
    fn predictions_are_nonnegative(n in 1usize..=4, d in -2i64..=14) {
        for j in 0..n {
            prop_assert!(predicted_hf(n, j, Part::A, d).unwrap() >= BigInt::from(0));
        }
        for j in 0..n.saturating_sub(1) {
            prop_assert!(predicted_hf(n, j, Part::B, d).unwrap() >= BigInt::from(0));
        }
    }

    #[test]
    fn top_prediction_is_the_quotient_shifted_to_the_socle(n in 2usize..=4, d in 0i64..=30) {
        let socle = ((n - 1) * (2 * n + 1)) as i64;
        prop_assert_eq!(predicted_hf(n, 0, Part::B, d).unwrap(), predicted_hf(n, 0, Part::A, d - socle).unwrap());
    }

    #[test]
    fn prediction_layers_use_the_stated_modules(n in 1usize..=4, k in 0usize..=6) {
        prop_assume!(k <= 2 * n - 2);
        let p = FiltrationPrediction::for_homology(n, k).unwrap();
        prop_assert_eq!(p.homology, k);
        for l in &p.layers {
            prop_assert!(l.module < n);
        }
    }

    #[test]
    fn report_json_round_trip(rows in prop::collection::vec((0i32..4, 0i32..9, 0u32..500, 0u32..500), 0..12), seed in any::<u64>()) {
        let mut r = Report::new("prop", serde_json::json!({"rows": rows.len()}), seed);
        for (j, d, p, c) in &rows {
            r.compare("hf", Some(*j), Some(Multidegree::single(*d)), p, c);
        }
        let all_equal = rows.iter().all(|(_, _, p, c)| p == c);
        prop_assert_eq!(r.status == Status::Pass, all_equal);
        r.computed(Entry::new("extra, \"quoted\"", None, Some(Multidegree::bi(1, 2)), 3));
        let f = ReportFile { reports: vec![r] };
        let back = ReportFile::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_json(), f.to_json());
    }
}

/// The twists of the resolution of `M_i` are symmetric, so dualizing `C^i` into
/// `A(-(2n+1-i))` gives a complex with the same Euler characteristic, which is `HF(M_i)`.
#[test]
fn dual_resolution_has_the_same_hilbert_function() {
    for n in 1..=3usize {
        let ctx = PfaffianContext::new(n).unwrap();
        for i in 0..n {
            let c = build_c(&ctx, i).unwrap();
            let top = (2 * n + 1 - i) as i32;
            let dual = dualize(&c, Multidegree::single(-top)).unwrap();
            assert_eq!(dual.ranks(), c.ranks());
            if n <= 2 {
                assert!(verify_complex(&dual).unwrap().passed());
            }
            for d in 0..=8 {
                let e = euler_hf(&c, Multidegree::single(d));
                assert_eq!(e, hf_m(n, i, d as i64).unwrap(), "n={n} i={i} d={d}");
                assert_eq!(euler_hf(&dual, Multidegree::single(d)), e, "dual n={n} i={i} d={d}");
            }
        }
    }
}

/// `C^0` resolves `A/I`, so its `H_0` is the Hilbert function of the quotient.
#[test]
fn c0_homology_is_the_quotient() {
    let ctx = PfaffianContext::new(2).unwrap();
    let c = build_c(&ctx, 0).unwrap();
    let hf = hilbert_function(&c, 0, Multidegree::single(5), CoeffDomain::prime_field(65521).unwrap()).unwrap();
    for d in 0..=5 {
        assert_eq!(BigInt::from(hf[&Multidegree::single(d)]), hf_m(2, 0, d as i64).unwrap());
    }
    for j in 1..=3 {
        let hj = hilbert_function(&c, j, Multidegree::single(5), CoeffDomain::prime_field(65521).unwrap()).unwrap();
        assert!(hj.values().all(|&v| v == 0), "H_{j} of an acyclic complex");
    }
}
