//! Closed-form Hilbert functions of the modules `M_i` and the filtration
//! predictions for Koszul homology of the generic Pfaffian ideal.
//!
//! Internal-degree shifts are derived from one bookkeeping rule: an element of
//! internal degree `d` has total functor degree `2d` in `E`, since every
//! variable `φ_ij = e_i ∧ e_j` has degree 2.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::builders::{build_hu_h2_cycle, build_koszul_hu, build_koszul_pfaffian, HUContext, PfaffianContext};
use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::homology::{degrees_up_to, Homology};
use crate::linalg::{CoeffDomain, DomainKind, Field, PrimeField, Rationals};
use crate::poly::{binomial, Multidegree};

/// Monomials of degree `e` in `v` variables.
fn h(v: u64, e: i64) -> BigInt {
    if e < 0 {
        return BigInt::zero();
    }
    binomial(e as u64 + v - 1, v - 1)
}

/// `dim (M_i)_d` from the pure resolution
/// `0 → A(-(2n+1-i))^a → A(-(n+1))^b → A(-(n-i))^b → A^a`, `a = C(2n+1, i)`, `b = C(2n+1, i+1)`.
pub fn hf_m(n: usize, i: usize, d: i64) -> Result<BigInt> {
    if n == 0 || i >= n {
        return Err(Error::OutOfRange(format!("i = {i} for n = {n} (need 0 ≤ i ≤ n-1)")));
    }
    let m = 2 * n as u64 + 1;
    let v = m * (m - 1) / 2;
    let (a, b) = (binomial(m, i as u64), binomial(m, i as u64 + 1));
    let (n, i) = (n as i64, i as i64);
    Ok(&a * h(v, d) - &b * h(v, d - (n - i)) + &b * h(v, d - (n + 1)) - &a * h(v, d - (2 * n + 1 - i)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    /// `F_i H_j / F_{i+1} H_j ≅ M_{j-2i} ⊗ (det E)^j`, `0 ≤ j ≤ n-1`.
    A,
    /// `F_{i+1} H_{2n-2-j} / F_i H_{2n-2-j} ≅ M_{j-2i} ⊗ (det E)^{2n-2-j}`, `0 ≤ j ≤ n-2`.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationLayer {
    pub i: usize,
    /// Index of the module `M_{j-2i}`.
    pub module: usize,
    pub det_power: usize,
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationPrediction {
    pub n: usize,
    pub j: usize,
    pub part: Part,
    /// Homological index whose Hilbert function is predicted.
    pub homology: usize,
    pub layers: Vec<FiltrationLayer>,
}

impl FiltrationPrediction {
    pub fn new(n: usize, j: usize, part: Part) -> Result<Self> {
        let ok = match part {
            Part::A => j < n,
            Part::B => j + 2 <= n,
        };
        if n == 0 || !ok {
            return Err(Error::OutOfRange(format!("j = {j} for part {part:?} with n = {n}")));
        }
        let (nn, jj) = (n as i64, j as i64);
        let layers = (0..=j / 2)
            .map(|i| {
                let ii = i as i64;
                let (det_power, shift) = match part {
                    Part::A => (j, jj * (nn + 1) - ii),
                    Part::B => (2 * n - 2 - j, ((jj - 2 * ii) + (2 * nn - 2 - jj) * (2 * nn + 1)) / 2),
                };
                FiltrationLayer { i, module: j - 2 * i, det_power, shift }
            })
            .collect();
        let homology = match part {
            Part::A => j,
            Part::B => 2 * n - 2 - j,
        };
        Ok(FiltrationPrediction { n, j, part, homology, layers })
    }

    /// The prediction covering `H_k`: part (a) for `k ≤ n-1`, part (b) above.
    pub fn for_homology(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k > 2 * n - 2 {
            return Err(Error::OutOfRange(format!("H_{k} for n = {n}")));
        }
        if k < n {
            Self::new(n, k, Part::A)
        } else {
            Self::new(n, 2 * n - 2 - k, Part::B)
        }
    }

    pub fn hf(&self, d: i64) -> BigInt {
        self.layers
            .iter()
            .map(|l| hf_m(self.n, l.module, d - l.shift).expect("layer module in range"))
            .sum()
    }
}

pub fn predicted_hf(n: usize, j: usize, part: Part, d: i64) -> Result<BigInt> {
    Ok(FiltrationPrediction::new(n, j, part)?.hf(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HfRow {
    pub j: usize,
    pub degree: Multidegree,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub predicted: BigInt,
    pub computed: usize,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationStatus {
    Pass,
    /// The computed table is the prediction moved by a nonzero offset.
    ShiftFalsified,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationSummary {
    pub j: usize,
    pub status: FiltrationStatus,
    /// Offset `δ` with `computed(d) = predicted(d - δ)`, when the shift was falsified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerRow {
    pub degree: Multidegree,
    pub homology: i64,
    pub modules: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub n: usize,
    pub bound: i32,
    pub field: String,
    pub predictions: Vec<FiltrationPrediction>,
    pub rows: Vec<HfRow>,
    pub summary: Vec<FiltrationSummary>,
    pub euler: Vec<EulerRow>,
}

impl FiltrationReport {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|s| s.status == FiltrationStatus::Pass) && self.euler.iter().all(|e| e.homology == e.modules)
    }
}

fn classify(pred: &FiltrationPrediction, computed: &[usize]) -> (FiltrationStatus, Option<i64>) {
    let bound = computed.len() as i64 - 1;
    let matches = |delta: i64| computed.iter().enumerate().all(|(d, c)| pred.hf(d as i64 - delta) == BigInt::from(*c));
    if matches(0) {
        return (FiltrationStatus::Pass, None);
    }
    if computed.iter().any(|&c| c > 0) {
        if let Some(delta) = (1..=bound).flat_map(|k| [-k, k]).find(|&k| matches(k)) {
            return (FiltrationStatus::ShiftFalsified, Some(delta));
        }
    }
    (FiltrationStatus::Fail, None)
}

/// Compares `dim H_j(d)` of the Koszul complex on the Pfaffians with the filtration
/// prediction for every `0 ≤ j ≤ 2n-2` and `0 ≤ d ≤ bound`, and checks the Euler
/// characteristic identity in each degree.
pub fn verify_filtration(n: usize, bound: i32, field: CoeffDomain) -> Result<FiltrationReport> {
    let ctx = PfaffianContext::new(n)?;
    let k = build_koszul_pfaffian(&ctx)?;
    verify_filtration_of(&k.complex, n, bound, field)
}

/// [`verify_filtration`] against a supplied complex, e.g. one read back from disk.
/// Its homology is indexed like the Koszul complex on the `2n+1` Pfaffians.
pub fn verify_filtration_of(c: &FreeComplex, n: usize, bound: i32, field: CoeffDomain) -> Result<FiltrationReport> {
    if bound < 0 {
        return Err(Error::InvalidParameter(format!("degree bound {bound}")));
    }
    let b = Multidegree::single(bound);
    if c.ring().arity() != 1 {
        return Err(Error::InvalidParameter("filtration check needs a singly graded complex".into()));
    }
    match field.kind() {
        DomainKind::Rationals => filtration_with(n, &Homology::new(c, b, Rationals)?, bound, field),
        DomainKind::PrimeField(p) => filtration_with(n, &Homology::new(c, b, PrimeField::new(p)?)?, bound, field),
        DomainKind::Integers => Err(Error::RequiresField),
    }
}

fn filtration_with<F: Field>(n: usize, hom: &Homology<'_, F>, bound: i32, field: CoeffDomain) -> Result<FiltrationReport> {
    let mut report = FiltrationReport {
        n,
        bound,
        field: field.to_string(),
        predictions: Vec::new(),
        rows: Vec::new(),
        summary: Vec::new(),
        euler: Vec::new(),
    };
    for j in 0..=2 * n - 2 {
        let pred = FiltrationPrediction::for_homology(n, j)?;
        let computed: Vec<usize> = (0..=bound).map(|d| hom.slice(j as i32, Multidegree::single(d)).homology).collect();
        for (d, &c) in computed.iter().enumerate() {
            let p = pred.hf(d as i64);
            report.rows.push(HfRow { j, degree: Multidegree::single(d as i32), pass: p == BigInt::from(c), predicted: p, computed: c });
        }
        let (status, offset) = classify(&pred, &computed);
        report.summary.push(FiltrationSummary { j, status, offset });
        report.predictions.push(pred);
    }
    for d in 0..=bound {
        let (homology, modules) = hom.euler(Multidegree::single(d));
        report.euler.push(EulerRow { degree: Multidegree::single(d), homology, modules });
    }
    Ok(report)
}

/// `dim (A/J)_e` for the Huneke–Ulrich ideal `J`, as `dim A_e` minus the rank of the
/// generator multiplication map, for all bidegrees up to `bound`.
pub fn hf_quotient_hu(n: usize, bound: Multidegree, field: CoeffDomain) -> Result<BTreeMap<Multidegree, usize>> {
    let ctx = HUContext::new(n)?;
    let k = build_koszul_hu(&ctx)?;
    let run = |hom: &dyn Fn(Multidegree) -> usize| degrees_up_to(bound).into_iter().map(|e| (e, hom(e))).collect();
    match field.kind() {
        DomainKind::Rationals => {
            let hom = Homology::new(&k.complex, bound, Rationals)?;
            Ok(run(&|e| hom.slice(0, e).homology))
        }
        DomainKind::PrimeField(p) => {
            let hom = Homology::new(&k.complex, bound, PrimeField::new(p)?)?;
            Ok(run(&|e| hom.slice(0, e).homology))
        }
        DomainKind::Integers => Err(Error::RequiresField),
    }
}

/// Shift of the cyclic module `H_2 = (det F) ⊗ A/J(-n-1, -2)`.
pub fn hu_h2_shift(n: usize) -> Multidegree {
    Multidegree::bi(n as i32 + 1, 2)
}

/// Predicted `dim H_2(d)` of the Koszul complex on the Huneke–Ulrich generators, read off
/// a table of `HF(A/J)` (see [`hf_quotient_hu`]) that covers `d - (n+1, 2)`.
pub fn predicted_hf_hu(n: usize, d: Multidegree, quotient: &BTreeMap<Multidegree, usize>) -> Result<usize> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n} (need n ≥ 3)")));
    }
    let e = d - hu_h2_shift(n);
    if !e.is_nonnegative() {
        return Ok(0);
    }
    quotient
        .get(&e)
        .copied()
        .ok_or_else(|| Error::OutOfRange(format!("HF(A/J) table does not reach {e}")))
}

/// The explicit `H_2` cycle of the Huneke–Ulrich Koszul complex, checked at its bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HuCycleCheck {
    pub n: usize,
    pub degree: Multidegree,
    /// `d_2 z = 0` as polynomials.
    pub symbolic_cycle: bool,
    pub boundary: bool,
    pub h2_dim: usize,
}

impl HuCycleCheck {
    pub fn passed(&self) -> bool {
        self.symbolic_cycle && !self.boundary
    }
}

pub fn hu_h2_cycle(n: usize, field: CoeffDomain) -> Result<HuCycleCheck> {
    let ctx = HUContext::new(n)?;
    let k = build_koszul_hu(&ctx)?;
    let z = build_hu_h2_cycle(&ctx, &k)?;
    let d2 = k.complex.differential(2).expect("Koszul complex reaches K_2");
    let symbolic_cycle = d2.apply(&ctx.ring, &z)?.iter().all(|p| p.is_zero());
    let degree = hu_h2_shift(n);
    let (boundary, h2_dim) = match field.kind() {
        DomainKind::Rationals => {
            let h = Homology::new(&k.complex, degree, Rationals)?;
            (h.classify(2, degree, &z)?.1, h.slice(2, degree).homology)
        }
        DomainKind::PrimeField(p) => {
            let h = Homology::new(&k.complex, degree, PrimeField::new(p)?)?;
            (h.classify(2, degree, &z)?.1, h.slice(2, degree).homology)
        }
        DomainKind::Integers => return Err(Error::RequiresField),
    };
    Ok(HuCycleCheck { n, degree, symbolic_cycle, boundary, h2_dim })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HuH2Report {
    pub n: usize,
    pub bound: Multidegree,
    pub field: String,
    pub rows: Vec<HfRow>,
    pub euler: Vec<EulerRow>,
}

impl HuH2Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass) && self.euler.iter().all(|e| e.homology == e.modules)
    }
}

/// `dim H_2(d)` of the Huneke–Ulrich Koszul complex against `HF(A/J)(d - (n+1, 2))` for all
/// bidegrees `d ≤ bound`, with the Euler identity in each bidegree.
pub fn verify_hu_h2(n: usize, bound: Multidegree, field: CoeffDomain) -> Result<HuH2Report> {
    let ctx = HUContext::new(n)?;
    let k = build_koszul_hu(&ctx)?;
    match field.kind() {
        DomainKind::Rationals => hu_h2_with(n, &Homology::new(&k.complex, bound, Rationals)?, bound, field),
        DomainKind::PrimeField(p) => hu_h2_with(n, &Homology::new(&k.complex, bound, PrimeField::new(p)?)?, bound, field),
        DomainKind::Integers => Err(Error::RequiresField),
    }
}

fn hu_h2_with<F: Field>(n: usize, hom: &Homology<'_, F>, bound: Multidegree, field: CoeffDomain) -> Result<HuH2Report> {
    let degrees = degrees_up_to(bound);
    // H_0 of the same complex is A/J
    let quotient: BTreeMap<Multidegree, usize> = degrees.iter().map(|&e| (e, hom.slice(0, e).homology)).collect();
    let mut report = HuH2Report { n, bound, field: field.to_string(), rows: Vec::new(), euler: Vec::new() };
    for &d in &degrees {
        let p = predicted_hf_hu(n, d, &quotient)?;
        let c = hom.slice(2, d).homology;
        report.rows.push(HfRow { j: 2, degree: d, predicted: BigInt::from(p), computed: c, pass: p == c });
        let (homology, modules) = hom.euler(d);
        report.euler.push(EulerRow { degree: d, homology, modules });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn hf_m_examples() {
        assert_eq!(hf_m(2, 0, 2).unwrap(), v(50));
        assert_eq!(hf_m(2, 1, 1).unwrap(), v(40));
        for n in 1..=4 {
            for i in 0..n {
                assert_eq!(hf_m(n, i, 0).unwrap(), binomial(2 * n as u64 + 1, i as u64));
            }
        }
        assert!(hf_m(2, 2, 0).is_err());
    }

    #[test]
    fn shifts() {
        let p = FiltrationPrediction::new(2, 1, Part::A).unwrap();
        assert_eq!(p.layers.iter().map(|l| l.shift).collect::<Vec<_>>(), vec![3]);
        let p = FiltrationPrediction::new(2, 0, Part::B).unwrap();
        assert_eq!((p.homology, p.layers[0].shift), (2, 5));
        let p = FiltrationPrediction::new(4, 2, Part::A).unwrap();
        assert_eq!(p.layers.iter().map(|l| (l.module, l.shift)).collect::<Vec<_>>(), vec![(2, 10), (0, 9)]);
        assert!(FiltrationPrediction::new(2, 1, Part::B).is_err());
        assert!(FiltrationPrediction::new(2, 2, Part::A).is_err());
    }

    #[test]
    fn predictions_for_five_pfaffians() {
        assert_eq!(predicted_hf(2, 0, Part::A, 3).unwrap(), v(175));
        let h1: Vec<BigInt> = (2..=6).map(|d| predicted_hf(2, 1, Part::A, d).unwrap()).collect();
        assert_eq!(h1, [0, 5, 40, 175, 560].map(v));
        for d in 0..10 {
            assert_eq!(predicted_hf(2, 0, Part::B, d).unwrap(), predicted_hf(2, 0, Part::A, d - 5).unwrap());
        }
    }

    #[test]
    fn filtration_n1_and_n2() {
        let r = verify_filtration(1, 6, CoeffDomain::rationals()).unwrap();
        assert!(r.passed());
        assert_eq!(r.rows.iter().map(|x| x.computed).collect::<Vec<_>>(), vec![1, 0, 0, 0, 0, 0, 0]);
        let r = verify_filtration(2, 5, CoeffDomain::prime_field(32003).unwrap()).unwrap();
        assert!(r.passed(), "{:?}", r.summary);
    }

    #[test]
    fn shift_falsification_is_distinguished() {
        let p = FiltrationPrediction::new(2, 1, Part::A).unwrap();
        let moved: Vec<usize> = (0..=6).map(|d| p.hf(d - 1).try_into().unwrap()).collect();
        assert_eq!(classify(&p, &moved), (FiltrationStatus::ShiftFalsified, Some(1)));
        let wrong = vec![0, 0, 0, 5, 41, 175, 560];
        assert_eq!(classify(&p, &wrong), (FiltrationStatus::Fail, None));
    }

    #[test]
    fn hu_cycle_and_h2_for_n3() {
        let f = CoeffDomain::prime_field(32003).unwrap();
        let c = hu_h2_cycle(3, f).unwrap();
        assert!(c.passed());
        assert_eq!((c.degree, c.h2_dim), (Multidegree::bi(4, 2), 1));
        let r = verify_hu_h2(3, Multidegree::bi(4, 3), f).unwrap();
        assert!(r.passed());
        let at = |a, b| r.rows.iter().find(|x| x.degree == Multidegree::bi(a, b)).unwrap().computed;
        assert_eq!((at(4, 2), at(4, 3), at(3, 3)), (1, 6, 0));
    }

    #[test]
    fn hu_quotient_low_degrees() {
        let t = hf_quotient_hu(3, Multidegree::bi(2, 1), CoeffDomain::prime_field(32003).unwrap()).unwrap();
        // A has 15 variables of degree (1,0) and 6 of degree (0,1); J starts in (1,1) and (3,0)
        assert_eq!(t[&Multidegree::bi(0, 1)], 6);
        assert_eq!(t[&Multidegree::bi(1, 0)], 15);
        assert_eq!(t[&Multidegree::bi(1, 1)], 15 * 6 - 6);
        assert_eq!(t[&Multidegree::bi(2, 0)], 120);
        assert_eq!(predicted_hf_hu(3, Multidegree::bi(4, 3), &t).unwrap(), 6);
        assert_eq!(predicted_hf_hu(3, Multidegree::bi(4, 2), &t).unwrap(), 1);
        assert_eq!(predicted_hf_hu(3, Multidegree::bi(3, 5), &t).unwrap(), 0);
        assert!(predicted_hf_hu(2, Multidegree::bi(4, 2), &t).is_err());
    }
}
