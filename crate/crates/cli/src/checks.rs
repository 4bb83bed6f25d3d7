//! The checks behind `pfk verify`, each turned into one or more reports.

use std::collections::BTreeMap;
use std::path::Path;

use pfk_core::builders::{
    build_c, build_koszul_hu, build_koszul_pfaffian, predicted_h1_presentation_shape, HUContext, Koszul, PfaffianContext, ShapeTable,
};
use pfk_core::complex::{complex_from_json, max_slice_dim, verify_complex, FreeComplex};
use pfk_core::hilbert::{hu_h2_cycle, hu_h2_shift, verify_filtration_of, verify_hu_h2, FiltrationStatus};
use pfk_core::homology::{
    be_rank_certificate, degrees_up_to, duality_pairing, hilbert_function, hom_pairing, minimal_betti, torsion_report, BettiTable,
};
use pfk_core::linalg::CoeffDomain;
use pfk_core::poly::Multidegree;
use pfk_core::report::{Entry, Report, Status};
use pfk_core::Error;
use serde_json::{json, Map, Value};

use crate::{Check, CliError, Ctx, Family, HuCheck, Source};

type Res<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::C => "c",
        Family::KoszulPfaffian => "koszul-pfaffian",
        Family::KoszulHu => "koszul-hu",
    }
}

pub fn build(family: Family, n: usize, i: Option<usize>) -> Res<FreeComplex> {
    match family {
        Family::C => {
            let i = i.ok_or_else(|| usage("--family c needs --i"))?;
            if i >= n {
                return Err(usage(format!("--i {i} must be below --n {n}")));
            }
            Ok(build_c(&PfaffianContext::new(n)?, i)?)
        }
        Family::KoszulPfaffian => Ok(pfaffian_koszul(n)?.complex),
        Family::KoszulHu => Ok(hu_koszul(n)?.complex),
    }
}

fn pfaffian_koszul(n: usize) -> Res<Koszul> {
    Ok(build_koszul_pfaffian(&PfaffianContext::new(n)?)?)
}

fn hu_koszul(n: usize) -> Res<Koszul> {
    Ok(build_koszul_hu(&HUContext::new(n)?)?)
}

fn load(path: &Path) -> Res<FreeComplex> {
    let s = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    complex_from_json(&s).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn n_of(src: &Source) -> Res<usize> {
    src.n.ok_or_else(|| usage("--n is required with --family"))
}

/// A complex under test together with the parameters that identify it.
struct Target {
    params: Map<String, Value>,
    complex: FreeComplex,
    /// For `C^i`: the index `i`.
    c_index: Option<usize>,
    n: Option<usize>,
    family: Option<Family>,
}

fn targets(src: &Source, default_family: Option<Family>, all_i: bool) -> Res<Vec<Target>> {
    if let Some(p) = &src.input {
        if src.family.is_some() {
            return Err(usage("--in and --family are exclusive"));
        }
        let mut params = Map::new();
        params.insert("in".into(), json!(p.display().to_string()));
        return Ok(vec![Target { params, complex: load(p)?, c_index: None, n: None, family: None }]);
    }
    let family = src.family.or(default_family).ok_or_else(|| usage("give --in or --family"))?;
    let n = n_of(src)?;
    let base = |i: Option<usize>| {
        let mut m = Map::new();
        m.insert("family".into(), json!(family_name(family)));
        m.insert("n".into(), json!(n));
        if let Some(i) = i {
            m.insert("i".into(), json!(i));
        }
        m
    };
    match family {
        Family::C => {
            let is: Vec<usize> = match src.i {
                Some(i) => vec![i],
                None if all_i => (0..n).collect(),
                None => return Err(usage("--family c needs --i")),
            };
            is.into_iter()
                .map(|i| Ok(Target { params: base(Some(i)), complex: build(family, n, Some(i))?, c_index: Some(i), n: Some(n), family: Some(family) }))
                .collect()
        }
        _ => Ok(vec![Target { params: base(None), complex: build(family, n, None)?, c_index: None, n: Some(n), family: Some(family) }]),
    }
}

fn field_or(f: Option<CoeffDomain>, default: &str) -> CoeffDomain {
    f.unwrap_or_else(|| default.parse().expect("valid default field"))
}

/// Largest bound `≤ want` whose degrees all fit the slice budget. `None` if even degree 0 does not.
fn clip(c: &FreeComplex, want: Multidegree, budget: u64) -> Option<Multidegree> {
    let fits = |b: Multidegree| degrees_up_to(b).into_iter().all(|d| max_slice_dim(c, d) <= budget);
    let mut b = want;
    loop {
        if fits(b) {
            return Some(b);
        }
        let comps = b.components().to_vec();
        let (k, &top) = comps.iter().enumerate().max_by_key(|(_, x)| **x)?;
        if top == 0 {
            return None;
        }
        let mut next = comps.clone();
        next[k] -= 1;
        b = Multidegree::from_slice(&next).expect("same arity");
    }
}

fn check_arity(c: &FreeComplex, d: Multidegree) -> Res<()> {
    if c.ring().arity() != d.arity() {
        return Err(usage(format!("--max-deg needs {} component(s)", c.ring().arity())));
    }
    Ok(())
}

fn degree_json(d: Multidegree) -> Value {
    serde_json::to_value(d).expect("serializable")
}

pub fn verify(ctx: &Ctx, check: Check) -> Res<Vec<Report>> {
    match check {
        Check::Complex { src } => complex_check(ctx, &src),
        Check::BeRanks { src, primes } => be_ranks(ctx, &src, &primes),
        Check::Filtration { n, max_deg, field, input } => filtration(ctx, n, max_deg, field, input.as_deref()).map(|r| vec![r]),
        Check::Hu { n, check, max_deg, field } => hu(ctx, n, check, max_deg, field),
        Check::Duality { n, max_deg, presentation_bound, field } => duality(ctx, n, max_deg, presentation_bound, field),
        Check::Torsion { src, j, max_deg, primes } => torsion(ctx, &src, j, max_deg, &primes),
        Check::Betti { src, j, max_deg, field } => betti(ctx, &src, j, max_deg, field).map(|r| vec![r]),
    }
}

fn predicted_ranks(t: &Target) -> Option<Vec<usize>> {
    let n = t.n?;
    let m = 2 * n + 1;
    match t.family? {
        Family::C => {
            let i = t.c_index?;
            Some(vec![binom(m, i), binom(m, i + 1), binom(m, i + 1), binom(m, i)])
        }
        Family::KoszulPfaffian | Family::KoszulHu => Some((0..=m).map(|k| binom(m, k)).collect()),
    }
}

fn complex_check(ctx: &Ctx, src: &Source) -> Res<Vec<Report>> {
    let mut out = Vec::new();
    for t in targets(src, None, true)? {
        let c = &t.complex;
        let mut r = Report::new("complex", Value::Object(t.params.clone()), ctx.seed);
        let ((), ms) = ctx.timed(|| {
            let ranks = c.ranks();
            match predicted_ranks(&t) {
                Some(p) if p.len() == ranks.len() => {
                    for (k, (a, b)) in p.iter().zip(&ranks).enumerate() {
                        r.compare("rank", Some(c.lo() + k as i32), None, a, b);
                    }
                }
                _ => {
                    for (k, b) in ranks.iter().enumerate() {
                        r.computed(Entry::new("rank", Some(c.lo() + k as i32), None, b));
                    }
                }
            }
            match verify_complex(c) {
                Ok(chk) => {
                    for j in c.lo() + 2..=c.hi() {
                        let bad = chk.failures.iter().filter(|f| f.j == j).count();
                        r.compare("nonzero entries of d(j-1)∘d(j)", Some(j), None, 0, bad);
                    }
                    if let Some(f) = chk.failures.first() {
                        r.note(format!("d{}∘d{} has {} at ({}, {})", f.j - 1, f.j, f.value, f.row, f.col));
                    }
                }
                Err(e @ Error::Inhomogeneous { .. }) => {
                    r.status = Status::Fail;
                    r.note(e.to_string());
                }
                Err(e) => return Err(e.into()),
            }
            Ok(())
        })?;
        r.timing_ms = ms;
        out.push(r);
    }
    Ok(out)
}

fn be_ranks(ctx: &Ctx, src: &Source, primes: &[u32]) -> Res<Vec<Report>> {
    if primes.is_empty() {
        return Err(usage("--primes is empty"));
    }
    let mut out = Vec::new();
    for t in targets(src, Some(Family::C), true)? {
        if matches!(t.family, Some(Family::KoszulPfaffian | Family::KoszulHu)) {
            return Err(usage("be-ranks applies to the C family or to --in"));
        }
        let expected = match (t.n, t.c_index) {
            (Some(n), Some(i)) => {
                let (a, b) = (binom(2 * n + 1, i), binom(2 * n + 1, i + 1));
                Some(vec![a, b - a, a])
            }
            _ => None,
        };
        let mut r = Report::new("be-ranks", Value::Object(t.params.clone()), ctx.seed);
        r.primes = primes.to_vec();
        let (cert, ms) = ctx.timed(|| Ok(be_rank_certificate(&t.complex, ctx.seed, primes, expected.as_deref())?))?;
        let lo = t.complex.lo();
        for &p in primes {
            let tries: Vec<_> = cert.attempts.iter().filter(|a| a.prime == p).collect();
            let last = tries.last().expect("one attempt per prime");
            for a in &tries[..tries.len() - 1] {
                r.note(format!("p={p}: point from seed {} failed (ranks {:?}), retried with seed {}", a.seed, a.ranks, last.seed));
            }
            let label = format!("rank at point mod {p}");
            for (k, &x) in last.ranks.iter().enumerate() {
                let j = Some(lo + 1 + k as i32);
                match &expected {
                    Some(e) => {
                        r.compare(&label, j, None, e[k], x);
                    }
                    None => r.computed(Entry::new(&label, j, None, x)),
                }
            }
            let mods = &cert.module_ranks;
            for t in 1..mods.len() {
                let sum = last.ranks[t - 1] + last.ranks.get(t).copied().unwrap_or(0);
                r.compare(&format!("rank sum mod {p}"), Some(lo + t as i32), None, mods[t], sum);
            }
        }
        r.status = r.status.and(Status::from_pass(cert.passed));
        r.timing_ms = ms;
        out.push(r);
    }
    Ok(out)
}

fn default_pfaffian_bound(n: usize) -> i32 {
    match n {
        1 => 6,
        2 => 8,
        _ => 5,
    }
}

fn filtration(ctx: &Ctx, n: usize, max_deg: Option<Multidegree>, field: Option<CoeffDomain>, input: Option<&Path>) -> Res<Report> {
    let field = field_or(field, "q");
    let want = max_deg.unwrap_or(Multidegree::single(default_pfaffian_bound(n)));
    let mut params = Map::new();
    params.insert("n".into(), json!(n));
    params.insert("max_deg".into(), degree_json(want));
    params.insert("field".into(), json!(field.to_string()));
    let complex = match input {
        Some(p) => {
            params.insert("in".into(), json!(p.display().to_string()));
            load(p)?
        }
        None => pfaffian_koszul(n)?.complex,
    };
    check_arity(&complex, want)?;
    let mut r = Report::new("filtration", Value::Object(params), ctx.seed);
    let ((), ms) = ctx.timed(|| {
        if input.is_some() {
            match verify_complex(&complex) {
                Ok(chk) if chk.passed() => {}
                Ok(chk) => {
                    r.status = Status::Fail;
                    r.note(format!("input is not a complex: {} nonzero entries of d∘d", chk.failures.len()));
                    return Ok(());
                }
                Err(e) => {
                    r.status = Status::Fail;
                    r.note(format!("input is not a graded complex: {e}"));
                    return Ok(());
                }
            }
        }
        let Some(bound) = clip(&complex, want, ctx.budget) else {
            r.status = Status::Truncated;
            r.note("no degree fits the slice budget");
            return Ok(());
        };
        if bound != want {
            r.status = Status::Truncated;
            r.note(format!("checked degrees up to {bound} only"));
        }
        let rep = verify_filtration_of(&complex, n, bound.components()[0], field)?;
        for row in &rep.rows {
            r.compare("hf", Some(row.j as i32), Some(row.degree), &row.predicted, row.computed);
        }
        for e in &rep.euler {
            r.compare("euler", None, Some(e.degree), e.modules, e.homology);
        }
        for s in &rep.summary {
            match (s.status, s.offset) {
                (FiltrationStatus::Pass, _) => {}
                (FiltrationStatus::ShiftFalsified, Some(o)) => {
                    r.note(format!("H_{}: shift hypothesis falsified, table matches the prediction moved by {o}", s.j))
                }
                _ => r.note(format!("H_{}: computed table does not match the prediction", s.j)),
            }
        }
        Ok(())
    })?;
    r.timing_ms = ms;
    Ok(r)
}

fn hu(ctx: &Ctx, n: usize, check: HuCheck, max_deg: Option<Multidegree>, field: Option<CoeffDomain>) -> Res<Vec<Report>> {
    let field = field_or(field, "q");
    if let Some(d) = max_deg {
        if d.arity() != 2 {
            return Err(usage("--max-deg for hu takes two components A,B"));
        }
    }
    let wants = |c: HuCheck| check == HuCheck::All || check == c;
    if (wants(HuCheck::Betti) || wants(HuCheck::H2Hf)) && n < 3 {
        return Err(usage("betti and h2-hf need --n ≥ 3"));
    }
    let ni = n as i32;
    let params = |check: &str, bound: Option<Multidegree>| {
        let mut m = Map::new();
        m.insert("n".into(), json!(n));
        m.insert("check".into(), json!(check));
        m.insert("field".into(), json!(field.to_string()));
        if let Some(b) = bound {
            m.insert("max_deg".into(), degree_json(b));
        }
        Value::Object(m)
    };
    let mut out = Vec::new();
    if wants(HuCheck::H2Cycle) {
        let mut r = Report::new("hu", params("h2-cycle", None), ctx.seed);
        let (c, ms) = ctx.timed(|| Ok(hu_h2_cycle(n, field)?))?;
        r.compare("d2 z = 0", Some(2), Some(c.degree), true, c.symbolic_cycle);
        r.compare("z is a boundary", Some(2), Some(c.degree), false, c.boundary);
        r.compare("dim H", Some(2), Some(c.degree), 1, c.h2_dim);
        r.timing_ms = ms;
        out.push(r);
    }
    let koszul = if wants(HuCheck::Betti) || wants(HuCheck::H2Hf) { Some(hu_koszul(n)?) } else { None };
    if wants(HuCheck::Betti) {
        let k = koszul.as_ref().expect("built");
        let want = max_deg.unwrap_or(Multidegree::bi(ni + 1, 3));
        let mut r = Report::new("hu", params("betti", Some(want)), ctx.seed);
        let ((), ms) = ctx.timed(|| {
            let Some(bound) = clip_report(&mut r, &k.complex, want, ctx.budget) else { return Ok(()) };
            let shape = predicted_h1_presentation_shape(n)?;
            let b = minimal_betti(&k.complex, 1, bound, field)?;
            let p = [Some(shape_to_table(&shape.generators, 2)), Some(shape_to_table(&shape.relations, 2))];
            compare_betti(&mut r, 1, &b, &p, bound);
            Ok(())
        })?;
        r.timing_ms = ms;
        out.push(r);
    }
    if wants(HuCheck::H2Hf) {
        let k = koszul.as_ref().expect("built");
        let want = max_deg.unwrap_or(hu_h2_shift(n) + Multidegree::bi(1, 1));
        let mut r = Report::new("hu", params("h2-hf", Some(want)), ctx.seed);
        let ((), ms) = ctx.timed(|| {
            let Some(bound) = clip_report(&mut r, &k.complex, want, ctx.budget) else { return Ok(()) };
            let rep = verify_hu_h2(n, bound, field)?;
            for row in &rep.rows {
                r.compare("hf", Some(2), Some(row.degree), &row.predicted, row.computed);
            }
            for e in &rep.euler {
                r.compare("euler", None, Some(e.degree), e.modules, e.homology);
            }
            Ok(())
        })?;
        r.timing_ms = ms;
        out.push(r);
    }
    Ok(out)
}

/// Clips `want` to the budget, recording truncation on the report.
fn clip_report(r: &mut Report, c: &FreeComplex, want: Multidegree, budget: u64) -> Option<Multidegree> {
    match clip(c, want, budget) {
        Some(b) => {
            if b != want {
                r.status = r.status.and(Status::Truncated);
                r.note(format!("checked degrees up to {b} only"));
            }
            Some(b)
        }
        None => {
            r.status = r.status.and(Status::Truncated);
            r.note("no degree fits the slice budget");
            None
        }
    }
}

type DegreeTable = BTreeMap<Multidegree, usize>;

/// Shape tables key `A(-a,-b)` by `(a, b)`; single-graded ones leave `b` at zero.
fn shape_to_table(s: &ShapeTable, arity: usize) -> DegreeTable {
    s.iter()
        .map(|(&(a, b), &m)| (if arity == 1 { Multidegree::single(a) } else { Multidegree::bi(a, b) }, m))
        .collect()
}

/// Compares β₀/β₁ with predicted tables where one is known; rows without a
/// prediction are reported as computed only.
fn compare_betti(r: &mut Report, j: i32, b: &BettiTable, predicted: &[Option<DegreeTable>; 2], bound: Multidegree) {
    for (k, p) in predicted.iter().enumerate() {
        let label = format!("beta{k}");
        let computed = &b.rows[k];
        let p: Option<DegreeTable> = p.as_ref().map(|p| p.iter().filter(|(d, _)| Multidegree::le(d, &bound)).map(|(d, m)| (*d, *m)).collect());
        let mut keys: Vec<Multidegree> = computed.keys().copied().chain(p.iter().flat_map(|p| p.keys().copied())).collect();
        keys.sort_by_key(|d| (d.total(), *d));
        keys.dedup();
        for d in keys {
            let got = computed.get(&d).copied().unwrap_or(0);
            match &p {
                Some(p) => {
                    r.compare(&label, Some(j), Some(d), p.get(&d).copied().unwrap_or(0), got);
                }
                None => r.computed(Entry::new(&label, Some(j), Some(d), got)),
            }
        }
    }
}

fn duality(ctx: &Ctx, n: usize, max_deg: Option<Multidegree>, pb: Option<i32>, field: Option<CoeffDomain>) -> Res<Vec<Report>> {
    let field = field_or(field, "zp:32003");
    let want = max_deg.unwrap_or(Multidegree::single(6));
    if want.arity() != 1 {
        return Err(usage("--max-deg for duality takes one component"));
    }
    let pb = pb.unwrap_or(want.total() + 1);
    if pb < 0 {
        return Err(usage("--presentation-bound is negative"));
    }
    let k = pfaffian_koszul(n)?;
    let top = 2 * n as i32 - 2;
    let socle = Multidegree::single((n as i32 - 1) * (2 * n as i32 + 1));
    let degrees: Vec<Multidegree> = degrees_up_to(want);
    let mut params = Map::new();
    params.insert("n".into(), json!(n));
    params.insert("max_deg".into(), degree_json(want));
    params.insert("presentation_bound".into(), json!(pb));
    params.insert("field".into(), json!(field.to_string()));

    let mut lit = Report::new("duality-socle", Value::Object(params.clone()), ctx.seed);
    let ((), ms) = ctx.timed(|| {
        let need = Multidegree::single(want.total().max(socle.total()));
        if clip(&k.complex, need, ctx.budget) != Some(need) {
            lit.status = Status::Truncated;
            lit.note(format!("degree {need} exceeds the slice budget"));
            return Ok(());
        }
        for i in 0..=top / 2 {
            let label = format!("rank H{i} x H{} -> H{top}({socle})", top - i);
            match duality_pairing(&k, i, top, socle, &degrees, field) {
                Ok(rep) => {
                    for c in &rep.checks {
                        r_min(&mut lit, &label, c.degree, c.left_dim.min(c.right_dim), c.rank);
                        if c.perfect() && c.rank > 0 {
                            lit.note(format!("H{i}({}) x H{}({}): {}x{} perfect", c.degree, top - i, c.partner, c.left_dim, c.right_dim));
                        }
                    }
                }
                Err(Error::TargetNotOneDimensional(m)) => {
                    lit.status = Status::Fail;
                    lit.note(format!("H{top}({socle}) has dimension {m}, expected 1"));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(())
    })?;
    lit.timing_ms = ms;

    let mut hom = Report::new("duality-hom", Value::Object(params), ctx.seed);
    let ((), ms) = ctx.timed(|| {
        let need = Multidegree::single(want.total().max(pb) + pb);
        if clip(&k.complex, need, ctx.budget) != Some(need) {
            hom.status = Status::Truncated;
            hom.note(format!("degree {need} exceeds the slice budget"));
            return Ok(());
        }
        for i in 0..=top {
            let rows = hom_pairing(&k, i, top, &degrees, Multidegree::single(pb), field)?;
            for h in &rows {
                hom.compare(&format!("rank H{i} -> Hom(H{}, H{top})", top - i), Some(i), Some(h.degree), h.source_dim, h.rank);
                hom.compare(&format!("dim Hom(H{}, H{top})", top - i), Some(i), Some(h.degree), h.source_dim, h.hom_dim);
            }
        }
        Ok(())
    })?;
    hom.timing_ms = ms;
    Ok(vec![lit, hom])
}

fn r_min(r: &mut Report, label: &str, d: Multidegree, want: usize, got: usize) {
    r.compare(label, None, Some(d), want, got);
}

fn torsion(ctx: &Ctx, src: &Source, j: Option<i32>, max_deg: Option<Multidegree>, primes: &[u32]) -> Res<Vec<Report>> {
    let src = Source { n: src.n.or(Some(2)), ..src.clone() };
    let mut out = Vec::new();
    for t in targets(&src, Some(Family::KoszulPfaffian), true)? {
        let c = &t.complex;
        let want = max_deg.unwrap_or(if c.ring().arity() == 1 { Multidegree::single(5) } else { Multidegree::bi(2, 2) });
        check_arity(c, want)?;
        let mut params = t.params.clone();
        params.insert("max_deg".into(), degree_json(want));
        if let Some(j) = j {
            params.insert("j".into(), json!(j));
        }
        let mut r = Report::new("torsion", Value::Object(params), ctx.seed);
        r.primes = primes.to_vec();
        let fields: Vec<CoeffDomain> = primes.iter().map(|&p| CoeffDomain::prime_field(p as u64)).collect::<Result<_, _>>()?;
        let ((), ms) = ctx.timed(|| {
            let Some(bound) = clip_report(&mut r, c, want, ctx.budget) else { return Ok(()) };
            let mut js: Vec<i32> = match j {
                Some(j) if j < c.lo() || j > c.hi() => return Err(usage(format!("--j {j} outside [{}, {}]", c.lo(), c.hi()))),
                Some(j) => vec![j],
                None => (c.lo()..=c.hi()).collect(),
            };
            let chk = verify_complex(c);
            if !chk.as_ref().is_ok_and(|k| k.passed()) {
                // only the cokernel of the first map still makes sense
                r.status = Status::Fail;
                r.note("input is not a complex; only the cokernel at the lowest index is examined");
                js.retain(|&x| x == c.lo());
                if chk.is_err() {
                    js.clear();
                }
            }
            let q = CoeffDomain::rationals();
            for &jj in &js {
                let over_q = hilbert_function(c, jj, bound, q)?;
                let over_p: Vec<BTreeMap<Multidegree, usize>> =
                    fields.iter().map(|&f| hilbert_function(c, jj, bound, f)).collect::<Result<_, _>>()?;
                for d in degrees_up_to(bound) {
                    let tr = torsion_report(c, jj, d)?;
                    let divisors = if tr.torsion.is_empty() {
                        "none".to_string()
                    } else {
                        tr.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
                    };
                    r.compare("torsion", Some(jj), Some(d), "none", divisors);
                    r.compare("free rank", Some(jj), Some(d), over_q[&d], tr.free_rank);
                    if tr.heuristic {
                        r.status = r.status.and(Status::Heuristic);
                        let s = if tr.suspect_primes.is_empty() {
                            "none".to_string()
                        } else {
                            tr.suspect_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
                        };
                        r.compare("rank drops", Some(jj), Some(d), "none", s);
                    }
                    for (k, &p) in primes.iter().enumerate() {
                        r.compare(&format!("dim over F_{p}"), Some(jj), Some(d), over_q[&d], over_p[k][&d]);
                    }
                }
            }
            Ok(())
        })?;
        r.timing_ms = ms;
        out.push(r);
    }
    Ok(out)
}

/// Known minimal presentations, as far as they are predicted.
fn betti_predictions(family: Option<Family>, n: Option<usize>, j: i32) -> Res<[Option<ShapeTable>; 2]> {
    let (Some(family), Some(n)) = (family, n) else { return Ok([None, None]) };
    let ni = n as i32;
    let g = 2 * n + 1;
    Ok(match family {
        Family::KoszulPfaffian => {
            let top = 2 * ni - 2;
            let socle = (ni - 1) * (2 * ni + 1);
            match j {
                // A/I, with I minimally generated by the 2n+1 Pfaffians of degree n
                0 if top > 0 => [Some(ShapeTable::from([((0, 0), 1)])), Some(ShapeTable::from([((ni, 0), g)]))],
                0 => [Some(ShapeTable::from([((0, 0), 1)])), None],
                1 if top > 1 => [Some(ShapeTable::from([((ni + 1, 0), g)])), None],
                j if j == top => [Some(ShapeTable::from([((socle, 0), 1)])), None],
                _ => [None, None],
            }
        }
        Family::KoszulHu => match j {
            0 => [Some(ShapeTable::from([((0, 0), 1)])), Some(ShapeTable::from([((1, 1), 2 * n), ((ni, 0), 1)]))],
            1 if n >= 3 => {
                let s = predicted_h1_presentation_shape(n)?;
                [Some(s.generators), Some(s.relations)]
            }
            2 => [Some(ShapeTable::from([((ni + 1, 2), 1)])), None],
            _ => [None, None],
        },
        Family::C => return Err(usage("betti applies to Koszul complexes or --in")),
    })
}

fn betti(ctx: &Ctx, src: &Source, j: i32, max_deg: Option<Multidegree>, field: Option<CoeffDomain>) -> Res<Report> {
    let field = field_or(field, "q");
    let t = targets(src, Some(Family::KoszulPfaffian), false)?.into_iter().next().expect("one target");
    let c = &t.complex;
    if j < c.lo() || j > c.hi() {
        return Err(usage(format!("--j {j} outside [{}, {}]", c.lo(), c.hi())));
    }
    let want = match (max_deg, t.family, t.n) {
        (Some(d), _, _) => d,
        (None, Some(Family::KoszulHu), Some(n)) => Multidegree::bi(n as i32 + 1, 3),
        (None, _, Some(n)) => Multidegree::single(default_pfaffian_bound(n)),
        (None, _, None) => return Err(usage("--max-deg is required with --in")),
    };
    check_arity(c, want)?;
    let arity = c.ring().arity();
    let predicted = betti_predictions(t.family, t.n, j)?.map(|p| p.map(|s| shape_to_table(&s, arity)));
    let mut params = t.params.clone();
    params.insert("j".into(), json!(j));
    params.insert("max_deg".into(), degree_json(want));
    params.insert("field".into(), json!(field.to_string()));
    let mut r = Report::new("betti", Value::Object(params), ctx.seed);
    if predicted.iter().all(Option::is_none) {
        r.note("no closed-form prediction for this module; computed values only");
    }
    let ((), ms) = ctx.timed(|| {
        let Some(bound) = clip_report(&mut r, c, want, ctx.budget) else { return Ok(()) };
        let b = minimal_betti(c, j, bound, field)?;
        compare_betti(&mut r, j, &b, &predicted, bound);
        Ok(())
    })?;
    r.timing_ms = ms;
    Ok(r)
}
