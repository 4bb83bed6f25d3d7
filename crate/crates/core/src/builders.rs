//! Named complexes: Koszul complexes on Pfaffian and Huneke–Ulrich generators,
//! the four-term complexes `C^i`, the explicit `H_2` cycle, and predicted shapes.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::complex::{FreeComplex, GeneratorLabel, GradedFreeModule, PolyMatrix};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, CoeffDomain, SparseMatrix};
use crate::exterior::{comultiply, shuffle_sign_masks, subset_rank, subsets, IndexSet};
use crate::pfaffian::{hu_generators, pfaffian_generators, skew_ring, skew_vector_ring, GenericSkewMatrix};
use crate::poly::{binom, Multidegree, PolyRing, Polynomial};

/// Generic `(2n+1) × (2n+1)` skew matrix over `Sym(∧²E)` and its submaximal Pfaffians.
pub struct PfaffianContext {
    pub n: usize,
    pub ring: Arc<PolyRing>,
    pub phi: GenericSkewMatrix,
    pub y: Vec<Polynomial>,
}

impl PfaffianContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || 2 * n + 1 > 13 {
            return Err(Error::InvalidParameter(format!("n = {n} outside [1, 6]")));
        }
        let ring = skew_ring(2 * n + 1)?;
        let phi = GenericSkewMatrix::over_ring(&ring, 2 * n + 1, 0)?;
        let y = pfaffian_generators(&phi)?;
        Ok(PfaffianContext { n, ring, phi, y })
    }

    pub fn rank_e(&self) -> usize {
        2 * self.n + 1
    }
}

/// Generic `2n × 2n` skew matrix `Φ` and generic vector `v` over the bigraded
/// ring; generators are the entries of `Φv` followed by `Pf Φ`.
pub struct HUContext {
    pub n: usize,
    pub ring: Arc<PolyRing>,
    pub phi: GenericSkewMatrix,
    pub v: Vec<Polynomial>,
    pub gens: Vec<Polynomial>,
}

impl HUContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || 2 * n > 12 {
            return Err(Error::InvalidParameter(format!("n = {n} outside [1, 6]")));
        }
        let size = 2 * n;
        let ring = skew_vector_ring(size)?;
        let phi = GenericSkewMatrix::over_ring(&ring, size, 0)?;
        let first_y = binom(size, 2);
        let v: Vec<Polynomial> = (0..size).map(|i| Polynomial::var(&ring, first_y + i)).collect();
        let gens = hu_generators(&phi, &v)?;
        Ok(HUContext { n, ring, phi, v, gens })
    }

    pub fn rank_f(&self) -> usize {
        2 * self.n
    }
}

/// Koszul complex with the subset of generator indices behind every basis element.
pub struct Koszul {
    pub complex: FreeComplex,
    /// `masks[k][g]`: bit `t` set when generator `t` occurs in basis element `g` of `K_k`.
    pub masks: Vec<Vec<u64>>,
    index: Vec<FxHashMap<u64, usize>>,
}

impl Koszul {
    pub fn position(&self, k: usize, mask: u64) -> Option<usize> {
        self.index.get(k)?.get(&mask).copied()
    }

    pub fn gens_len(&self) -> usize {
        self.masks.len() - 1
    }
}

fn degree_of(p: &Polynomial) -> Result<Multidegree> {
    match p.homogeneous_degree()? {
        Some(d) => Ok(d),
        None => Err(Error::InhomogeneousPolynomial("the zero generator has no degree".into())),
    }
}

/// Koszul complex on `gens` with a given basis layout per homological degree.
fn koszul_with(ring: &Arc<PolyRing>, gens: &[Polynomial], layout: Vec<Vec<(u64, GeneratorLabel)>>) -> Result<Koszul> {
    let masks: Vec<Vec<u64>> = layout.iter().map(|l| l.iter().map(|e| e.0).collect()).collect();
    let index: Vec<FxHashMap<u64, usize>> =
        masks.iter().map(|m| m.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect();
    let modules: Vec<GradedFreeModule> =
        layout.into_iter().map(|l| GradedFreeModule::new(l.into_iter().map(|e| e.1).collect())).collect();
    let mut diffs = Vec::with_capacity(gens.len());
    for k in 1..=gens.len() {
        let mut columns = Vec::with_capacity(masks[k].len());
        for &mask in &masks[k] {
            let mut col = Vec::with_capacity(k);
            let mut rest = mask;
            let mut m = 0;
            while rest != 0 {
                let t = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let row = index[k - 1][&(mask & !(1u64 << t))];
                let f = &gens[t];
                col.push((row, if m % 2 == 0 { f.clone() } else { f.neg() }));
                m += 1;
            }
            columns.push(col);
        }
        diffs.push(PolyMatrix::from_columns(modules[k - 1].rank(), columns)?);
    }
    let complex = FreeComplex::new(ring.clone(), 0, modules, diffs)?;
    Ok(Koszul { complex, masks, index })
}

fn mask_of(set: &IndexSet) -> u64 {
    set.mask()
}

/// Koszul complex `K(f_1, …, f_m)` with scalar labels, bases in lex order of index subsets.
pub fn build_koszul(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> Result<Koszul> {
    if gens.len() > 20 {
        return Err(Error::InvalidParameter("at most 20 generators".into()));
    }
    let degs = gens.iter().map(degree_of).collect::<Result<Vec<_>>>()?;
    let m = gens.len();
    let layout = (0..=m)
        .map(|k| {
            subsets(k, m)
                .into_iter()
                .map(|s| {
                    let mut tw = ring.zero_degree();
                    for e in s.elems() {
                        tw = tw - degs[e - 1];
                    }
                    (mask_of(&s), GeneratorLabel::scalar(tw))
                })
                .collect()
        })
        .collect();
    koszul_with(ring, gens, layout)
}

/// `K(Y_1, …, Y_{2n+1})` with `K_k` labelled `∧^{2n+1-k} E ⊗ (det E)^{k-1}`,
/// basis element `e_T` labelled by the complement of `T`, ordered lex by label.
pub fn build_koszul_pfaffian(ctx: &PfaffianContext) -> Result<Koszul> {
    let m = ctx.rank_e();
    let n = ctx.n as i32;
    let full = (1u64 << m) - 1;
    let layout = (0..=m)
        .map(|k| {
            subsets(m - k, m)
                .into_iter()
                .map(|s| {
                    let label = GeneratorLabel::exterior(s.clone(), k as i32 - 1, Multidegree::single(-(k as i32) * n));
                    (full & !s.mask(), label)
                })
                .collect()
        })
        .collect();
    koszul_with(&ctx.ring, &ctx.y, layout)
}

/// Huneke–Ulrich Koszul complex: `K_k = ∧^k F(-k,-k) ⊕ det F ⊗ ∧^{k-1} F(1-k-n, 1-k)`,
/// each block in lex subset order.
pub fn build_koszul_hu(ctx: &HUContext) -> Result<Koszul> {
    let r = ctx.rank_f();
    let n = ctx.n as i32;
    let pf_bit = 1u64 << r;
    let layout = (0..=r + 1)
        .map(|k| {
            let ki = k as i32;
            let mut l = Vec::new();
            if k <= r {
                for s in subsets(k, r) {
                    l.push((s.mask(), GeneratorLabel::exterior(s, 0, Multidegree::bi(-ki, -ki))));
                }
            }
            if k >= 1 {
                for s in subsets(k - 1, r) {
                    l.push((s.mask() | pf_bit, GeneratorLabel::exterior(s, 1, Multidegree::bi(1 - ki - n, 1 - ki))));
                }
            }
            l
        })
        .collect();
    koszul_with(&ctx.ring, &ctx.gens, layout)
}

/// The complex `C^i`, `0 ≤ i ≤ n-1`:
/// `det E ⊗ ∧^{2n+1-i} E → det E ⊗ ∧^{i+1} E → ∧^{2n-i} E → ∧^i E`.
pub fn build_c(ctx: &PfaffianContext, i: usize) -> Result<FreeComplex> {
    let n = ctx.n;
    if i >= n {
        return Err(Error::InvalidParameter(format!("i = {i} outside [0, {}]", n - 1)));
    }
    let m = ctx.rank_e();
    let (ni, ii) = (n as i32, i as i32);
    let module = |k: usize, det: i32, twist: i32| {
        GradedFreeModule::new(
            subsets(k, m).into_iter().map(|s| GeneratorLabel::exterior(s, det, Multidegree::single(twist))).collect(),
        )
    };
    let m0 = module(i, 0, 0);
    let m1 = module(2 * n - i, 0, -(ni - ii));
    let m2 = module(i + 1, 1, -(ni + 1));
    let m3 = module(2 * n + 1 - i, 1, -(2 * ni + 1 - ii));

    // d1 and d3 share the shape e_I ↦ Σ sgn(I', I'') e_{I'} ⊗ Pf(I'')
    let split = |src: &GradedFreeModule, k: usize, rows: usize| -> Result<PolyMatrix> {
        let mut cols = Vec::with_capacity(src.rank());
        for g in src.generators() {
            let set = exterior_subset(g);
            let mut col = Vec::new();
            for (first, second, sign) in comultiply(set, k)? {
                let pf = ctx.phi.pf_mask(second.mask());
                col.push((subset_rank(&first), if sign > 0 { pf } else { pf.neg() }));
            }
            cols.push(col);
        }
        PolyMatrix::from_columns(rows, cols)
    };
    let d1 = split(&m1, i, m0.rank())?;
    let d3 = split(&m3, i + 1, m2.rank())?;

    let d2 = second_differential(ctx, i, &d1, &d3)?;
    FreeComplex::new(ctx.ring.clone(), 0, vec![m0, m1, m2, m3], vec![d1, d2, d3])
}

/// Terms of the order-`t` mixing map `e_{I''} ⊗ e_J ↦ Σ ± det φ[I₁, J₁] · Pf(I₂ ∪ J₂)`
/// over splittings `I'' = I₁ ⊔ I₂`, `J = J₁ ⊔ J₂` with `|I₁| = |J₁| = t` and `I₂ ∩ J₂ = ∅`.
/// Each term is `(sign, I₁, J₁, I₂ ∪ J₂)` as masks.
fn mixing_terms(t: usize, ipp: u64, j: u64, m: usize) -> Vec<(i32, u64, u64, u64)> {
    let is = IndexSet::from_mask(ipp, m);
    let js = IndexSet::from_mask(j, m);
    let mut out = Vec::new();
    for (i1, i2, si) in comultiply(&is, t).expect("t within |I''|") {
        for (j1, j2, sj) in comultiply(&js, t).expect("t within |J|") {
            if i2.mask() & j2.mask() != 0 {
                continue;
            }
            let sign = si * sj * shuffle_sign_masks(i2.mask(), j2.mask());
            out.push((sign, i1.mask(), j1.mask(), i2.mask() | j2.mask()));
        }
    }
    out
}

/// Skew matrix with integer entries, with memoized Pfaffians and minors.
struct NumericSkew {
    a: Vec<Vec<i128>>,
    pf: FxHashMap<u64, i128>,
    det: FxHashMap<(u64, u64), i128>,
}

impl NumericSkew {
    fn new(m: usize, upper: &[i64]) -> Self {
        let mut a = vec![vec![0i128; m]; m];
        let mut k = 0;
        for r in 0..m {
            for c in r + 1..m {
                a[r][c] = upper[k] as i128;
                a[c][r] = -(upper[k] as i128);
                k += 1;
            }
        }
        NumericSkew { a, pf: FxHashMap::default(), det: FxHashMap::default() }
    }

    fn pf(&mut self, mask: u64) -> i128 {
        if mask == 0 {
            return 1;
        }
        if let Some(&v) = self.pf.get(&mask) {
            return v;
        }
        let first = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let (mut acc, mut it, mut positive) = (0i128, rest, true);
        while it != 0 {
            let t = it.trailing_zeros() as usize;
            it &= it - 1;
            let term = self.a[first][t] * self.pf(rest & !(1u64 << t));
            acc += if positive { term } else { -term };
            positive = !positive;
        }
        self.pf.insert(mask, acc);
        acc
    }

    fn det(&mut self, rows: u64, cols: u64) -> i128 {
        if rows == 0 {
            return 1;
        }
        if let Some(&v) = self.det.get(&(rows, cols)) {
            return v;
        }
        let r = rows.trailing_zeros() as usize;
        let (mut acc, mut it, mut positive) = (0i128, cols, true);
        while it != 0 {
            let c = it.trailing_zeros() as usize;
            it &= it - 1;
            let term = self.a[r][c] * self.det(rows & (rows - 1), cols & !(1u64 << c));
            acc += if positive { term } else { -term };
            positive = !positive;
        }
        self.det.insert((rows, cols), acc);
        acc
    }
}

fn symbolic_det(phi: &GenericSkewMatrix, memo: &mut FxHashMap<(u64, u64), Polynomial>, rows: u64, cols: u64) -> Polynomial {
    if rows == 0 {
        return Polynomial::one(phi.ring());
    }
    if let Some(p) = memo.get(&(rows, cols)) {
        return p.clone();
    }
    let r = rows.trailing_zeros() as usize;
    let (mut acc, mut it, mut positive) = (Polynomial::zero(phi.ring()), cols, true);
    while it != 0 {
        let c = it.trailing_zeros() as usize;
        it &= it - 1;
        let e = phi.entry(r + 1, c + 1);
        if !e.is_zero() {
            let term = &e * &symbolic_det(phi, memo, rows & (rows - 1), cols & !(1u64 << c));
            acc = if positive { &acc + &term } else { &acc - &term };
        }
        positive = !positive;
    }
    memo.insert((rows, cols), acc.clone());
    acc
}

fn evaluate_dense(d: &PolyMatrix, point: &[BigInt]) -> Result<Vec<Vec<i128>>> {
    let mut out = vec![vec![0i128; d.cols()]; d.rows()];
    for (r, c, p) in d.entries() {
        let v = p.evaluate(point)?;
        out[r][c] = v.to_i128().ok_or_else(|| Error::OutOfRange("evaluation overflow".into()))?;
    }
    Ok(out)
}

fn dense_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![0i128; cols];
            for (k, &x) in row.iter().enumerate() {
                if x != 0 {
                    for (o, &y) in out.iter_mut().zip(&b[k]) {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

/// Middle map `det E ⊗ ∧^{i+1} E → ∧^{2n-i} E ⊗ Sym^{i+1}(∧²E)` of `C^i`.
///
/// `e_J ↦ Σ_{I'} sgn(I', I'') e_{I'} ⊗ Σ_t c_t T_t(I'', J)`, where `T_t` is the order-`t`
/// mixing map and `T_0(I'', J) = sgn(I'', J) Pf(I'' ∪ J)`. For `i = 0` only `T_0` occurs.
/// For `i ≥ 1` the coefficients span the unique line of maps with `d1 ∘ d2 = 0 = d2 ∘ d3`;
/// it is found exactly at two integer points and the result is made primitive over Z.
fn second_differential(ctx: &PfaffianContext, i: usize, d1: &PolyMatrix, d3: &PolyMatrix) -> Result<PolyMatrix> {
    let n = ctx.n;
    let m = ctx.rank_e();
    let full = (1u64 << m) - 1;
    let rows = subsets(2 * n - i, m);
    let cols = subsets(i + 1, m);
    let nt = i + 2;
    let terms = |t: usize, r: &IndexSet, c: &IndexSet| {
        let second = full & !r.mask();
        let outer = shuffle_sign_masks(r.mask(), second);
        mixing_terms(t, second, c.mask(), m).into_iter().map(move |(s, a, b, u)| (s * outer, a, b, u))
    };

    let coefficients: Vec<BigInt> = if i == 0 {
        vec![BigInt::from(1)]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0ef);
        let nvars = ctx.ring.nvars();
        let mut equations: Vec<Vec<(usize, BigInt)>> = Vec::new();
        let mut maps: Vec<Vec<Vec<Vec<i128>>>> = Vec::new();
        for _ in 0..2 {
            let upper: Vec<i64> = (0..nvars).map(|_| rng.gen_range(-5..=5)).collect();
            let point: Vec<BigInt> = upper.iter().map(|&v| BigInt::from(v)).collect();
            let mut num = NumericSkew::new(m, &upper);
            let ts: Vec<Vec<Vec<i128>>> = (0..nt)
                .map(|t| {
                    rows.iter()
                        .map(|r| {
                            cols.iter()
                                .map(|c| terms(t, r, c).map(|(s, a, b, u)| s as i128 * num.det(a, b) * num.pf(u)).sum())
                                .collect()
                        })
                        .collect()
                })
                .collect();
            let n1 = evaluate_dense(d1, &point)?;
            let n3 = evaluate_dense(d3, &point)?;
            let left: Vec<_> = ts.iter().map(|t| dense_mul(&n1, t)).collect();
            let right: Vec<_> = ts.iter().map(|t| dense_mul(t, &n3)).collect();
            for prods in [&left, &right] {
                for r in 0..prods[0].len() {
                    for c in 0..prods[0][r].len() {
                        let row: Vec<(usize, BigInt)> =
                            (0..nt).filter(|&t| prods[t][r][c] != 0).map(|t| (t, BigInt::from(prods[t][r][c]))).collect();
                        if !row.is_empty() {
                            equations.push(row);
                        }
                    }
                }
            }
            maps.push(ts);
        }
        let is_nonzero_map = |v: &[BigInt]| {
            maps.iter().any(|ts| {
                (0..rows.len()).any(|r| {
                    (0..cols.len()).any(|c| (0..nt).map(|t| BigInt::from(ts[t][r][c]) * &v[t]).sum::<BigInt>() != BigInt::from(0))
                })
            })
        };
        let supports: Vec<Vec<usize>> = vec![vec![0, i + 1], vec![0, 1, i + 1], (0..nt).collect()];
        let mut found = None;
        'search: for support in supports {
            let restricted: Vec<Vec<(usize, BigInt)>> = equations
                .iter()
                .map(|row| {
                    row.iter().filter_map(|(t, v)| support.iter().position(|s| s == t).map(|k| (k, v.clone()))).collect()
                })
                .collect();
            let k = kernel_basis(&SparseMatrix::from_rows(support.len(), restricted), CoeffDomain::RATIONALS)?;
            for vec in k.col_vecs() {
                let mut full_vec = vec![BigInt::from(0); nt];
                for (k, v) in vec {
                    full_vec[support[k]] = v;
                }
                if is_nonzero_map(&full_vec) {
                    found = Some(full_vec);
                    break 'search;
                }
            }
        }
        let mut c = found.ok_or_else(|| Error::InvalidParameter(format!("no middle differential found for n = {n}, i = {i}")))?;
        if c[0] < BigInt::from(0) {
            c.iter_mut().for_each(|x| *x = -x.clone());
        }
        c
    };

    let mut det_memo = FxHashMap::default();
    let mut columns = Vec::with_capacity(cols.len());
    for c in &cols {
        let mut col = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            let mut acc: Vec<(crate::poly::Monomial, BigInt)> = Vec::new();
            for (t, coef) in coefficients.iter().enumerate() {
                if coef == &BigInt::from(0) {
                    continue;
                }
                for (s, a, b, u) in terms(t, row, c) {
                    let p = &symbolic_det(&ctx.phi, &mut det_memo, a, b) * &ctx.phi.pf_mask(u);
                    let scale = coef * BigInt::from(s);
                    acc.extend(p.terms().iter().map(|(mono, v)| (mono.clone(), v * &scale)));
                }
            }
            let p = Polynomial::from_terms(&ctx.ring, acc)?;
            if !p.is_zero() {
                col.push((r, p));
            }
        }
        columns.push(col);
    }
    let content = columns.iter().flatten().flat_map(|(_, p)| p.terms().iter().map(|(_, v)| v.clone())).fold(BigInt::from(0), |g, v| g.gcd(&v));
    if content > BigInt::from(1) {
        for (_, p) in columns.iter_mut().flatten() {
            let terms = p.terms().iter().map(|(mono, v)| (mono.clone(), v / &content)).collect();
            *p = Polynomial::from_terms(&ctx.ring, terms)?;
        }
    }
    PolyMatrix::from_columns(rows.len(), columns)
}

fn exterior_subset(g: &GeneratorLabel) -> &IndexSet {
    match &g.functor {
        crate::complex::Functor::Exterior { subset, .. } => subset,
        crate::complex::Functor::Scalar => unreachable!("exterior labels only"),
    }
}

/// `Σ y_i e_i∧f − Σ_{i<j} (−1)^{i+j} Pf(X(i,j)) e_i∧e_j` as a vector in `K_2`
/// of the Huneke–Ulrich Koszul complex; `e_i` is the `i`-th entry of `Φv`, `f` is `Pf Φ`.
pub fn build_hu_h2_cycle(ctx: &HUContext, k: &Koszul) -> Result<Vec<Polynomial>> {
    if ctx.n < 2 {
        return Err(Error::InvalidParameter("the cycle needs n ≥ 2".into()));
    }
    let r = ctx.rank_f();
    let full = (1u64 << r) - 1;
    let mut z = vec![Polynomial::zero(&ctx.ring); k.masks[2].len()];
    for i in 1..=r {
        let pos = k.position(2, 1u64 << (i - 1) | 1u64 << r).expect("e_i∧f in K_2");
        z[pos] = ctx.v[i - 1].clone();
        for j in i + 1..=r {
            let pos = k.position(2, 1u64 << (i - 1) | 1u64 << (j - 1)).expect("e_i∧e_j in K_2");
            let pf = ctx.phi.pf_mask(full & !(1u64 << (i - 1)) & !(1u64 << (j - 1)));
            z[pos] = if (i + j) % 2 == 0 { pf.neg() } else { pf };
        }
    }
    Ok(z)
}

/// Graded multiplicities keyed by bidegree `(a, b)` of `A(-a,-b)`.
pub type ShapeTable = BTreeMap<(i32, i32), usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KustinShape {
    pub f1: ShapeTable,
    pub f2: ShapeTable,
    pub f3: ShapeTable,
}

fn require_n3(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(
            "n=2 covered by the Pfaffian complexes via specialization; shapes need n ≥ 3".into(),
        ));
    }
    Ok(())
}

/// First three terms of the minimal resolution of `A/J`, as bidegree tables.
pub fn predicted_kustin_shape(n: usize) -> Result<KustinShape> {
    require_n3(n)?;
    let ni = n as i32;
    let r = 2 * n;
    let f1 = ShapeTable::from([((1, 1), r), ((ni, 0), 1)]);
    let f2 = ShapeTable::from([((2, 2), binom(r, 2)), ((ni, 1), r), ((1, 2), 1)]);
    let mut f3 = ShapeTable::from([((ni, 2), binom(r, 2)), ((2, 3), r), ((ni + 1, 2), 1)]);
    if n > 3 {
        f3.insert((3, 3), binom(r, 3));
    }
    Ok(KustinShape { f1, f2, f3 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Presentation {
    pub generators: ShapeTable,
    pub relations: ShapeTable,
    /// Relations that are implied by the others.
    pub redundant: ShapeTable,
}

/// Minimal presentation of `H_1` of the Huneke–Ulrich Koszul complex.
pub fn predicted_h1_presentation_shape(n: usize) -> Result<H1Presentation> {
    require_n3(n)?;
    let ni = n as i32;
    let r = 2 * n;
    Ok(H1Presentation {
        generators: ShapeTable::from([((1, 2), 1), ((ni, 1), r)]),
        relations: ShapeTable::from([((2, 3), r), ((ni, 2), binom(r, 2)), ((ni + 1, 1), r)]),
        redundant: ShapeTable::from([((ni + 1, 2), 1)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::verify_complex;

    fn twists(c: &FreeComplex) -> Vec<Vec<i32>> {
        c.modules().iter().map(|m| m.generators().iter().map(|g| g.twist.total()).collect()).collect()
    }

    #[test]
    fn koszul_on_two_variables() {
        let ring = Arc::new(
            PolyRing::new(vec!["x".into(), "y".into()], vec![Multidegree::single(1); 2], crate::linalg::CoeffDomain::INTEGERS)
                .unwrap(),
        );
        let x = Polynomial::var(&ring, 0);
        let y = Polynomial::var(&ring, 1);
        let k = build_koszul(&ring, &[x.clone(), y.clone()]).unwrap();
        let c = &k.complex;
        assert_eq!(c.ranks(), vec![1, 2, 1]);
        assert_eq!(twists(c), vec![vec![0], vec![-1, -1], vec![-2]]);
        assert_eq!(c.differential(1).unwrap().get(0, 0), Some(&x));
        assert_eq!(c.differential(1).unwrap().get(0, 1), Some(&y));
        assert_eq!(c.differential(2).unwrap().get(0, 0), Some(&y.neg()));
        assert_eq!(c.differential(2).unwrap().get(1, 0), Some(&x));
        assert!(verify_complex(c).unwrap().passed());
    }

    #[test]
    fn inhomogeneous_generator_rejected() {
        let ring = skew_ring(3).unwrap();
        let p = &Polynomial::var(&ring, 0) + &(&Polynomial::var(&ring, 1) * &Polynomial::var(&ring, 2));
        assert!(build_koszul(&ring, &[p]).is_err());
    }

    #[test]
    fn pfaffian_koszul_shape() {
        let ctx = PfaffianContext::new(2).unwrap();
        let k = build_koszul_pfaffian(&ctx).unwrap();
        assert_eq!(k.complex.ranks(), vec![1, 5, 10, 10, 5, 1]);
        for (i, t) in twists(&k.complex).iter().enumerate() {
            assert!(t.iter().all(|&x| x == -2 * i as i32));
        }
        assert!(k.complex.torus_weights().is_some());
        assert!(verify_complex(&k.complex).unwrap().passed());
    }

    #[test]
    fn hu_koszul_shape() {
        let ctx = HUContext::new(3).unwrap();
        let k = build_koszul_hu(&ctx).unwrap();
        let k1: Vec<Multidegree> = k.complex.modules()[1].generators().iter().map(|g| g.twist).collect();
        let mut want = vec![Multidegree::bi(-1, -1); 6];
        want.push(Multidegree::bi(-3, 0));
        assert_eq!(k1, want);
        assert!(k.complex.torus_weights().is_some());
        assert!(verify_complex(&k.complex).unwrap().passed());
    }

    #[test]
    fn c_complexes_are_complexes() {
        for n in 1..=4 {
            let ctx = PfaffianContext::new(n).unwrap();
            for i in 0..n {
                let c = build_c(&ctx, i).unwrap();
                let m = 2 * n + 1;
                assert_eq!(c.ranks(), vec![binom(m, i), binom(m, i + 1), binom(m, i + 1), binom(m, i)]);
                let chk = verify_complex(&c).unwrap();
                assert!(chk.passed(), "n={n} i={i}: {} nonzero composite entries", chk.failures.len());
                assert!(c.torus_weights().is_some());
            }
            assert!(build_c(&ctx, n).is_err());
        }
    }

    #[test]
    fn c_twists() {
        let ctx = PfaffianContext::new(2).unwrap();
        let firsts = |c: &FreeComplex| twists(c).iter().map(|t| t[0]).collect::<Vec<_>>();
        let c0 = build_c(&ctx, 0).unwrap();
        assert_eq!(c0.ranks(), vec![1, 5, 5, 1]);
        assert_eq!(firsts(&c0), vec![0, -2, -3, -5]);
        let c1 = build_c(&ctx, 1).unwrap();
        assert_eq!(c1.ranks(), vec![5, 10, 10, 5]);
        assert_eq!(firsts(&c1), vec![0, -1, -3, -4]);
        let ctx = PfaffianContext::new(1).unwrap();
        let c = build_c(&ctx, 0).unwrap();
        assert_eq!(c.ranks(), vec![1, 3, 3, 1]);
        assert_eq!(firsts(&c), vec![0, -1, -2, -3]);
    }

    #[test]
    fn c0_first_map_is_pfaffians() {
        // d1 of C^0 sends e_{[1,2n+1] minus k} to Pf of that subset, i.e. ±Y_k.
        let ctx = PfaffianContext::new(2).unwrap();
        let c = build_c(&ctx, 0).unwrap();
        let d1 = c.differential(1).unwrap();
        let mut got: Vec<Polynomial> = (0..5).map(|col| d1.get(0, col).unwrap().clone()).collect();
        let mut want: Vec<Polynomial> = ctx.y.clone();
        let key = |p: &Polynomial| {
            let q = if p.terms()[0].1 < 0.into() { p.neg() } else { p.clone() };
            crate::poly::text::to_text(&q)
        };
        got.sort_by_key(key);
        want.sort_by_key(key);
        for (a, b) in got.iter().zip(&want) {
            assert!(a == b || *a == b.neg());
        }
    }

    #[test]
    fn h2_cycle_is_closed() {
        for n in 2..=3 {
            let ctx = HUContext::new(n).unwrap();
            let k = build_koszul_hu(&ctx).unwrap();
            let z = build_hu_h2_cycle(&ctx, &k).unwrap();
            for (g, p) in z.iter().enumerate() {
                if !p.is_zero() {
                    let want = Multidegree::bi(n as i32 + 1, 2) + k.complex.modules()[2].twist(g);
                    assert_eq!(p.homogeneous_degree().unwrap(), Some(want));
                }
            }
            let dz = k.complex.differential(2).unwrap().apply(&ctx.ring, &z).unwrap();
            assert!(dz.iter().all(|p| p.is_zero()), "n={n}");
        }
    }

    #[test]
    fn h2_cycle_small_coefficients() {
        let ctx = HUContext::new(2).unwrap();
        let k = build_koszul_hu(&ctx).unwrap();
        let z = build_hu_h2_cycle(&ctx, &k).unwrap();
        let x34 = Polynomial::var(&ctx.ring, ctx.ring.var_index("x3_4").unwrap());
        assert_eq!(z[k.position(2, 0b0011).unwrap()], x34);
        let y1 = Polynomial::var(&ctx.ring, ctx.ring.var_index("y1").unwrap());
        assert_eq!(z[k.position(2, 0b10001).unwrap()], y1);
    }

    #[test]
    fn predicted_shapes() {
        assert!(predicted_kustin_shape(2).is_err());
        assert!(predicted_h1_presentation_shape(2).is_err());
        let s = predicted_kustin_shape(3).unwrap();
        assert_eq!(s.f1, ShapeTable::from([((1, 1), 6), ((3, 0), 1)]));
        assert_eq!(s.f3, ShapeTable::from([((3, 2), 15), ((2, 3), 6), ((4, 2), 1)]));
        assert_eq!(predicted_kustin_shape(4).unwrap().f3.get(&(3, 3)), Some(&56));
        let h = predicted_h1_presentation_shape(3).unwrap();
        assert_eq!(h.generators, ShapeTable::from([((1, 2), 1), ((3, 1), 6)]));
        assert_eq!(h.relations, ShapeTable::from([((2, 3), 6), ((3, 2), 15), ((4, 1), 6)]));
        assert_eq!(h.redundant, ShapeTable::from([((4, 2), 1)]));
    }
}

