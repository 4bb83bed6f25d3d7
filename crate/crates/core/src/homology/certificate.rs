use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{FreeComplex, SliceEngine};
use crate::error::Result;
use crate::linalg::{rank_of, rational_rank, smith_normal_form, Integers, PrimeField, ScalarRing, SparseMatrix};
use crate::poly::Multidegree;

/// Primes used to look for torsion when a slice is too large for SNF.
const TORSION_PROBES: [u32; 4] = [2, 3, 32003, 65521];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    pub j: i32,
    pub degree: Multidegree,
    pub free_rank: usize,
    /// Elementary divisors other than 1.
    #[serde(serialize_with = "crate::ser::bigints")]
    pub torsion: Vec<BigInt>,
    /// Set when some block was too large for SNF and ranks mod small primes were compared instead.
    pub heuristic: bool,
    /// Primes whose rank dropped against Q in heuristic mode.
    pub suspect_primes: Vec<u32>,
}

impl TorsionReport {
    pub fn torsion_free(&self) -> bool {
        self.torsion.is_empty() && self.suspect_primes.is_empty()
    }
}

struct BlockTorsion {
    free: usize,
    torsion: Vec<BigInt>,
    heuristic: bool,
    suspects: Vec<u32>,
}

/// `H_j(d)` over Z: free rank and elementary divisors, from the SNF of the
/// incoming boundary map block by block.
pub fn torsion_report(c: &FreeComplex, j: i32, d: Multidegree) -> Result<TorsionReport> {
    let engine = SliceEngine::new(c, d, true)?;
    let weights = engine.weights(j, d);
    let blocks: Vec<BlockTorsion> = weights
        .par_iter()
        .map(|w| {
            let len = engine.block_basis(j, d, w).len();
            let out_rank = rational_rank(&engine.block_matrix(&Integers, j, d, w));
            let incoming = engine.block_matrix(&Integers, j + 1, d, w);
            let (in_rank, torsion, heuristic, suspects) = match smith_normal_form(&incoming) {
                Some(snf) => (snf.rank(), snf.torsion(), false, Vec::new()),
                None => {
                    let q = rational_rank(&incoming);
                    let suspects = TORSION_PROBES
                        .iter()
                        .copied()
                        .filter(|&p| {
                            let f = PrimeField::new(p).expect("prime");
                            rank_of(&f, &incoming.map(&f, |v| f.from_bigint(v))) < q
                        })
                        .collect();
                    (q, Vec::new(), true, suspects)
                }
            };
            BlockTorsion { free: len - out_rank - in_rank, torsion, heuristic, suspects }
        })
        .collect();
    let mut report = TorsionReport { j, degree: d, free_rank: 0, torsion: Vec::new(), heuristic: false, suspect_primes: Vec::new() };
    for b in blocks {
        report.free_rank += b.free;
        report.torsion.extend(b.torsion);
        report.heuristic |= b.heuristic;
        report.suspect_primes.extend(b.suspects);
    }
    report.torsion.sort();
    report.suspect_primes.sort_unstable();
    report.suspect_primes.dedup();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeAttempt {
    pub prime: u32,
    pub seed: u64,
    /// Ranks of `d_{lo+1}, …, d_hi` at the random point.
    pub ranks: Vec<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeCertificate {
    pub seed: u64,
    pub primes: Vec<u32>,
    pub module_ranks: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<usize>>,
    pub attempts: Vec<BeAttempt>,
    pub passed: bool,
}

fn reseed(seed: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(1)
}

fn attempt(c: &FreeComplex, p: u32, seed: u64, expected: Option<&[usize]>) -> Result<BeAttempt> {
    let f = PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point: Vec<u32> = (0..c.ring().nvars()).map(|_| rng.gen_range(0..p)).collect();
    let mut ranks = Vec::with_capacity(c.differentials().len());
    for d in c.differentials() {
        let mut entries = Vec::with_capacity(d.nnz());
        for (r, col, poly) in d.entries() {
            let v = poly.evaluate_in(&f, &point)?;
            if v != 0 {
                entries.push((r, col, v));
            }
        }
        let m = SparseMatrix::new(&f, d.rows(), d.cols(), entries)?;
        ranks.push(if m.nnz() == 0 { 0 } else { rank_of(&f, &m) });
    }
    let mods = c.ranks();
    let mut passed = true;
    for t in 1..mods.len() {
        let incoming = ranks.get(t).copied().unwrap_or(0);
        passed &= ranks[t - 1] + incoming == mods[t];
    }
    if let Some(e) = expected {
        passed &= e == ranks.as_slice();
    }
    Ok(BeAttempt { prime: p, seed, ranks, passed })
}

/// Rank half of the Buchsbaum–Eisenbud criterion at a seeded random point, per prime:
/// `rank d_k + rank d_{k+1} = rank F_k` for every module above the first (the last one
/// has no incoming map, so its condition is injectivity). A failing point is retried once
/// with a derived seed. `expected`, when given, must match the ranks of `d_{lo+1}, …`.
pub fn be_rank_certificate(c: &FreeComplex, seed: u64, primes: &[u32], expected: Option<&[usize]>) -> Result<BeCertificate> {
    let mut attempts = Vec::new();
    let mut passed = true;
    for &p in primes {
        let first = attempt(c, p, seed, expected)?;
        let ok = if first.passed {
            attempts.push(first);
            true
        } else {
            attempts.push(first);
            let second = attempt(c, p, reseed(seed), expected)?;
            let ok = second.passed;
            attempts.push(second);
            ok
        };
        passed &= ok;
    }
    Ok(BeCertificate {
        seed,
        primes: primes.to_vec(),
        module_ranks: c.ranks(),
        expected: expected.map(|e| e.to_vec()),
        attempts,
        passed,
    })
}
