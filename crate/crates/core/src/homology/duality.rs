use std::collections::BTreeSet;

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::betti::Presentation;
use super::{with_field, Homology};
use crate::builders::Koszul;
use crate::complex::weight_add;
use crate::error::{Error, Result};
use crate::exterior::shuffle_sign_masks;
use crate::linalg::{rank_of, CoeffDomain, DomainKind, Field, PrimeField, Rationals, SparseMatrix, SparseVec};
use crate::poly::{Multidegree, Weight};

/// Exterior product of a vector of block `(a, da, wa)` with one of block `(b, db, wb)`,
/// as a vector of block `(a + b, da + db, wa + wb)`.
#[allow(clippy::too_many_arguments)]
fn wedge<F: Field>(
    h: &Homology<'_, F>,
    k: &Koszul,
    (a, da, wa): (i32, Multidegree, &Weight),
    va: &[(usize, F::Elem)],
    (b, db, wb): (i32, Multidegree, &Weight),
    vb: &[(usize, F::Elem)],
) -> SparseVec<F::Elem> {
    let f = h.field();
    let e = h.engine();
    let (ba, bb) = (e.block_basis(a, da, wa), e.block_basis(b, db, wb));
    let dst = e.block_basis(a + b, da + db, &weight_add(wa, wb));
    let mut acc: FxHashMap<usize, F::Elem> = FxHashMap::default();
    for (ia, xa) in va {
        let (ga, ka) = ba.locate(*ia);
        let ma = k.masks[a as usize][ga];
        for (ib, xb) in vb {
            let (gb, kb) = bb.locate(*ib);
            let mb = k.masks[b as usize][gb];
            if ma & mb != 0 {
                continue;
            }
            let g = k.position((a + b) as usize, ma | mb).expect("union is a Koszul basis element");
            let idx = dst.index_of(g, ka + kb).expect("product lies in the target block");
            let mut v = f.mul(xa, xb);
            if shuffle_sign_masks(ma, mb) < 0 {
                v = f.neg(&v);
            }
            let slot = acc.entry(idx).or_insert_with(|| f.zero());
            *slot = f.add(slot, &v);
        }
    }
    let mut out: SparseVec<F::Elem> = acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect();
    out.sort_unstable_by_key(|e| e.0);
    out
}

/// All homology representatives of `H_j(d)`, with their weights.
fn reps<F: Field>(h: &Homology<'_, F>, j: i32, d: Multidegree) -> Vec<(Weight, SparseVec<F::Elem>)> {
    if !d.is_nonnegative() {
        return Vec::new();
    }
    h.weights(j, d)
        .into_iter()
        .flat_map(|w| {
            let b = h.block(j, d, &w);
            b.reps.iter().map(|z| (w.clone(), z.clone())).collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingCheck {
    pub degree: Multidegree,
    pub partner: Multidegree,
    pub left_dim: usize,
    pub right_dim: usize,
    pub rank: usize,
}

impl PairingCheck {
    pub fn perfect(&self) -> bool {
        self.rank == self.left_dim && self.rank == self.right_dim
    }

    pub fn full_rank(&self) -> bool {
        self.rank == self.left_dim.min(self.right_dim)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub i: i32,
    pub top: i32,
    pub socle: Multidegree,
    pub checks: Vec<PairingCheck>,
}

/// Bilinear pairings `H_i(d) × H_{top-i}(D - d) → H_top(D)` through exterior
/// multiplication of cycles, for a socle degree `D` where `H_top` is one-dimensional.
pub fn duality_pairing(
    k: &Koszul,
    i: i32,
    top: i32,
    socle: Multidegree,
    degrees: &[Multidegree],
    field: CoeffDomain,
) -> Result<DualityReport> {
    let bound = degrees.iter().fold(socle, |m, d| max_degree(m, *d));
    with_field!(field, f => {
        let h = Homology::new(&k.complex, bound, f)?;
        let target = reps(&h, top, socle);
        if target.len() != 1 {
            return Err(Error::TargetNotOneDimensional(target.len()));
        }
        let tw = target[0].0.clone();
        let tblock = h.block(top, socle, &tw);
        let mut checks = Vec::new();
        for &d in degrees {
            let partner = socle - d;
            let left = reps(&h, i, d);
            let right = reps(&h, top - i, partner);
            let mut rows = Vec::with_capacity(left.len());
            for (wl, zl) in &left {
                let mut row = Vec::new();
                for (t, (wr, zr)) in right.iter().enumerate() {
                    if weight_add(wl, wr) != tw {
                        continue;
                    }
                    let p = wedge(&h, k, (i, d, wl), zl, (top - i, partner, wr), zr);
                    if let Some((_, c)) = tblock.coordinates(&p).into_iter().next() {
                        row.push((t, c));
                    }
                }
                rows.push(row);
            }
            let m = SparseMatrix::from_rows(right.len(), rows);
            let rank = if m.rows() == 0 || m.cols() == 0 { 0 } else { rank_of(h.field(), &m) };
            checks.push(PairingCheck { degree: d, partner, left_dim: left.len(), right_dim: right.len(), rank });
        }
        Ok(DualityReport { i, top, socle, checks })
    })
}

fn max_degree(a: Multidegree, b: Multidegree) -> Multidegree {
    let c: Vec<i32> = a.components().iter().zip(b.components()).map(|(x, y)| *x.max(y)).collect();
    Multidegree::from_slice(&c).expect("same arity")
}

/// The map `H_i(d) → Hom(H_{top-i}, H_top)_d` in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomPairing {
    pub degree: Multidegree,
    pub source_dim: usize,
    pub hom_dim: usize,
    pub rank: usize,
}

impl HomPairing {
    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn isomorphism(&self) -> bool {
        self.injective() && self.rank == self.hom_dim
    }
}

/// For each degree `d`, the rank of `H_i(d) → Hom(H_{top-i}, H_top)_d`, `h ↦ (g ↦ h ∧ g)`,
/// against the dimension of the Hom space, which is computed from a presentation of
/// `H_{top-i}` found up to `presentation_bound`.
pub fn hom_pairing(
    k: &Koszul,
    i: i32,
    top: i32,
    degrees: &[Multidegree],
    presentation_bound: Multidegree,
    field: CoeffDomain,
) -> Result<Vec<HomPairing>> {
    let dmax = degrees.iter().fold(presentation_bound, |m, d| max_degree(m, *d));
    let bound = dmax + presentation_bound;
    with_field!(field, f => {
        let h = Homology::new(&k.complex, bound, f)?;
        let pres = Presentation::compute(&h, top - i, presentation_bound);
        Ok(degrees.iter().map(|&d| hom_in_degree(&h, k, i, top, &pres, d)).collect())
    })
}

fn hom_in_degree<F: Field>(h: &Homology<'_, F>, k: &Koszul, i: i32, top: i32, pres: &Presentation<F>, d: Multidegree) -> HomPairing {
    let f = h.field();
    let mut candidates: BTreeSet<Weight> = h.weights(i, d).into_iter().collect();
    for g in &pres.generators {
        for w in h.weights(top, g.degree + d) {
            candidates.insert(Homology::<F>::sub_weight(&w, &g.weight));
        }
    }
    let mut out = HomPairing { degree: d, source_dim: 0, hom_dim: 0, rank: 0 };
    for u in &candidates {
        // columns: (generator, representative of H_top at the generator's image)
        let mut offsets = Vec::with_capacity(pres.generators.len());
        let mut ncols = 0;
        let blocks: Vec<_> = pres
            .generators
            .iter()
            .map(|g| {
                let b = h.block(top, g.degree + d, &weight_add(&g.weight, u));
                offsets.push(ncols);
                ncols += b.dim();
                b
            })
            .collect();
        let source = h.block(i, d, u);
        let source_dim = source.dim();
        out.source_dim += source_dim;
        if ncols == 0 {
            continue;
        }
        // relations impose linear conditions on the images of the generators
        let mut row_off = 0;
        let mut cols: Vec<SparseVec<F::Elem>> = vec![Vec::new(); ncols];
        for r in &pres.relations {
            let tdeg = r.degree + d;
            let tw = weight_add(&r.weight, u);
            let tblock = h.block(top, tdeg, &tw);
            if tblock.dim() == 0 {
                continue;
            }
            for (gk, g) in pres.generators.iter().enumerate() {
                let terms: Vec<_> = r.terms.iter().filter(|t| t.0 == gk).collect();
                if terms.is_empty() {
                    continue;
                }
                let src_deg = g.degree + d;
                let src_w = weight_add(&g.weight, u);
                for (t, rho) in blocks[gk].reps.iter().enumerate() {
                    let mut acc: FxHashMap<usize, F::Elem> = FxHashMap::default();
                    for (_, key, c) in &terms {
                        let mdeg = r.degree - g.degree;
                        let mw = Homology::<F>::sub_weight(&r.weight, &g.weight);
                        for (idx, x) in h.shift(top, src_deg, &src_w, rho, *key, mdeg, &mw) {
                            let slot = acc.entry(idx).or_insert_with(|| f.zero());
                            *slot = f.add(slot, &f.mul(c, &x));
                        }
                    }
                    let mut v: SparseVec<F::Elem> = acc.into_iter().filter(|(_, x)| !f.is_zero(x)).collect();
                    v.sort_unstable_by_key(|e| e.0);
                    let coords = tblock.coordinates(&v);
                    let col = &mut cols[offsets[gk] + t];
                    for (c, x) in coords {
                        col.push((row_off + c, x));
                    }
                }
            }
            row_off += tblock.dim();
        }
        for col in &mut cols {
            merge_sorted(f, col);
        }
        let m = SparseMatrix::from_columns(row_off, cols);
        let conditions = if row_off == 0 { 0 } else { rank_of(f, &m) };
        out.hom_dim += ncols - conditions;

        if source_dim == 0 {
            continue;
        }
        let mut images = Vec::with_capacity(source_dim);
        for z in &source.reps {
            let mut col: SparseVec<F::Elem> = Vec::new();
            for (gk, g) in pres.generators.iter().enumerate() {
                if blocks[gk].dim() == 0 {
                    continue;
                }
                let p = wedge(h, k, (i, d, u), z, (top - i, g.degree, &g.weight), &g.cycle);
                for (c, x) in blocks[gk].coordinates(&p) {
                    col.push((offsets[gk] + c, x));
                }
            }
            images.push(col);
        }
        out.rank += rank_of(f, &SparseMatrix::from_columns(ncols, images));
    }
    out
}

fn merge_sorted<F: Field>(f: &F, v: &mut SparseVec<F::Elem>) {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(v.len());
    for (i, x) in v.drain(..) {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = f.add(y, &x),
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !f.is_zero(x));
    *v = out;
}
