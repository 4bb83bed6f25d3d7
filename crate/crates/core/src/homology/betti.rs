use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{degrees_up_to, with_field, Homology};
use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::linalg::{kernel_of, CoeffDomain, DomainKind, EchelonBasis, Field, PrimeField, Rationals, SparseMatrix, SparseVec};
use crate::poly::{Multidegree, Weight};

/// Minimal graded Betti numbers β₀ (generators) and β₁ (relations) of a homology module.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    pub bound: Option<Multidegree>,
    pub rows: [BTreeMap<Multidegree, usize>; 2],
}

impl BettiTable {
    pub fn get(&self, k: usize, d: Multidegree) -> usize {
        self.rows.get(k).and_then(|r| r.get(&d)).copied().unwrap_or(0)
    }

    pub fn beta0(&self) -> &BTreeMap<Multidegree, usize> {
        &self.rows[0]
    }

    pub fn beta1(&self) -> &BTreeMap<Multidegree, usize> {
        &self.rows[1]
    }
}

#[derive(Clone, Debug)]
pub struct Generator<F: Field> {
    pub degree: Multidegree,
    pub weight: Weight,
    pub cycle: SparseVec<F::Elem>,
}

/// `Σ coef · monomial(key) · generator[k]`.
#[derive(Clone, Debug)]
pub struct Relation<F: Field> {
    pub degree: Multidegree,
    pub weight: Weight,
    pub terms: Vec<(usize, u128, F::Elem)>,
}

/// Basis `(generator, monomial)` of one weight block of the free module on the generators.
#[derive(Debug, Default)]
struct FreeBlock {
    entries: Vec<(usize, u128)>,
    index: FxHashMap<(usize, u128), usize>,
}

/// Minimal generators and minimal relations of `H_j`, up to a degree bound.
#[derive(Clone, Debug)]
pub struct Presentation<F: Field> {
    pub j: i32,
    pub bound: Multidegree,
    pub generators: Vec<Generator<F>>,
    pub relations: Vec<Relation<F>>,
}

impl<F: Field> Presentation<F> {
    /// Walks the degrees up to `bound` in order. In each degree the generators are the
    /// representatives that stay independent of the boundaries and of the variables times
    /// lower homology; the relations are the kernel of the evaluation map from the free
    /// module on the generators, minus the variables times lower relations.
    pub fn compute(h: &Homology<'_, F>, j: i32, bound: Multidegree) -> Self {
        let f = h.field().clone();
        let engine = h.engine();
        let nvars = engine.ring().nvars();
        let vars: Vec<(Multidegree, u128, Weight)> = (0..nvars)
            .map(|v| {
                let (key, w) = engine.variable(v);
                (engine.ring().degrees()[v], key, w)
            })
            .collect();
        let mut generators: Vec<Generator<F>> = Vec::new();
        let mut relations: Vec<Relation<F>> = Vec::new();
        let mut rel_store: FxHashMap<(Multidegree, Weight), (Arc<FreeBlock>, Vec<SparseVec<F::Elem>>)> = FxHashMap::default();

        for d in degrees_up_to(bound) {
            let weights = h.weights(j, d);
            let fresh: Vec<Vec<Generator<F>>> = weights
                .par_iter()
                .map(|w| {
                    let blk = h.block(j, d, w);
                    if blk.dim() == 0 {
                        return Vec::new();
                    }
                    let mut span = blk.boundaries.clone();
                    for (vd, key, vw) in &vars {
                        if !vd.le(&d) {
                            continue;
                        }
                        let (e, u) = (d - *vd, Homology::<F>::sub_weight(w, vw));
                        let src = h.block(j, e, &u);
                        for z in &src.reps {
                            span.insert(&h.shift(j, e, &u, z, *key, *vd, vw), Vec::new());
                        }
                    }
                    blk.reps
                        .iter()
                        .filter(|z| span.insert(z, Vec::new()))
                        .map(|z| Generator { degree: d, weight: w.clone(), cycle: z.clone() })
                        .collect()
                })
                .collect();
            generators.extend(fresh.into_iter().flatten());

            let gens = &generators;
            let store = &rel_store;
            let solved: Vec<(Weight, Arc<FreeBlock>, Vec<SparseVec<F::Elem>>, Vec<SparseVec<F::Elem>>)> = weights
                .par_iter()
                .map(|w| {
                    let mut free = FreeBlock::default();
                    for (k, g) in gens.iter().enumerate() {
                        if !g.degree.le(&d) {
                            continue;
                        }
                        if let Some(monos) = engine.monomials(d - g.degree, &Homology::<F>::sub_weight(w, &g.weight)) {
                            for &key in &monos.keys {
                                free.index.insert((k, key), free.entries.len());
                                free.entries.push((k, key));
                            }
                        }
                    }
                    if free.entries.is_empty() {
                        return (w.clone(), Arc::new(free), Vec::new(), Vec::new());
                    }
                    let blk = h.block(j, d, w);
                    let cols: Vec<SparseVec<F::Elem>> = free
                        .entries
                        .iter()
                        .map(|&(k, key)| {
                            let g = &gens[k];
                            let e = d - g.degree;
                            let u = Homology::<F>::sub_weight(w, &g.weight);
                            let v = h.shift(j, g.degree, &g.weight, &g.cycle, key, e, &u);
                            blk.boundaries.reduce(&v).0
                        })
                        .collect();
                    let rel = kernel_of(&f, &SparseMatrix::from_columns(blk.basis.len(), cols)).col_vecs();
                    let mut span = EchelonBasis::new(&f, free.entries.len());
                    for (vd, vkey, vw) in &vars {
                        if !vd.le(&d) {
                            continue;
                        }
                        let Some((fb, rels)) = store.get(&(d - *vd, Homology::<F>::sub_weight(w, vw))) else { continue };
                        for r in rels {
                            let mut mapped: SparseVec<F::Elem> = r
                                .iter()
                                .map(|(i, x)| {
                                    let (k, key) = fb.entries[*i];
                                    (free.index[&(k, key + vkey)], x.clone())
                                })
                                .collect();
                            mapped.sort_unstable_by_key(|e| e.0);
                            span.insert(&mapped, Vec::new());
                        }
                    }
                    let minimal: Vec<SparseVec<F::Elem>> = rel.iter().filter(|r| span.insert(r, Vec::new())).cloned().collect();
                    (w.clone(), Arc::new(free), rel, minimal)
                })
                .collect();
            for (w, free, rel, minimal) in solved {
                for r in minimal {
                    let terms = r
                        .into_iter()
                        .map(|(i, x)| {
                            let (k, key) = free.entries[i];
                            (k, key, x)
                        })
                        .collect();
                    relations.push(Relation { degree: d, weight: w.clone(), terms });
                }
                if !rel.is_empty() {
                    rel_store.insert((d, w), (free, rel));
                }
            }
        }
        Presentation { j, bound, generators, relations }
    }

    pub fn betti(&self) -> BettiTable {
        let mut t = BettiTable { bound: Some(self.bound), ..Default::default() };
        for g in &self.generators {
            *t.rows[0].entry(g.degree).or_default() += 1;
        }
        for r in &self.relations {
            *t.rows[1].entry(r.degree).or_default() += 1;
        }
        t
    }
}

/// β₀ and β₁ of `H_j` in all degrees up to `bound`.
pub fn minimal_betti(c: &FreeComplex, j: i32, bound: Multidegree, field: CoeffDomain) -> Result<BettiTable> {
    with_field!(field, f => {
        let h = Homology::new(c, bound, f)?;
        Ok(Presentation::compute(&h, j, bound).betti())
    })
}
