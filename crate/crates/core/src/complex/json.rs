use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FreeComplex, Functor, GeneratorLabel, GradedFreeModule, PolyMatrix};
use crate::error::{Error, Result};
use crate::exterior::IndexSet;
use crate::linalg::CoeffDomain;
use crate::poly::text::{from_json_terms, to_json_terms, TermJson};
use crate::poly::{Multidegree, PolyRing, Weight};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingJson {
    pub vars: Vec<String>,
    pub degrees: Vec<Vec<i32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<Vec<Vec<i32>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctorJson {
    Exterior {
        k: usize,
        #[serde(rename = "N")]
        n: usize,
        subset: Vec<usize>,
    },
    Scalar(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub functor: FunctorJson,
    pub det_power: i32,
    pub twist: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub r: usize,
    pub c: usize,
    pub poly: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<EntryJson>,
}

/// Serialized complex. `lo` is the homological index of the first module;
/// `differentials[k]` maps module `k+1` to module `k`; entry indices are 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub ring: RingJson,
    #[serde(default)]
    pub lo: i32,
    pub modules: Vec<Vec<GeneratorJson>>,
    pub differentials: Vec<MatrixJson>,
}

impl ComplexJson {
    pub fn from_complex(c: &FreeComplex) -> Self {
        let ring = c.ring();
        let torus = (ring.torus_dim() > 0).then(|| ring.torus().iter().map(|w| w.to_vec()).collect());
        ComplexJson {
            ring: RingJson {
                vars: ring.names().to_vec(),
                degrees: ring.degrees().iter().map(|d| d.components().to_vec()).collect(),
                torus,
            },
            lo: c.lo(),
            modules: c
                .modules()
                .iter()
                .map(|m| {
                    m.generators()
                        .iter()
                        .map(|g| GeneratorJson {
                            functor: match &g.functor {
                                Functor::Scalar => FunctorJson::Scalar("scalar".into()),
                                Functor::Exterior { n, subset } => {
                                    FunctorJson::Exterior { k: subset.len(), n: *n, subset: subset.to_vec() }
                                }
                            },
                            det_power: g.det_power,
                            twist: g.twist.components().to_vec(),
                        })
                        .collect()
                })
                .collect(),
            differentials: c
                .differentials()
                .iter()
                .map(|d| MatrixJson {
                    rows: d.rows(),
                    cols: d.cols(),
                    entries: d.entries().map(|(r, c, p)| EntryJson { r, c, poly: to_json_terms(p) }).collect(),
                })
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Result<FreeComplex> {
        let degrees = self.ring.degrees.iter().map(|d| Multidegree::from_slice(d)).collect::<Result<Vec<_>>>()?;
        let torus: Vec<Weight> = self
            .ring
            .torus
            .as_ref()
            .map(|t| t.iter().map(|w| w.iter().copied().collect()).collect())
            .unwrap_or_default();
        let ring = Arc::new(PolyRing::with_torus(self.ring.vars.clone(), degrees, torus, CoeffDomain::INTEGERS)?);
        let mut modules = Vec::with_capacity(self.modules.len());
        for m in &self.modules {
            let mut gens = Vec::with_capacity(m.len());
            for g in m {
                let functor = match &g.functor {
                    FunctorJson::Scalar(s) if s == "scalar" => Functor::Scalar,
                    FunctorJson::Scalar(s) => return Err(Error::Parse(format!("unknown functor '{s}'"))),
                    FunctorJson::Exterior { k, n, subset } => {
                        if subset.len() != *k {
                            return Err(Error::Parse(format!("subset {subset:?} does not have size {k}")));
                        }
                        Functor::Exterior { n: *n, subset: IndexSet::new(subset, *n)? }
                    }
                };
                gens.push(GeneratorLabel { functor, det_power: g.det_power, twist: Multidegree::from_slice(&g.twist)? });
            }
            modules.push(GradedFreeModule::new(gens));
        }
        let mut diffs = Vec::with_capacity(self.differentials.len());
        for d in &self.differentials {
            let mut entries = Vec::with_capacity(d.entries.len());
            for e in &d.entries {
                entries.push((e.r, e.c, from_json_terms(&ring, &e.poly)?));
            }
            diffs.push(PolyMatrix::from_entries(d.rows, d.cols, entries)?);
        }
        FreeComplex::new(ring, self.lo, modules, diffs)
    }
}

pub fn complex_to_json(c: &FreeComplex) -> String {
    serde_json::to_string(&ComplexJson::from_complex(c)).expect("serializable")
}

pub fn complex_from_json(s: &str) -> Result<FreeComplex> {
    let j: ComplexJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_complex()
}
