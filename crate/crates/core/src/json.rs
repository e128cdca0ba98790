//! Wire formats. Hypergraphs are `{"d":3,"edges":[[1,2],[3]]}` with
//! 1-based sorted vertex lists; rationals travel as strings like `"1/2"`
//! so nothing is ever rounded.

use std::str::FromStr;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::dim::Dimension;
use crate::edge::{Edge, EdgeSet};
use crate::error::{DspError, Result};
use crate::realize::{RealizationTrace, TraceStep};
use crate::vector::DegreeVector;
use crate::zonotope::{Decomposition, MembershipResult, SeparationCertificate};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct HypergraphJson {
    pub d: u32,
    pub edges: Vec<Vec<u32>>,
}

impl HypergraphJson {
    pub fn from_edge_set(h: &EdgeSet) -> Self {
        HypergraphJson {
            d: h.dim().get(),
            edges: h.iter().map(|e| e.vertices()).collect(),
        }
    }

    pub fn to_edge_set(&self, limit: u32) -> Result<EdgeSet> {
        let dim = Dimension::with_limit(self.d, limit)?;
        let mut set = EdgeSet::new(dim);
        for vs in &self.edges {
            if vs.is_empty() {
                return Err(DspError::invalid("empty edge"));
            }
            let e = Edge::from_vertices(vs, dim)?;
            if !set.insert(e)? {
                return Err(DspError::invalid(format!("duplicate edge {vs:?}")));
            }
        }
        Ok(set)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DegreeVectorJson {
    pub d: u32,
    pub b: Vec<i64>,
}

impl DegreeVectorJson {
    pub fn from_vector(b: &DegreeVector) -> Self {
        DegreeVectorJson {
            d: b.dim().get(),
            b: b.coords().to_vec(),
        }
    }

    pub fn to_vector(&self, limit: u32) -> Result<DegreeVector> {
        let dim = Dimension::with_limit(self.d, limit)?;
        DegreeVector::new(dim, self.b.clone())
    }
}

pub fn ratio_string(r: &BigRational) -> String {
    r.to_string()
}

pub fn parse_ratio(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|e| DspError::invalid(format!("bad rational {s:?}: {e}")))
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FractionalEntryJson {
    pub edge: Vec<u32>,
    pub alpha: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DecompositionJson {
    pub integral: Vec<Vec<u32>>,
    pub fractional: Vec<FractionalEntryJson>,
}

impl DecompositionJson {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        DecompositionJson {
            integral: d.integral.iter().map(|e| e.vertices()).collect(),
            fractional: d
                .fractional
                .iter()
                .map(|(e, a)| FractionalEntryJson {
                    edge: e.vertices(),
                    alpha: ratio_string(a),
                })
                .collect(),
        }
    }
}

/// `{"status":"inside",...}` or `{"status":"outside","c":[...],"lhs":..,"rhs":..}`.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum MembershipJson {
    Inside {
        integral: Vec<Vec<u32>>,
        fractional: Vec<FractionalEntryJson>,
    },
    Outside {
        c: Vec<String>,
        lhs: String,
        rhs: String,
    },
}

impl MembershipJson {
    pub fn from_result(r: &MembershipResult) -> Self {
        match r {
            MembershipResult::Inside(d) => {
                let dj = DecompositionJson::from_decomposition(d);
                MembershipJson::Inside {
                    integral: dj.integral,
                    fractional: dj.fractional,
                }
            }
            MembershipResult::Outside(cert) => MembershipJson::from_certificate(cert),
        }
    }

    pub fn from_certificate(cert: &SeparationCertificate) -> Self {
        MembershipJson::Outside {
            c: cert.c.coords().iter().map(ratio_string).collect(),
            lhs: ratio_string(&cert.lhs),
            rhs: ratio_string(&cert.rhs),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum TraceStepJson {
    Claim1 { i: u32 },
    Claim2,
    Swap { i: u32, j: u32 },
    Trim,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TraceCountersJson {
    pub r: i64,
    pub a: i64,
    pub t: i64,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TraceJson {
    pub base: DecompositionJson,
    pub steps: Vec<TraceStepJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counters: Option<TraceCountersJson>,
    pub complemented: bool,
}

impl TraceJson {
    pub fn from_trace(t: &RealizationTrace) -> Self {
        TraceJson {
            base: DecompositionJson::from_decomposition(&t.base),
            steps: t
                .steps
                .iter()
                .map(|s| match *s {
                    TraceStep::GoodPair { vertex } => TraceStepJson::Claim1 {
                        i: vertex as u32 + 1,
                    },
                    TraceStep::RaiseAll => TraceStepJson::Claim2,
                    TraceStep::Swap { from, to } => TraceStepJson::Swap {
                        i: from as u32 + 1,
                        j: to as u32 + 1,
                    },
                    TraceStep::Trim => TraceStepJson::Trim,
                })
                .collect(),
            counters: t.counters.as_ref().map(|c| TraceCountersJson {
                r: c.residue,
                a: c.a,
                t: c.good_pair_steps,
            }),
            complemented: t.complemented,
        }
    }
}
