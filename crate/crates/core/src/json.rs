//! JSON file formats.
//!
//! Floats are written with 17 significant digits in scientific notation so
//! that every value survives a round trip bit for bit. Maps keyed by node id
//! are written in ascending id order. Output of [`to_string`] is therefore a
//! pure function of the value.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::fixtures::VectorFixture;
use crate::hilbert::{c, CMatrix, DensityMatrix, Projector, StateVector, C64};
use crate::ksvaluation::{Outcome, ValuationVerdict};
use crate::powergraph::{Context, NodeId, PowerGraph};
use crate::psa::{Psa, QuantumSituation};
use crate::tomography::MeasurementRecord;

/// An `f64` serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

pub fn format_f17(x: f64) -> String {
    // normalize -0.0
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom(format!("non-finite float {}", self.0)));
        }
        let raw = RawValue::from_string(format_f17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(F17)
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<F17>>,
    pub im: Vec<Vec<F17>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| {
            (0..m.nrows()).map(|r| (0..m.ncols()).map(|k| F17(f(&m[(r, k)]))).collect()).collect()
        };
        Self { dim: m.nrows(), re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        let shape_ok = |rows: &Vec<Vec<F17>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Parse(format!("matrix rows do not match dim {n}")));
        }
        Ok(CMatrix::from_fn(n, n, |r, k| c(self.re[r][k].0, self.im[r][k].0)))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorJson {
    pub re: Vec<F17>,
    pub im: Vec<F17>,
}

impl VectorJson {
    pub fn from_vector(v: &StateVector) -> Self {
        Self {
            re: v.entries().iter().map(|z| F17(z.re)).collect(),
            im: v.entries().iter().map(|z| F17(z.im)).collect(),
        }
    }

    pub fn to_vector(&self) -> Result<StateVector> {
        if self.re.len() != self.im.len() {
            return Err(Error::Parse("re and im lengths differ".into()));
        }
        StateVector::new(self.re.iter().zip(&self.im).map(|(a, b)| c(a.0, b.0)).collect())
    }
}

/// A list of state vectors sharing one dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorsJson {
    pub dim: usize,
    pub vectors: Vec<VectorJson>,
}

impl VectorsJson {
    pub fn from_vectors(vs: &[StateVector]) -> Result<Self> {
        let dim = vs.first().ok_or(Error::EmptyInput)?.dim();
        Ok(Self { dim, vectors: vs.iter().map(VectorJson::from_vector).collect() })
    }

    pub fn to_vectors(&self) -> Result<Vec<StateVector>> {
        if self.vectors.is_empty() {
            return Err(Error::EmptyInput);
        }
        self.vectors
            .iter()
            .map(|v| {
                let v = v.to_vector()?;
                if v.dim() != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
                }
                Ok(v)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: F17,
    pub im: F17,
}

pub fn density_to_json(rho: &DensityMatrix) -> MatrixJson {
    MatrixJson::from_matrix(rho.matrix())
}

pub fn density_from_json(m: &MatrixJson) -> Result<DensityMatrix> {
    DensityMatrix::new(m.to_matrix()?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub dim: usize,
    pub tol: F17,
    pub nodes: Vec<MatrixJson>,
    pub edges: Vec<[NodeId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contexts: Option<Vec<Vec<NodeId>>>,
}

impl GraphJson {
    pub fn from_graph(g: &PowerGraph) -> Self {
        Self {
            dim: g.dim(),
            tol: F17(g.tol()),
            nodes: g.nodes().iter().map(|p| MatrixJson::from_matrix(p.matrix())).collect(),
            edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            name: None,
            source: None,
            contexts: None,
        }
    }

    /// Fixture graph with its name, source and declared contexts.
    pub fn from_fixture(f: &VectorFixture) -> Result<Self> {
        let mut json = Self::from_graph(&f.graph()?);
        json.name = Some(f.name.clone());
        json.source = Some(f.source.clone());
        json.contexts = Some(f.contexts.clone());
        Ok(json)
    }

    /// Rebuilds the graph. Adjacency is recomputed from the projectors and
    /// must agree with the stored edge list.
    pub fn to_graph(&self) -> Result<PowerGraph> {
        let projectors = self
            .nodes
            .iter()
            .map(|m| {
                if m.dim != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, found: m.dim });
                }
                Projector::from_matrix(m.to_matrix()?)
            })
            .collect::<Result<Vec<_>>>()?;
        let g = PowerGraph::build(projectors, self.tol.0)?;
        if g.len() != self.nodes.len() {
            return Err(Error::Invariant("graph file contains duplicate nodes".into()));
        }
        let stored: Vec<(NodeId, NodeId)> = self.edges.iter().map(|&[a, b]| (a.min(b), a.max(b))).collect();
        let mut stored_sorted = stored.clone();
        stored_sorted.sort_unstable();
        stored_sorted.dedup();
        if stored_sorted != g.edges() {
            return Err(Error::Invariant("stored edges disagree with the commutation relation".into()));
        }
        if let Some(ctxs) = &self.contexts {
            for ctx in ctxs {
                Context::new(&g, ctx)?;
            }
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsaJson {
    pub graph: String,
    pub values: BTreeMap<NodeId, F17>,
}

impl PsaJson {
    pub fn from_psa(psa: &Psa) -> Self {
        Self {
            graph: psa.graph_ref().to_owned(),
            values: psa.values().iter().map(|(&k, &v)| (k, F17(v))).collect(),
        }
    }

    pub fn to_psa(&self, g: &PowerGraph) -> Result<Psa> {
        let values = self.values.iter().map(|(&k, v)| (k, v.0)).collect();
        Psa::new(g, self.graph.clone(), values, None)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordJson {
    pub context: Vec<NodeId>,
    pub probabilities: BTreeMap<NodeId, F17>,
    pub shots: Option<u64>,
}

impl RecordJson {
    pub fn from_record(r: &MeasurementRecord) -> Self {
        Self {
            context: r.context().to_vec(),
            probabilities: r.probabilities().iter().map(|(&k, &v)| (k, F17(v))).collect(),
            shots: r.shots(),
        }
    }

    pub fn to_record(&self) -> Result<MeasurementRecord> {
        MeasurementRecord::new(
            self.context.clone(),
            self.probabilities.iter().map(|(&k, v)| (k, v.0)).collect(),
            self.shots,
        )
    }
}

/// A quantum situation, self-contained: it carries its own basis vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QsJson {
    pub dim: usize,
    pub context: Vec<NodeId>,
    pub coefficients: BTreeMap<NodeId, ComplexJson>,
    pub basis: BTreeMap<NodeId, VectorJson>,
}

impl QsJson {
    pub fn from_qs(qs: &QuantumSituation) -> Self {
        Self {
            dim: qs.dim(),
            context: qs.context().node_ids.clone(),
            coefficients: qs
                .coefficients()
                .iter()
                .map(|(&k, z)| (k, ComplexJson { re: F17(z.re), im: F17(z.im) }))
                .collect(),
            basis: qs.basis_vectors().iter().map(|(&k, v)| (k, VectorJson::from_vector(v))).collect(),
        }
    }

    pub fn to_qs(&self) -> Result<QuantumSituation> {
        let coefficients = self.coefficients.iter().map(|(&k, z)| (k, c(z.re.0, z.im.0))).collect();
        let basis = self
            .basis
            .iter()
            .map(|(&k, v)| v.to_vector().map(|v| (k, v)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        if basis.values().any(|v| v.dim() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: 0 });
        }
        QuantumSituation::standalone(self.context.clone(), coefficients, basis)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictJson {
    pub outcome: String,
    pub nodes_searched: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<NodeId, u8>>,
}

impl VerdictJson {
    /// Elapsed time is left out so that output stays byte-stable.
    pub fn from_verdict(v: &ValuationVerdict) -> Self {
        let (outcome, budget, witness) = match &v.outcome {
            Outcome::Found(val) => {
                ("found", None, Some(val.values.iter().map(|(&k, &b)| (k, b as u8)).collect()))
            }
            Outcome::Impossible => ("impossible", None, None),
            Outcome::Exhausted { budget } => ("exhausted", Some(*budget), None),
        };
        Self { outcome: outcome.into(), nodes_searched: v.nodes_searched, budget, witness }
    }
}
