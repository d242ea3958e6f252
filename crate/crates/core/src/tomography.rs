//! Density-matrix recovery from Born statistics over several contexts.
//!
//! The unknown `ρ` is written in a real Hermitian parameterization: `d`
//! diagonal entries, then the real and imaginary parts of each upper
//! off-diagonal entry. Every recorded probability `p_k = Tr[ρ P_k]` is then a
//! real linear equation in those `d²` parameters, and the trace condition adds
//! one more. The system is solved by least squares and the result projected
//! back onto the density matrices by clipping negative eigenvalues.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_distr::{Binomial, Distribution};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::hilbert::{born_value, c, hermitian_eigen, CMatrix, DensityMatrix, StateVector, TOL_NORM};
use crate::powergraph::{Context, NodeId, PowerGraph};

/// Largest residual tolerated on exact records.
const EXACT_RESIDUAL: f64 = 1e-6;

/// Outcome probabilities of one context, exact or empirical.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    context: Vec<NodeId>,
    probabilities: BTreeMap<NodeId, f64>,
    shots: Option<u64>,
}

impl MeasurementRecord {
    pub fn new(context: Vec<NodeId>, probabilities: BTreeMap<NodeId, f64>, shots: Option<u64>) -> Result<Self> {
        let mut context = context;
        context.sort_unstable();
        context.dedup();
        if context.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !context.iter().eq(probabilities.keys()) {
            return Err(Error::Invariant("probabilities must be keyed by exactly the context's nodes".into()));
        }
        if let Some((id, p)) = probabilities.iter().find(|(_, p)| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Invariant(format!("probability {p} of node {id} outside [0, 1]")));
        }
        if shots == Some(0) {
            return Err(Error::Invariant("shots must be positive".into()));
        }
        let sum: f64 = probabilities.values().sum();
        let tol = match shots {
            None => context.len() as f64 * TOL_NORM,
            Some(n) => 4.0 / (n as f64).sqrt(),
        };
        if (sum - 1.0).abs() > tol {
            return Err(Error::Invariant(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(Self { context, probabilities, shots })
    }

    pub fn context(&self) -> &[NodeId] {
        &self.context
    }

    pub fn probabilities(&self) -> &BTreeMap<NodeId, f64> {
        &self.probabilities
    }

    pub fn shots(&self) -> Option<u64> {
        self.shots
    }
}

/// Exact Born values of `rho` on each context.
pub fn exact_records(rho: &DensityMatrix, contexts: &[Context], g: &PowerGraph) -> Result<Vec<MeasurementRecord>> {
    contexts
        .iter()
        .map(|ctx| {
            let probabilities = ctx
                .node_ids
                .iter()
                .map(|&id| Ok((id, born_value(rho, g.node(id)?)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            MeasurementRecord::new(ctx.node_ids.clone(), probabilities, None)
        })
        .collect()
}

/// Empirical frequencies from `shots` multinomial draws per context, drawn
/// as a chain of binomials from a xoshiro256++ stream seeded with `seed`.
pub fn sampled_records(
    rho: &DensityMatrix,
    contexts: &[Context],
    g: &PowerGraph,
    shots: u64,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let exact = exact_records(rho, contexts, g)?;
    exact
        .into_iter()
        .map(|rec| {
            let mut remaining = shots;
            let mut mass_left = 1.0;
            let mut probabilities = BTreeMap::new();
            let last = rec.context.len() - 1;
            for (k, (&id, &p)) in rec.probabilities.iter().enumerate() {
                let count = if k == last || remaining == 0 {
                    remaining
                } else {
                    let q = (p / mass_left).clamp(0.0, 1.0);
                    Binomial::new(remaining, q).expect("valid binomial").sample(&mut rng)
                };
                remaining -= count;
                mass_left -= p;
                probabilities.insert(id, count as f64 / shots as f64);
            }
            MeasurementRecord::new(rec.context, probabilities, Some(shots))
        })
        .collect()
}

/// `Tr[B_m P]` for each parameter direction `B_m`.
fn parameter_row(p: &CMatrix) -> Vec<f64> {
    let d = p.nrows();
    let mut row = Vec::with_capacity(d * d);
    for i in 0..d {
        row.push(p[(i, i)].re);
    }
    for i in 0..d {
        for j in i + 1..d {
            row.push(2.0 * p[(i, j)].re);
            row.push(2.0 * p[(i, j)].im);
        }
    }
    row
}

fn trace_row(d: usize) -> Vec<f64> {
    let mut row = vec![0.0; d * d];
    row[..d].fill(1.0);
    row
}

fn parameters_to_matrix(x: &DVector<f64>, d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = c(x[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            m[(i, j)] = c(x[k], x[k + 1]);
            m[(j, i)] = c(x[k], -x[k + 1]);
            k += 2;
        }
    }
    m
}

fn check_records(records: &[MeasurementRecord], g: &PowerGraph) -> Result<()> {
    for rec in records {
        if let Some(&bad) = rec.context.iter().find(|&&id| id >= g.len()) {
            return Err(Error::UnknownNode(bad));
        }
    }
    Ok(())
}

/// Rank of the linear map `ρ ↦ (Tr[ρ P_k])_k` plus the trace, over Hermitian
/// matrices.
fn measurement_rank(records: &[MeasurementRecord], g: &PowerGraph) -> usize {
    let d = g.dim();
    let nodes: BTreeSet<NodeId> = records.iter().flat_map(|r| r.context.iter().copied()).collect();
    let mut rows: Vec<Vec<f64>> = nodes.iter().map(|&id| parameter_row(g.nodes()[id].matrix())).collect();
    rows.push(trace_row(d));
    let a = DMatrix::from_fn(rows.len(), d * d, |r, col| rows[r][col]);
    let svd = a.svd(false, false);
    let max = svd.singular_values.max();
    svd.singular_values.iter().filter(|&&s| s > 1e-9 * max.max(1.0)).count()
}

/// True iff the records' projectors (with the trace condition) determine
/// every Hermitian matrix, i.e. the measurement map has rank `d²`.
pub fn is_informationally_complete(records: &[MeasurementRecord], g: &PowerGraph) -> bool {
    check_records(records, g).is_ok() && measurement_rank(records, g) == g.dim() * g.dim()
}

/// Least-squares inversion of the records followed by projection onto the
/// positive semi-definite, unit-trace matrices.
pub fn reconstruct(records: &[MeasurementRecord], g: &PowerGraph) -> Result<DensityMatrix> {
    check_records(records, g)?;
    let d = g.dim();
    let rank = measurement_rank(records, g);
    if rank < d * d {
        return Err(Error::Underdetermined { rank, needed: d * d });
    }

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut tolerance: f64 = EXACT_RESIDUAL;
    for rec in records {
        for (&id, &p) in &rec.probabilities {
            rows.push(parameter_row(g.nodes()[id].matrix()));
            rhs.push(p);
        }
        if let Some(n) = rec.shots {
            tolerance = tolerance.max(5.0 / (n as f64).sqrt());
        }
    }
    rows.push(trace_row(d));
    rhs.push(1.0);

    let a = DMatrix::from_fn(rows.len(), d * d, |r, col| rows[r][col]);
    let b = DVector::from_vec(rhs);
    let x = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-12)
        .map_err(|e| Error::InconsistentRecords(e.to_string()))?;
    let residual = (&a * &x - &b).amax();
    if residual > tolerance {
        return Err(Error::InconsistentRecords(format!(
            "least-squares residual {residual:e} exceeds {tolerance:e}"
        )));
    }
    project_to_density(&parameters_to_matrix(&x, d))
}

/// Clips negative eigenvalues of a Hermitian matrix to zero and rescales to
/// unit trace.
pub fn project_to_density(m: &CMatrix) -> Result<DensityMatrix> {
    let (values, vectors) = hermitian_eigen(m);
    let clipped: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::InconsistentRecords("no positive spectrum to project onto".into()));
    }
    let d = m.nrows();
    let mut out = CMatrix::zeros(d, d);
    for (k, &v) in clipped.iter().enumerate() {
        if v > 0.0 {
            let col = vectors.column(k);
            out += (col * col.adjoint()) * c(v / total, 0.0);
        }
    }
    out = (&out + out.adjoint()) * c(0.5, 0.0);
    DensityMatrix::new(out)
}

/// Pure state behind a reconstructed density matrix.
pub fn recover_vector(rho_hat: &DensityMatrix) -> Result<StateVector> {
    rho_hat.dominant_vector()
}
