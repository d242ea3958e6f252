//! Intensive valuations of a power graph.
//!
//! A [`Psa`] assigns every node its Born value under some density matrix. A
//! [`QuantumSituation`] is the same pure state written in one context: the
//! context's basis vectors with complex coefficients. Any superposition
//! determines the whole valuation, and the valuation does not depend on which
//! context was used to write the superposition.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hilbert::{
    born_value, check_orthonormal, fix_phase, CMatrix, CVector, DensityMatrix, StateVector, C64,
    TOL_NORM, TOL_PROJ,
};
use crate::powergraph::{Context, NodeId, PowerGraph};

/// A valuation `node → [0, 1]` over one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Psa {
    graph_ref: String,
    values: BTreeMap<NodeId, f64>,
    source: Option<DensityMatrix>,
}

impl Psa {
    /// Builds and validates a valuation against `g`.
    pub fn new(
        g: &PowerGraph,
        graph_ref: impl Into<String>,
        values: BTreeMap<NodeId, f64>,
        source: Option<DensityMatrix>,
    ) -> Result<Self> {
        let psa = Self { graph_ref: graph_ref.into(), values, source };
        psa.validate(g)?;
        Ok(psa)
    }

    pub fn graph_ref(&self) -> &str {
        &self.graph_ref
    }

    pub fn values(&self) -> &BTreeMap<NodeId, f64> {
        &self.values
    }

    pub fn value(&self, id: NodeId) -> Result<f64> {
        self.values.get(&id).copied().ok_or(Error::UnknownNode(id))
    }

    pub fn source(&self) -> Option<&DensityMatrix> {
        self.source.as_ref()
    }

    /// Checks coverage, range, agreement with the source density (when
    /// present) and context normalization.
    pub fn validate(&self, g: &PowerGraph) -> Result<()> {
        for id in 0..g.len() {
            let v = self.value(id).map_err(|_| Error::MissingNodeValue(id))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Invariant(format!("value {v} of node {id} outside [0, 1]")));
            }
        }
        if let Some(&extra) = self.values.keys().find(|&&k| k >= g.len()) {
            return Err(Error::UnknownNode(extra));
        }
        if let Some(rho) = &self.source {
            for (id, p) in g.nodes().iter().enumerate() {
                let expected = born_value(rho, p)?;
                if (expected - self.values[&id]).abs() > TOL_NORM {
                    return Err(Error::Invariant(format!(
                        "node {id}: value {} differs from Born value {expected}",
                        self.values[&id]
                    )));
                }
            }
        }
        self.check_normalization(g)
    }

    /// Every full orthonormal context of `g` carries total value 1 within
    /// `dim · TOL_NORM`.
    pub fn check_normalization(&self, g: &PowerGraph) -> Result<()> {
        let tol = g.dim() as f64 * TOL_NORM;
        for ctx in g.full_contexts() {
            let sum: f64 = ctx.node_ids.iter().map(|id| self.values.get(id).copied().unwrap_or(0.0)).sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::Invariant(format!(
                    "context {:?} sums to {sum}, not 1",
                    ctx.node_ids
                )));
            }
        }
        Ok(())
    }
}

/// Born value of every node of `g` under `rho`.
pub fn evaluate_psa(rho: &DensityMatrix, g: &PowerGraph) -> Result<Psa> {
    if rho.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: rho.dim() });
    }
    let values = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, p)| born_value(rho, p).map(|v| (id, v)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(Psa { graph_ref: g.id(), values, source: Some(rho.clone()) })
}

/// A pure state expanded in one full context: `Σ_i c_i |α_i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSituation {
    context: Context,
    coefficients: BTreeMap<NodeId, C64>,
    basis_vectors: BTreeMap<NodeId, StateVector>,
}

impl QuantumSituation {
    pub fn new(
        g: &PowerGraph,
        context: Context,
        coefficients: BTreeMap<NodeId, C64>,
        basis_vectors: BTreeMap<NodeId, StateVector>,
    ) -> Result<Self> {
        check_full_context(g, &context)?;
        let mut qs = Self::standalone(context.node_ids.clone(), coefficients, basis_vectors)?;
        for (&id, v) in &qs.basis_vectors {
            let defect = (v.outer() - g.node(id)?.matrix()).norm();
            if defect > TOL_PROJ * 10.0 {
                return Err(Error::Invariant(format!("basis vector for node {id} does not span its projector")));
            }
        }
        qs.context = context;
        Ok(qs)
    }

    /// Validates everything that does not need the graph: the basis vectors
    /// form a full orthonormal basis and the coefficients are unit-norm.
    pub fn standalone(
        node_ids: Vec<NodeId>,
        coefficients: BTreeMap<NodeId, C64>,
        basis_vectors: BTreeMap<NodeId, StateVector>,
    ) -> Result<Self> {
        let mut node_ids = node_ids;
        node_ids.sort_unstable();
        node_ids.dedup();
        if !node_ids.iter().eq(coefficients.keys()) || !node_ids.iter().eq(basis_vectors.keys()) {
            return Err(Error::Invariant(
                "coefficients and basis vectors must be keyed by exactly the context's nodes".into(),
            ));
        }
        let norm: f64 = coefficients.values().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::NonUnitVector { norm: norm.sqrt() });
        }
        let basis: Vec<StateVector> = basis_vectors.values().cloned().collect();
        check_orthonormal(&basis)?;
        if basis.len() != basis[0].dim() {
            return Err(Error::IncompleteContext);
        }
        let context = Context { node_ids, is_maximal: true };
        Ok(Self { context, coefficients, basis_vectors })
    }

    pub fn dim(&self) -> usize {
        self.context.len()
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn coefficients(&self) -> &BTreeMap<NodeId, C64> {
        &self.coefficients
    }

    pub fn coefficient(&self, id: NodeId) -> Result<C64> {
        self.coefficients.get(&id).copied().ok_or(Error::UnknownNode(id))
    }

    pub fn basis_vectors(&self) -> &BTreeMap<NodeId, StateVector> {
        &self.basis_vectors
    }

    /// `|c_i|²` per context node.
    pub fn potentiae(&self) -> BTreeMap<NodeId, f64> {
        self.coefficients.iter().map(|(&id, z)| (id, z.norm_sqr())).collect()
    }

    /// `Σ_i c_i |α_i⟩`.
    pub fn state_vector(&self) -> StateVector {
        let mut v = CVector::zeros(self.dim());
        for (id, c) in &self.coefficients {
            v += self.basis_vectors[id].entries() * *c;
        }
        StateVector::from_cvector_unchecked(v)
    }

    /// Same situation with every coefficient multiplied by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = C64::from_polar(1.0, theta);
        let mut out = self.clone();
        for c in out.coefficients.values_mut() {
            *c *= phase;
        }
        out
    }
}

fn check_full_context(g: &PowerGraph, ctx: &Context) -> Result<()> {
    if !crate::powergraph::is_context(g, &ctx.node_ids)? || !g.is_resolution_of_identity(&ctx.node_ids) {
        return Err(Error::IncompleteContext);
    }
    Ok(())
}

/// Expands a pure state in `ctx`. Coefficients are `⟨α_i|v⟩` with the
/// basis vectors taken from the graph's projectors; the first coefficient of
/// non-negligible magnitude (in node order) is made real and positive.
pub fn superposition_from_vector(v: &StateVector, ctx: &Context, g: &PowerGraph) -> Result<QuantumSituation> {
    if v.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: v.dim() });
    }
    check_full_context(g, ctx)?;
    let basis: BTreeMap<NodeId, StateVector> =
        ctx.node_ids.iter().map(|&id| Ok((id, g.node(id)?.vector()))).collect::<Result<_>>()?;
    let mut coeffs = CVector::from_iterator(
        ctx.len(),
        ctx.node_ids.iter().map(|id| basis[id].entries().dotc(v.entries())),
    );
    fix_phase(&mut coeffs);
    let coefficients = ctx.node_ids.iter().copied().zip(coeffs.iter().copied()).collect();
    QuantumSituation::new(g, ctx.clone(), coefficients, basis)
}

/// Expands the density matrix of a pure state in `ctx`. Mixed inputs
/// (largest eigenvalue below `1 − 1e-7`) have no superposition form.
pub fn superposition_from_density(
    rho: &DensityMatrix,
    ctx: &Context,
    g: &PowerGraph,
) -> Result<QuantumSituation> {
    let v = rho.dominant_vector().map_err(|e| match e {
        Error::NotPure { max_eigenvalue } => Error::MixedStateNotExpandable { max_eigenvalue },
        other => other,
    })?;
    superposition_from_vector(&v, ctx, g)
}

/// Coordinates `c_i c̄_j` of a superposition's density matrix in its own
/// context, rows and columns in context node order.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisDensity {
    context: Context,
    coeff_matrix: CMatrix,
    basis_vectors: Vec<StateVector>,
}

impl BasisDensity {
    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn coeff_matrix(&self) -> &CMatrix {
        &self.coeff_matrix
    }

    /// Entry for the node pair `(i, j)`.
    pub fn entry(&self, i: NodeId, j: NodeId) -> Result<C64> {
        let pos = |id| self.context.node_ids.binary_search(&id).map_err(|_| Error::UnknownNode(id));
        Ok(self.coeff_matrix[(pos(i)?, pos(j)?)])
    }

    /// `Σ_ij c_i c̄_j |α_i⟩⟨α_j|` in the computational basis.
    pub fn global_matrix(&self) -> CMatrix {
        let d = self.basis_vectors.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, a) in self.basis_vectors.iter().enumerate() {
            for (j, b) in self.basis_vectors.iter().enumerate() {
                m += (a.entries() * b.entries().adjoint()) * self.coeff_matrix[(i, j)];
            }
        }
        m
    }
}

pub fn density_in_basis(qs: &QuantumSituation) -> BasisDensity {
    let c = CVector::from_iterator(qs.dim(), qs.coefficients.values().copied());
    BasisDensity {
        context: qs.context.clone(),
        coeff_matrix: &c * c.adjoint(),
        basis_vectors: qs.basis_vectors.values().cloned().collect(),
    }
}

/// The unique valuation whose superposition over `qs`'s context is `qs`.
pub fn psa_from_superposition(qs: &QuantumSituation, g: &PowerGraph) -> Result<Psa> {
    if qs.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: qs.dim() });
    }
    let rho = DensityMatrix::from_pure(&qs.state_vector());
    evaluate_psa(&rho, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fourier_basis, spin};
    use crate::hilbert::{c, random_density, Projector};
    use crate::powergraph::{context_from_basis, PowerGraph, DEFAULT_TOL};
    use std::f64::consts::FRAC_1_SQRT_2 as S;

    fn xy_graph() -> (PowerGraph, Context, Context) {
        let g = PowerGraph::empty(2, DEFAULT_TOL);
        let (g, cx) = context_from_basis(&g, &spin::x_basis()).unwrap();
        let (g, cy) = context_from_basis(&g, &spin::y_basis()).unwrap();
        (g, cx, cy)
    }

    #[test]
    fn stern_gerlach_values() {
        let (g, _, _) = xy_graph();
        let psa = evaluate_psa(&DensityMatrix::from_pure(&spin::up_x()), &g).unwrap();
        let expected = [1.0, 0.0, 0.5, 0.5];
        for (id, e) in expected.iter().enumerate() {
            assert!((psa.value(id).unwrap() - e).abs() < 1e-12);
        }
        psa.validate(&g).unwrap();
    }

    #[test]
    fn maximally_mixed_in_d4() {
        let g = PowerGraph::empty(4, DEFAULT_TOL);
        let (g, _) = context_from_basis(&g, &fourier_basis(4)).unwrap();
        let psa = evaluate_psa(&DensityMatrix::maximally_mixed(4), &g).unwrap();
        assert!(psa.values().values().all(|v| (v - 0.25).abs() < 1e-12));
    }

    #[test]
    fn dimension_mismatch() {
        let (g, _, _) = xy_graph();
        assert!(matches!(
            evaluate_psa(&DensityMatrix::maximally_mixed(3), &g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn expansion_of_up_x() {
        let (g, cx, cy) = xy_graph();
        let qs = superposition_from_vector(&spin::up_x(), &cy, &g).unwrap();
        for c in qs.coefficients().values() {
            assert!((c.norm() - S).abs() < 1e-12);
        }
        // phase convention: first coefficient real positive
        let first = qs.coefficient(2).unwrap();
        assert!(first.im.abs() < 1e-15 && first.re > 0.0);

        let qs = superposition_from_vector(&spin::up_x(), &cx, &g).unwrap();
        assert!((qs.coefficient(0).unwrap() - c(1., 0.)).norm() < 1e-12);
        assert!(qs.coefficient(1).unwrap().norm() < 1e-12);
    }

    #[test]
    fn fourier_expansion_of_basis_vector() {
        let g = PowerGraph::empty(4, DEFAULT_TOL);
        let (g, ctx) = context_from_basis(&g, &fourier_basis(4)).unwrap();
        let qs = superposition_from_vector(&StateVector::basis(4, 0), &ctx, &g).unwrap();
        assert!(qs.potentiae().values().all(|p| (p - 0.25).abs() < 1e-12));
    }

    #[test]
    fn mixed_states_do_not_expand() {
        let (g, cx, _) = xy_graph();
        assert!(matches!(
            superposition_from_density(&DensityMatrix::maximally_mixed(2), &cx, &g),
            Err(Error::MixedStateNotExpandable { .. })
        ));
        let qs = superposition_from_density(&DensityMatrix::from_pure(&spin::up_x()), &cx, &g).unwrap();
        assert!((qs.potentiae()[&0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_context_rejected() {
        let (g, _, _) = xy_graph();
        let single = Context::new(&g, &[0]).unwrap();
        assert!(matches!(
            superposition_from_vector(&spin::up_x(), &single, &g),
            Err(Error::IncompleteContext)
        ));
    }

    #[test]
    fn basis_density_examples() {
        let (g, cx, cy) = xy_graph();
        let bd = density_in_basis(&superposition_from_vector(&spin::up_x(), &cx, &g).unwrap());
        assert!((bd.entry(0, 0).unwrap() - c(1., 0.)).norm() < 1e-12);
        assert!(bd.entry(1, 1).unwrap().norm() < 1e-12);

        let bd = density_in_basis(&superposition_from_vector(&spin::up_x(), &cy, &g).unwrap());
        for i in [2, 3] {
            for j in [2, 3] {
                assert!((bd.entry(i, j).unwrap().norm() - 0.5).abs() < 1e-12);
            }
        }
        assert!((bd.global_matrix() - spin::up_x().outer()).norm() < TOL_NORM);
    }

    #[test]
    fn uniqueness_across_contexts() {
        let (g, cx, cy) = xy_graph();
        let a = psa_from_superposition(&superposition_from_vector(&spin::up_x(), &cx, &g).unwrap(), &g).unwrap();
        let b = psa_from_superposition(&superposition_from_vector(&spin::up_x(), &cy, &g).unwrap(), &g).unwrap();
        for id in 0..g.len() {
            assert!((a.value(id).unwrap() - b.value(id).unwrap()).abs() < TOL_NORM);
        }
    }

    #[test]
    fn z_only_graph() {
        let g = PowerGraph::empty(2, DEFAULT_TOL);
        let (g, cz) = context_from_basis(&g, &spin::z_basis()).unwrap();
        let qs = superposition_from_vector(&spin::up_z(), &cz, &g).unwrap();
        let psa = psa_from_superposition(&qs, &g).unwrap();
        assert_eq!(psa.values().values().copied().collect::<Vec<_>>(), vec![1.0, 0.0]);
    }

    #[test]
    fn shared_node_has_one_value() {
        // two d=3 bases sharing |2⟩
        let g = PowerGraph::empty(3, DEFAULT_TOL);
        let b1: Vec<_> = (0..3).map(|i| StateVector::basis(3, i)).collect();
        let b2 = vec![
            StateVector::from_real(&[1., 1., 0.]).unwrap(),
            StateVector::from_real(&[1., -1., 0.]).unwrap(),
            StateVector::basis(3, 2),
        ];
        let (g, c1) = context_from_basis(&g, &b1).unwrap();
        let (g, c2) = context_from_basis(&g, &b2).unwrap();
        let shared = g.find(&Projector::from_vector(&StateVector::basis(3, 2)).unwrap()).unwrap();
        assert!(c1.contains(shared) && c2.contains(shared));
        let rho = random_density(3, 5);
        let v = crate::hilbert::random_state(3, 5);
        let q1 = superposition_from_vector(&v, &c1, &g).unwrap();
        let q2 = superposition_from_vector(&v, &c2, &g).unwrap();
        assert!((q1.potentiae()[&shared] - q2.potentiae()[&shared]).abs() < TOL_NORM);
        evaluate_psa(&rho, &g).unwrap().validate(&g).unwrap();
    }

    #[test]
    fn invalid_psa_rejected() {
        let (g, _, _) = xy_graph();
        let values: BTreeMap<_, _> = [(0, 0.7), (1, 0.7), (2, 0.5), (3, 0.5)].into();
        assert!(Psa::new(&g, "g", values, None).is_err());
        let partial: BTreeMap<_, _> = [(0, 1.0), (1, 0.0)].into();
        assert!(matches!(Psa::new(&g, "g", partial, None), Err(Error::MissingNodeValue(2))));
    }
}
