//! Square-of-opposition classification of outcome propositions.
//!
//! A proposition "outcome `P` actualizes" is true in a trial iff that outcome
//! is the one observed. Two distinct commuting rank-1 outcomes are
//! orthogonal, so they are never true together; they are never false
//! together only when they exhaust the space (`P_a + P_b = I`).

use crate::error::{Error, Result};
use crate::hilbert::{CMatrix, TOL_PROJ};
use crate::powergraph::{Context, NodeId, PowerGraph};
use crate::psa::Psa;

/// Below this a potentia counts as absent.
pub const POTENTIA_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeProposition {
    pub node_id: NodeId,
    pub context: Context,
    pub potentia: f64,
}

impl OutcomeProposition {
    /// Reads the potentia of `node_id` from `psa`.
    pub fn new(node_id: NodeId, context: Context, psa: &Psa) -> Result<Self> {
        if !context.contains(node_id) {
            return Err(Error::Invariant(format!("node {node_id} is not in context {:?}", context.node_ids)));
        }
        Ok(Self { node_id, context, potentia: psa.value(node_id)? })
    }

    /// Uses the first maximal context of `g` containing the node.
    pub fn in_graph(node_id: NodeId, g: &PowerGraph, psa: &Psa) -> Result<Self> {
        g.node(node_id)?;
        let context = crate::powergraph::maximal_contexts(g)
            .into_iter()
            .find(|c| c.contains(node_id))
            .expect("every node lies in a maximal context");
        Self::new(node_id, context, psa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OppositionKind {
    Contradictory,
    Contrary,
    Subcontrary,
    Subaltern,
    Unrelated,
}

impl OppositionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OppositionKind::Contradictory => "contradictory",
            OppositionKind::Contrary => "contrary",
            OppositionKind::Subcontrary => "subcontrary",
            OppositionKind::Subaltern => "subaltern",
            OppositionKind::Unrelated => "unrelated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OppositionClass {
    pub kind: OppositionKind,
    pub note: Option<String>,
}

const SUBCONTRARY_NOTE: &str =
    "subcontrariety cannot arise between rank-1 projective outcomes (two outcomes can never both be true)";

/// Classifies the pair. [`OppositionKind::Subcontrary`] is never returned;
/// non-commuting pairs come back as `Unrelated` with a note saying so.
pub fn classify(a: &OutcomeProposition, b: &OutcomeProposition, g: &PowerGraph) -> Result<OppositionClass> {
    let pa = g.node(a.node_id)?;
    let pb = g.node(b.node_id)?;
    if a.node_id == b.node_id {
        return Ok(OppositionClass { kind: OppositionKind::Subaltern, note: None });
    }
    if !g.adjacent(a.node_id, b.node_id) {
        return Ok(OppositionClass {
            kind: OppositionKind::Unrelated,
            note: Some(format!("outcomes do not commute; {SUBCONTRARY_NOTE}")),
        });
    }
    let d = g.dim();
    let defect = (pa.matrix() + pb.matrix() - CMatrix::identity(d, d)).norm();
    let kind = if defect <= d as f64 * TOL_PROJ {
        OppositionKind::Contradictory
    } else {
        OppositionKind::Contrary
    };
    Ok(OppositionClass { kind, note: None })
}

/// Both outcomes carry potentia while, in any single trial, exactly one of
/// them actualizes.
pub fn is_potential_contradiction(
    a: &OutcomeProposition,
    b: &OutcomeProposition,
    psa: &Psa,
    g: &PowerGraph,
) -> Result<bool> {
    let class = classify(a, b, g)?;
    if class.kind != OppositionKind::Contradictory {
        return Err(Error::NotContradictoryPair(class.kind.as_str().into()));
    }
    Ok(psa.value(a.node_id)? > POTENTIA_EPS && psa.value(b.node_id)? > POTENTIA_EPS)
}
