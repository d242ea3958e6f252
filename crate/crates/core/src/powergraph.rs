//! The commutation graph of rank-1 projectors.
//!
//! Nodes are projectors deduplicated by canonical key, in first-seen order;
//! node ids are positions in that order and never change once assigned. Two
//! nodes are adjacent iff their commutator vanishes (within the graph's
//! tolerance). Every node is adjacent to itself; that diagonal is implicit.
//!
//! A *context* is a complete subgraph. For rank-1 projectors, distinct
//! commuting nodes are orthogonal, so a context of `dim` nodes is exactly an
//! orthonormal basis and its projectors sum to the identity.

use std::collections::{BTreeSet, HashMap, HashSet};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hilbert::{check_orthonormal, commutes, CMatrix, Projector, StateVector, Unitary, TOL_PROJ};

pub type NodeId = usize;

/// Default commutation tolerance on `‖PQ − QP‖_F`.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PowerGraph {
    dim: usize,
    tol: f64,
    nodes: Vec<Projector>,
    index: HashMap<String, NodeId>,
    adjacency: Vec<Vec<bool>>,
}

impl PowerGraph {
    /// Graph with no nodes; a starting point for [`context_from_basis`].
    pub fn empty(dim: usize, tol: f64) -> Self {
        Self { dim, tol, nodes: Vec::new(), index: HashMap::new(), adjacency: Vec::new() }
    }

    pub fn build(projectors: impl IntoIterator<Item = Projector>, tol: f64) -> Result<Self> {
        let projectors: Vec<Projector> = projectors.into_iter().collect();
        let first = projectors.first().ok_or(Error::EmptyInput)?;
        Self::empty(first.dim(), tol).with_projectors(projectors)
    }

    /// Returns a new graph with `projectors` appended; already-present
    /// projectors are skipped, so existing node ids are preserved.
    pub fn with_projectors(&self, projectors: impl IntoIterator<Item = Projector>) -> Result<Self> {
        let mut g = self.clone();
        for p in projectors {
            if p.dim() != g.dim {
                return Err(Error::DimensionMismatch { expected: g.dim, found: p.dim() });
            }
            if g.index.contains_key(p.canonical_key()) {
                continue;
            }
            let id = g.nodes.len();
            let mut row = Vec::with_capacity(id + 1);
            for (j, q) in g.nodes.iter().enumerate() {
                let adj = commutes(&p, q, g.tol)?;
                g.adjacency[j].push(adj);
                row.push(adj);
            }
            row.push(true);
            g.adjacency.push(row);
            g.index.insert(p.canonical_key().to_owned(), id);
            g.nodes.push(p);
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Projector] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&Projector> {
        self.nodes.get(id).ok_or(Error::UnknownNode(id))
    }

    pub fn find(&self, p: &Projector) -> Option<NodeId> {
        self.index.get(p.canonical_key()).copied()
    }

    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency[a][b]
    }

    /// Adjacent nodes other than `id` itself.
    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[id].iter().enumerate().filter(move |&(j, &a)| a && j != id).map(|(j, _)| j)
    }

    /// Off-diagonal edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.adjacency[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Content hash of the node list and tolerance.
    pub fn id(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}|{:e}|", self.dim, self.tol));
        for p in &self.nodes {
            h.update(p.canonical_key());
            h.update("|");
        }
        hex::encode(&h.finalize()[..8])
    }

    fn check_ids(&self, ids: &[NodeId]) -> Result<()> {
        match ids.iter().find(|&&i| i >= self.len()) {
            Some(&bad) => Err(Error::UnknownNode(bad)),
            None => Ok(()),
        }
    }

    /// True iff `ids` has `dim` members whose projectors sum to `I`.
    pub fn is_resolution_of_identity(&self, ids: &[NodeId]) -> bool {
        let distinct: BTreeSet<NodeId> = ids.iter().copied().collect();
        if distinct.len() != self.dim || distinct.iter().any(|&i| i >= self.len()) {
            return false;
        }
        let mut sum = CMatrix::zeros(self.dim, self.dim);
        for &i in &distinct {
            sum += self.nodes[i].matrix();
        }
        let defect = (sum - CMatrix::identity(self.dim, self.dim)).norm();
        defect <= self.dim as f64 * TOL_PROJ
    }

    /// Maximal contexts that resolve the identity.
    pub fn full_contexts(&self) -> Vec<Context> {
        maximal_contexts(self)
            .into_iter()
            .filter(|c| self.is_resolution_of_identity(&c.node_ids))
            .collect()
    }

    /// Subgraph induced on `ids`. Returns the subgraph and the map from its
    /// node ids back to ids in `self`.
    pub fn induced(&self, ids: &[NodeId]) -> Result<(PowerGraph, Vec<NodeId>)> {
        self.check_ids(ids)?;
        let keep: Vec<NodeId> = ids.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let mut g = Self::empty(self.dim, self.tol);
        for (new, &old) in keep.iter().enumerate() {
            g.index.insert(self.nodes[old].canonical_key().to_owned(), new);
            g.nodes.push(self.nodes[old].clone());
            g.adjacency.push(keep.iter().map(|&o| self.adjacency[old][o]).collect());
        }
        Ok((g, keep))
    }
}

/// A complete subgraph, node ids sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    pub node_ids: Vec<NodeId>,
    pub is_maximal: bool,
}

impl Context {
    /// Validates completeness and records whether the context is maximal.
    pub fn new(g: &PowerGraph, ids: &[NodeId]) -> Result<Self> {
        if !is_context(g, ids)? {
            return Err(Error::Invariant(format!("nodes {ids:?} do not form a complete subgraph")));
        }
        let node_ids: Vec<NodeId> = ids.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let is_maximal = (0..g.len())
            .filter(|n| !node_ids.contains(n))
            .all(|n| !node_ids.iter().all(|&m| g.adjacent(n, m)));
        Ok(Self { node_ids, is_maximal })
    }

    pub fn len(&self) -> usize {
        self.node_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.node_ids.binary_search(&id).is_ok()
    }
}

/// True iff the subgraph induced on `ids` is complete.
pub fn is_context(g: &PowerGraph, ids: &[NodeId]) -> Result<bool> {
    g.check_ids(ids)?;
    Ok(ids.iter().all(|&a| ids.iter().all(|&b| g.adjacent(a, b))))
}

/// Fixed-width bitset over node ids.
#[derive(Clone, PartialEq, Eq)]
struct NodeSet(Vec<u64>);

impl NodeSet {
    fn empty(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn and(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn and_not(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| k * 64 + b)
        })
    }
}

/// Nodes in degeneracy order: repeatedly remove a node of minimum remaining
/// degree, ties broken by lowest id.
fn degeneracy_order(neighbors: &[NodeSet]) -> Vec<usize> {
    let n = neighbors.len();
    let mut degree: Vec<u32> = neighbors.iter().map(NodeSet::count).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (degree[v], v)).unwrap();
        removed[v] = true;
        order.push(v);
        for u in neighbors[v].iter() {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    order
}

fn bron_kerbosch_pivot(
    neighbors: &[NodeSet],
    r: &mut Vec<usize>,
    mut p: NodeSet,
    mut x: NodeSet,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    // pivot maximizing |P ∩ N(u)|, lowest id on ties
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| (p.and(&neighbors[u]).count(), std::cmp::Reverse(u)))
        .unwrap();
    let candidates: Vec<usize> = p.and_not(&neighbors[pivot]).iter().collect();
    for v in candidates {
        r.push(v);
        bron_kerbosch_pivot(neighbors, r, p.and(&neighbors[v]), x.and(&neighbors[v]), out);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// All maximal contexts (maximal cliques), each sorted, listed in
/// lexicographic order of their node ids.
///
/// Bron–Kerbosch with Tomita pivoting on the outer loop in degeneracy order.
pub fn maximal_contexts(g: &PowerGraph) -> Vec<Context> {
    let n = g.len();
    let neighbors: Vec<NodeSet> = (0..n)
        .map(|i| {
            let mut s = NodeSet::empty(n);
            for j in g.neighbors(i) {
                s.insert(j);
            }
            s
        })
        .collect();
    let order = degeneracy_order(&neighbors);
    let mut position = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    let mut cliques = Vec::new();
    for &v in &order {
        let mut p = NodeSet::empty(n);
        let mut x = NodeSet::empty(n);
        for u in neighbors[v].iter() {
            if position[u] > position[v] {
                p.insert(u);
            } else {
                x.insert(u);
            }
        }
        bron_kerbosch_pivot(&neighbors, &mut vec![v], p, x, &mut cliques);
    }
    let mut contexts: Vec<Context> = cliques
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            Context { node_ids: c, is_maximal: true }
        })
        .collect();
    contexts.sort();
    contexts
}

/// Inserts the projectors of an orthonormal `basis` (skipping those already
/// present) and returns the updated graph with the matching context.
pub fn context_from_basis(g: &PowerGraph, basis: &[StateVector]) -> Result<(PowerGraph, Context)> {
    check_orthonormal(basis)?;
    if basis[0].dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: basis[0].dim() });
    }
    let projectors = basis.iter().map(Projector::from_vector).collect::<Result<Vec<_>>>()?;
    let updated = g.with_projectors(projectors.iter().cloned())?;
    let ids: Vec<NodeId> = projectors.iter().map(|p| updated.find(p).expect("just inserted")).collect();
    let ctx = Context::new(&updated, &ids)?;
    Ok((updated, ctx))
}

/// Closure of `seed_basis` under up to `depth` rounds of applying each of
/// `unitaries` to every basis found in the previous round.
pub fn generate_graph(seed_basis: &[StateVector], unitaries: &[Unitary], depth: usize) -> Result<PowerGraph> {
    check_orthonormal(seed_basis)?;
    let dim = seed_basis[0].dim();
    if seed_basis.len() != dim {
        return Err(Error::IncompleteContext);
    }
    if unitaries.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(u) = unitaries.iter().find(|u| u.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: u.dim() });
    }

    let context_key = |basis: &[StateVector]| -> Result<Vec<String>> {
        let mut keys = basis
            .iter()
            .map(|v| Projector::from_vector(v).map(|p| p.canonical_key().to_owned()))
            .collect::<Result<Vec<_>>>()?;
        keys.sort();
        Ok(keys)
    };

    let mut seen: HashSet<Vec<String>> = HashSet::new();
    seen.insert(context_key(seed_basis)?);
    let mut projectors: Vec<Projector> =
        seed_basis.iter().map(Projector::from_vector).collect::<Result<_>>()?;
    let mut frontier: Vec<Vec<StateVector>> = vec![seed_basis.to_vec()];

    for _ in 0..depth {
        let mut next = Vec::new();
        for basis in &frontier {
            for u in unitaries {
                let rotated = basis.iter().map(|v| u.apply(v)).collect::<Result<Vec<_>>>()?;
                if seen.insert(context_key(&rotated)?) {
                    for v in &rotated {
                        projectors.push(Projector::from_vector(v)?);
                    }
                    next.push(rotated);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    PowerGraph::build(projectors, DEFAULT_TOL)
}
