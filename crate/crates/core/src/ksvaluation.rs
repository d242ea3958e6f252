//! Search for global binary valuations.
//!
//! A binary valuation gives each node a single value in {0, 1}, the same in
//! every context the node belongs to. It is admissible when every full
//! context (one that resolves the identity) has exactly one node valued 1 and
//! no two adjacent (hence orthogonal) nodes are both 1. Kochen–Specker sets
//! are finite graphs on which no admissible valuation exists.
//!
//! The search is exact-cover style: pick the unsatisfied full context with
//! the fewest open nodes and branch on which of them is 1. Setting a node to
//! 1 sets all its neighbours to 0; a full context left with one open node and
//! no 1 forces that node to 1.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::powergraph::{is_context, maximal_contexts, Context, NodeId, PowerGraph};
use crate::psa::QuantumSituation;

/// Default limit on search-node visits.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryValuation {
    pub values: BTreeMap<NodeId, bool>,
}

impl BinaryValuation {
    pub fn new(values: BTreeMap<NodeId, bool>) -> Self {
        Self { values }
    }

    pub fn get(&self, id: NodeId) -> Option<bool> {
        self.values.get(&id).copied()
    }

    pub fn true_nodes(&self) -> Vec<NodeId> {
        self.values.iter().filter(|(_, &v)| v).map(|(&k, _)| k).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(BinaryValuation),
    /// The whole search space was explored without finding a valuation.
    Impossible,
    /// The visit budget ran out first; nothing is claimed either way.
    Exhausted { budget: u64 },
}

#[derive(Debug, Clone)]
pub struct ValuationVerdict {
    pub outcome: Outcome,
    pub nodes_searched: u64,
    pub elapsed: Duration,
}

impl ValuationVerdict {
    pub fn is_found(&self) -> bool {
        matches!(self.outcome, Outcome::Found(_))
    }

    pub fn is_impossible(&self) -> bool {
        matches!(self.outcome, Outcome::Impossible)
    }
}

/// True iff every supplied context of full size has exactly one node valued 1.
pub fn verify_valuation(g: &PowerGraph, val: &BinaryValuation, contexts: &[Context]) -> Result<bool> {
    if let Some(missing) = (0..g.len()).find(|id| !val.values.contains_key(id)) {
        return Err(Error::MissingNodeValue(missing));
    }
    for ctx in contexts {
        if let Some(&bad) = ctx.node_ids.iter().find(|&&id| id >= g.len()) {
            return Err(Error::UnknownNode(bad));
        }
    }
    Ok(contexts
        .iter()
        .filter(|ctx| ctx.len() == g.dim())
        .all(|ctx| ctx.node_ids.iter().filter(|&&id| val.values[&id]).count() == 1))
}

/// Admissibility: [`verify_valuation`] over the graph's full contexts plus
/// the at-most-one rule on every edge.
pub fn is_admissible(g: &PowerGraph, val: &BinaryValuation) -> Result<bool> {
    if !verify_valuation(g, val, &g.full_contexts())? {
        return Ok(false);
    }
    Ok(g.edges().iter().all(|&(a, b)| !(val.values[&a] && val.values[&b])))
}

struct Search<'g> {
    full: Vec<Vec<NodeId>>,
    membership: Vec<Vec<usize>>,
    neighbors: Vec<Vec<NodeId>>,
    budget: u64,
    visits: u64,
    _graph: &'g PowerGraph,
}

#[derive(Clone)]
struct State(Vec<Option<bool>>);

enum Step {
    Sat(State),
    Unsat,
    OutOfBudget,
}

impl<'g> Search<'g> {
    fn new(g: &'g PowerGraph, budget: u64) -> Self {
        let full: Vec<Vec<NodeId>> = g.full_contexts().into_iter().map(|c| c.node_ids).collect();
        let mut membership = vec![Vec::new(); g.len()];
        for (k, ctx) in full.iter().enumerate() {
            for &id in ctx {
                membership[id].push(k);
            }
        }
        let neighbors = (0..g.len()).map(|i| g.neighbors(i).collect()).collect();
        Self { full, membership, neighbors, budget, visits: 0, _graph: g }
    }

    /// Sets `first` to 1 and propagates. Returns false on conflict.
    fn assign_true(&self, state: &mut State, first: NodeId) -> bool {
        let mut queue = VecDeque::from([first]);
        while let Some(u) = queue.pop_front() {
            match state.0[u] {
                Some(true) => continue,
                Some(false) => return false,
                None => state.0[u] = Some(true),
            }
            let mut touched: BTreeSet<usize> = self.membership[u].iter().copied().collect();
            for &w in &self.neighbors[u] {
                match state.0[w] {
                    Some(true) => return false,
                    Some(false) => {}
                    None => {
                        state.0[w] = Some(false);
                        touched.extend(self.membership[w].iter().copied());
                    }
                }
            }
            for k in touched {
                let ctx = &self.full[k];
                let trues = ctx.iter().filter(|&&i| state.0[i] == Some(true)).count();
                let open: Vec<NodeId> = ctx.iter().copied().filter(|&i| state.0[i].is_none()).collect();
                match (trues, open.len()) {
                    (0, 0) => return false,
                    (0, 1) => queue.push_back(open[0]),
                    (t, _) if t > 1 => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn solve(&mut self, state: State) -> Step {
        // unsatisfied full context with fewest open nodes, lowest index on ties
        let mut best: Option<Vec<NodeId>> = None;
        for ctx in &self.full {
            if ctx.iter().any(|&i| state.0[i] == Some(true)) {
                continue;
            }
            let open: Vec<NodeId> = ctx.iter().copied().filter(|&i| state.0[i].is_none()).collect();
            if open.is_empty() {
                return Step::Unsat;
            }
            if best.as_ref().is_none_or(|b| open.len() < b.len()) {
                best = Some(open);
            }
        }
        let Some(candidates) = best else {
            return Step::Sat(state);
        };
        for u in candidates {
            if self.visits >= self.budget {
                return Step::OutOfBudget;
            }
            self.visits += 1;
            let mut next = state.clone();
            if !self.assign_true(&mut next, u) {
                continue;
            }
            match self.solve(next) {
                Step::Unsat => continue,
                other => return other,
            }
        }
        Step::Unsat
    }
}

pub fn find_binary_valuation(g: &PowerGraph) -> ValuationVerdict {
    find_binary_valuation_with_budget(g, DEFAULT_BUDGET)
}

/// Backtracking search for an admissible valuation. Deterministic: the same
/// graph always yields the same verdict and witness.
pub fn find_binary_valuation_with_budget(g: &PowerGraph, budget: u64) -> ValuationVerdict {
    let start = Instant::now();
    let mut search = Search::new(g, budget);
    let step = search.solve(State(vec![None; g.len()]));
    let outcome = match step {
        Step::Sat(state) => {
            let values = state.0.iter().enumerate().map(|(i, v)| (i, v.unwrap_or(false))).collect();
            Outcome::Found(BinaryValuation { values })
        }
        Step::Unsat => Outcome::Impossible,
        Step::OutOfBudget => Outcome::Exhausted { budget },
    };
    ValuationVerdict { outcome, nodes_searched: search.visits, elapsed: start.elapsed() }
}

/// Nodes of every maximal context connected to `start` through chains of
/// contexts that share a node.
pub fn reachable_nodes(g: &PowerGraph, start: &[NodeId]) -> Vec<NodeId> {
    let contexts = maximal_contexts(g);
    let mut nodes: BTreeSet<NodeId> = start.iter().copied().collect();
    let mut used = vec![false; contexts.len()];
    loop {
        let mut grew = false;
        for (k, ctx) in contexts.iter().enumerate() {
            if !used[k] && ctx.node_ids.iter().any(|id| nodes.contains(id)) {
                used[k] = true;
                nodes.extend(ctx.node_ids.iter().copied());
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    nodes.into_iter().collect()
}

/// Runs the valuation search on the part of `g` reachable from the
/// superposition's context. Witness node ids refer to `g`; nodes outside the
/// reachable part carry no value.
pub fn ks_for_superposition(qs: &QuantumSituation, g: &PowerGraph) -> Result<ValuationVerdict> {
    let ids = &qs.context().node_ids;
    if !is_context(g, ids)? {
        return Err(Error::IncompleteContext);
    }
    let reachable = reachable_nodes(g, ids);
    let (sub, back) = g.induced(&reachable)?;
    let mut verdict = find_binary_valuation(&sub);
    if let Outcome::Found(val) = &verdict.outcome {
        let values = val.values.iter().map(|(&k, &v)| (back[k], v)).collect();
        verdict.outcome = Outcome::Found(BinaryValuation { values });
    }
    Ok(verdict)
}
