//! Single-outcome trials drawn from a quantum situation's potentiae.
//!
//! The generator is xoshiro256++ whose 256-bit state is filled from the
//! 64-bit seed by SplitMix64. A uniform double in `[0, 1)` is the top 53 bits
//! of one output scaled by `2^-53`. Outcomes are chosen by inverse CDF over the
//! context's nodes in ascending id order; any rounding slack past the last
//! cumulative bound goes to the last node with nonzero potentia, so a node
//! whose potentia is exactly zero is never drawn.
//!
//! Sampling only reads the situation. Nothing about the situation or its
//! valuation changes across a run, which [`immanence_check`] verifies.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::json::{self, QsJson};
use crate::powergraph::NodeId;
use crate::psa::QuantumSituation;

pub const GENERATOR: &str = "xoshiro256++/splitmix64";

/// Raw outcomes kept in a serialized log.
pub const LOG_HEAD: usize = 100;

pub type SamplerRng = Xoshiro256PlusPlus;

pub fn rng_from_seed(seed: u64) -> SamplerRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws one outcome with probability `|c_i|²`.
pub fn sample_actualization(qs: &QuantumSituation, rng: &mut impl RngCore) -> NodeId {
    let u = uniform(rng);
    let mut cumulative = 0.0;
    let mut last_positive = None;
    for (&id, c) in qs.coefficients() {
        let p = c.norm_sqr();
        if p > 0.0 {
            cumulative += p;
            last_positive = Some(id);
            if u < cumulative {
                return id;
            }
        }
    }
    last_positive.expect("unit-norm coefficients have a nonzero entry")
}

/// Content digest of a situation's canonical JSON.
pub fn qs_digest(qs: &QuantumSituation) -> String {
    let text = json::to_string(&QsJson::from_qs(qs)).expect("finite coefficients");
    hex::encode(&Sha256::digest(text.as_bytes())[..16])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialLog {
    pub qs_digest: String,
    pub seed: u64,
    pub outcomes: Vec<NodeId>,
    pub counts: BTreeMap<NodeId, u64>,
}

impl TrialLog {
    pub fn trials(&self) -> usize {
        self.outcomes.len()
    }

    /// Counts match the outcomes, cover every context node and add up.
    pub fn is_consistent(&self, qs: &QuantumSituation) -> bool {
        let mut recount: BTreeMap<NodeId, u64> = qs.context().node_ids.iter().map(|&id| (id, 0)).collect();
        for id in &self.outcomes {
            match recount.get_mut(id) {
                Some(n) => *n += 1,
                None => return false,
            }
        }
        recount == self.counts
    }
}

/// `n` independent trials from a fresh generator seeded with `seed`.
pub fn run_trials(qs: &QuantumSituation, n: usize, seed: u64) -> TrialLog {
    let mut rng = rng_from_seed(seed);
    let mut counts: BTreeMap<NodeId, u64> = qs.context().node_ids.iter().map(|&id| (id, 0)).collect();
    let outcomes: Vec<NodeId> = (0..n)
        .map(|_| {
            let id = sample_actualization(qs, &mut rng);
            *counts.get_mut(&id).expect("outcome in context") += 1;
            id
        })
        .collect();
    TrialLog { qs_digest: qs_digest(qs), seed, outcomes, counts }
}

/// True iff `log` is a consistent record of trials on `qs` and `qs` is
/// unchanged since the log was produced.
pub fn immanence_check(qs: &QuantumSituation, log: &TrialLog) -> bool {
    log.is_consistent(qs) && log.qs_digest == qs_digest(qs)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialLogJson {
    pub generator: String,
    pub seed: u64,
    pub trials: usize,
    pub qs_digest: String,
    pub counts: BTreeMap<NodeId, u64>,
    pub outcomes_head: Vec<NodeId>,
}

impl TrialLogJson {
    pub fn from_log(log: &TrialLog) -> Self {
        Self {
            generator: GENERATOR.into(),
            seed: log.seed,
            trials: log.trials(),
            qs_digest: log.qs_digest.clone(),
            counts: log.counts.clone(),
            outcomes_head: log.outcomes.iter().take(LOG_HEAD).copied().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fourier_basis, spin};
    use crate::hilbert::StateVector;
    use crate::powergraph::{context_from_basis, PowerGraph, DEFAULT_TOL};
    use crate::psa::superposition_from_vector;

    fn situation(basis: &[StateVector], v: &StateVector) -> QuantumSituation {
        let g = PowerGraph::empty(v.dim(), DEFAULT_TOL);
        let (g, ctx) = context_from_basis(&g, basis).unwrap();
        superposition_from_vector(v, &ctx, &g).unwrap()
    }

    #[test]
    fn certainty_always_hits_first_node() {
        let qs = situation(&spin::x_basis(), &spin::up_x());
        let log = run_trials(&qs, 10_000, 1);
        assert_eq!(log.counts[&0], 10_000);
        assert_eq!(log.counts[&1], 0);
    }

    #[test]
    fn balanced_coin_within_three_sigma() {
        let qs = situation(&spin::y_basis(), &spin::up_x());
        let n = 100_000;
        let log = run_trials(&qs, n, 2024);
        let band = 3.0 * (0.25 * n as f64).sqrt();
        for count in log.counts.values() {
            assert!((*count as f64 - n as f64 / 2.0).abs() <= band);
        }
    }

    #[test]
    fn uniform_d4_passes_chi_square() {
        let qs = situation(&fourier_basis(4), &StateVector::basis(4, 0));
        let n = 100_000;
        let log = run_trials(&qs, n, 77);
        let expected = n as f64 / 4.0;
        let chi2: f64 = log.counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 99.9% quantile of chi-square with 3 degrees of freedom
        assert!(chi2 < 16.266, "chi2 = {chi2}");
    }

    #[test]
    fn logs_are_deterministic() {
        let qs = situation(&spin::y_basis(), &spin::up_x());
        assert_eq!(run_trials(&qs, 500, 9), run_trials(&qs, 500, 9));
        assert_ne!(run_trials(&qs, 500, 9).outcomes, run_trials(&qs, 500, 10).outcomes);
        let one = run_trials(&qs, 1, 3);
        assert_eq!(one.trials(), 1);
        assert_eq!(one.counts.values().sum::<u64>(), 1);
    }

    #[test]
    fn immanence_holds_and_detects_tampering() {
        let qs = situation(&spin::y_basis(), &spin::up_x());
        let log = run_trials(&qs, 1000, 5);
        assert!(immanence_check(&qs, &log));
        let other = situation(&spin::y_basis(), &spin::up_z());
        assert!(!immanence_check(&other, &log));
        let mut forged = log.clone();
        forged.counts.insert(0, forged.counts[&0] + 1);
        assert!(!immanence_check(&qs, &forged));
    }
}
