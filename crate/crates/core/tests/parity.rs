//! Clique enumeration and valuation search checked against exhaustive
//! enumeration on small graphs.

use logos_qm::fixtures::{self, mutually_unbiased_bases, spin};
use logos_qm::hilbert::{random_unitary, Projector, StateVector};
use logos_qm::ksvaluation::{find_binary_valuation, is_admissible, Outcome};
use logos_qm::powergraph::{context_from_basis, maximal_contexts, PowerGraph, DEFAULT_TOL};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

fn neighbor_masks(g: &PowerGraph) -> Vec<u32> {
    (0..g.len())
        .map(|i| (0..g.len()).filter(|&j| j != i && g.adjacent(i, j)).fold(0, |m, j| m | 1 << j))
        .collect()
}

fn is_clique(mask: u32, nbrs: &[u32]) -> bool {
    (0..nbrs.len()).filter(|&i| mask >> i & 1 == 1).all(|i| mask & !(1 << i) & !nbrs[i] == 0)
}

fn brute_force_maximal_cliques(g: &PowerGraph) -> Vec<Vec<usize>> {
    let n = g.len();
    assert!(n <= 12);
    let nbrs = neighbor_masks(g);
    let cliques: Vec<u32> = (1u32..1 << n).filter(|&m| is_clique(m, &nbrs)).collect();
    let mut maximal: Vec<Vec<usize>> = cliques
        .iter()
        .filter(|&&m| (0..n).all(|v| m >> v & 1 == 1 || !is_clique(m | 1 << v, &nbrs)))
        .map(|&m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    maximal.sort();
    maximal
}

/// Number of assignments with exactly one true node per full context and
/// no two adjacent true nodes.
fn brute_force_valuations(g: &PowerGraph) -> u64 {
    let n = g.len();
    assert!(n <= 24);
    let nbrs = neighbor_masks(g);
    let full: Vec<u32> =
        g.full_contexts().iter().map(|c| c.node_ids.iter().fold(0, |m, &i| m | 1 << i)).collect();
    let mut count = 0;
    for mask in 0u32..1 << n {
        if full.iter().any(|&c| (mask & c).count_ones() != 1) {
            continue;
        }
        if (0..n).all(|i| mask >> i & 1 == 0 || mask & nbrs[i] == 0) {
            count += 1;
        }
    }
    count
}

fn small_graphs() -> Vec<PowerGraph> {
    let mut graphs = vec![
        fixtures::stern_gerlach().graph().unwrap(),
        fixtures::two_disjoint_contexts().graph().unwrap(),
    ];
    let mut g3 = PowerGraph::empty(3, DEFAULT_TOL);
    for basis in mutually_unbiased_bases(3) {
        g3 = context_from_basis(&g3, &basis).unwrap().0;
    }
    graphs.push(g3);
    let mut zy = PowerGraph::empty(2, DEFAULT_TOL);
    for basis in [spin::z_basis(), spin::y_basis()] {
        zy = context_from_basis(&zy, &basis).unwrap().0;
    }
    graphs.push(zy);

    // nodes with no edges at all
    let lonely = [spin::up_z(), spin::up_x(), spin::up_y()];
    graphs.push(PowerGraph::build(lonely.iter().map(|v| Projector::from_vector(v).unwrap()), DEFAULT_TOL).unwrap());

    // random bases in d = 3 and 4, sharing the computational basis
    for (dim, seed) in [(3, 1), (3, 2), (4, 3)] {
        let mut g = PowerGraph::empty(dim, DEFAULT_TOL);
        let std: Vec<StateVector> = (0..dim).map(|i| StateVector::basis(dim, i)).collect();
        g = context_from_basis(&g, &std).unwrap().0;
        g = context_from_basis(&g, &random_unitary(dim, seed).columns()).unwrap().0;
        graphs.push(g);
    }

    // random induced subgraphs of the KS sets
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
    for f in [fixtures::cabello18(), fixtures::peres33()] {
        let g = f.graph().unwrap();
        for _ in 0..20 {
            let ids = sample(&mut rng, g.len(), 12).into_vec();
            graphs.push(g.induced(&ids).unwrap().0);
        }
    }
    graphs
}

#[test]
fn maximal_contexts_match_subset_enumeration() {
    for g in small_graphs() {
        let got: Vec<Vec<usize>> = maximal_contexts(&g).into_iter().map(|c| c.node_ids).collect();
        assert_eq!(got, brute_force_maximal_cliques(&g));
    }
}

fn check_valuation_parity(g: &PowerGraph) {
    let verdict = find_binary_valuation(g);
    let solutions = brute_force_valuations(g);
    match verdict.outcome {
        Outcome::Found(val) => {
            assert!(solutions > 0);
            assert!(is_admissible(g, &val).unwrap());
        }
        Outcome::Impossible => assert_eq!(solutions, 0),
        Outcome::Exhausted { .. } => panic!("budget exhausted on a small graph"),
    }
}

#[test]
fn valuation_search_matches_exhaustive_enumeration() {
    for f in fixtures::all().into_iter().filter(|f| f.vectors.len() <= 24) {
        check_valuation_parity(&f.graph().unwrap());
    }
    for g in small_graphs() {
        check_valuation_parity(&g);
    }
}

#[test]
fn valuation_search_matches_on_large_ks_subgraphs() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    let peres = fixtures::peres33().graph().unwrap();
    let cabello = fixtures::cabello18().graph().unwrap();
    for _ in 0..3 {
        let ids = sample(&mut rng, peres.len(), 20).into_vec();
        check_valuation_parity(&peres.induced(&ids).unwrap().0);
        let ids = sample(&mut rng, cabello.len(), 16).into_vec();
        check_valuation_parity(&cabello.induced(&ids).unwrap().0);
    }
}
