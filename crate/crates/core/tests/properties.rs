use logos_qm::fixtures::{mutually_unbiased_bases, spin};
use logos_qm::hilbert::{
    born_value, commutes, conjugate_by, random_density, random_state, random_unitary, DensityMatrix, Projector,
    StateVector, Unitary,
};
use logos_qm::json::{self, density_from_json, density_to_json, QsJson};
use logos_qm::opposition::{classify, OppositionKind, OutcomeProposition};
use logos_qm::powergraph::{context_from_basis, generate_graph, Context, PowerGraph, DEFAULT_TOL};
use logos_qm::psa::{evaluate_psa, psa_from_superposition, superposition_from_vector};
use logos_qm::sampler::{immanence_check, run_trials};
use logos_qm::tomography::{exact_records, reconstruct};
use proptest::prelude::*;

fn graph_of(bases: &[Vec<StateVector>]) -> (PowerGraph, Vec<Context>) {
    let mut g = PowerGraph::empty(bases[0][0].dim(), DEFAULT_TOL);
    let mut ctxs = Vec::new();
    for b in bases {
        let (next, ctx) = context_from_basis(&g, b).unwrap();
        g = next;
        ctxs.push(ctx);
    }
    (g, ctxs)
}

/// d + 1 bases: mutually unbiased where available, random otherwise.
fn complete_bases(dim: usize, seed: u64) -> Vec<Vec<StateVector>> {
    match dim {
        2 | 3 => mutually_unbiased_bases(dim),
        _ => {
            let mut bases = vec![(0..dim).map(|i| StateVector::basis(dim, i)).collect()];
            bases.extend((0..dim as u64).map(|k| random_unitary(dim, seed.wrapping_mul(31).wrapping_add(k)).columns()));
            bases
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn situation_json_round_trip(seed in any::<u64>(), dim in 2usize..=4) {
        let v = random_state(dim, seed);
        let (g, ctxs) = graph_of(&[random_unitary(dim, seed ^ 1).columns()]);
        let qs = superposition_from_vector(&v, &ctxs[0], &g).unwrap();
        let text = json::to_string(&QsJson::from_qs(&qs)).unwrap();
        let back = json::from_str::<QsJson>(&text).unwrap().to_qs().unwrap();
        prop_assert_eq!(json::to_string(&QsJson::from_qs(&back)).unwrap(), text);
        prop_assert_eq!(back.coefficients(), qs.coefficients());
    }

    #[test]
    fn density_json_round_trip(seed in any::<u64>(), dim in 1usize..=4) {
        let rho = random_density(dim, seed);
        let text = json::to_string(&density_to_json(&rho)).unwrap();
        let back = density_from_json(&json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn tomography_inverts_exact_records(seed in any::<u64>(), dim in 2usize..=4) {
        let rho = random_density(dim, seed);
        let (g, ctxs) = graph_of(&complete_bases(dim, seed));
        let records = exact_records(&rho, &ctxs, &g).unwrap();
        let hat = reconstruct(&records, &g).unwrap();
        prop_assert!(hat.frobenius_distance(&rho).unwrap() <= 1e-8);
    }

    #[test]
    fn conjugation_preserves_commutation(seed in any::<u64>(), dim in 2usize..=4) {
        let u = random_unitary(dim, seed);
        let a = Projector::from_vector(&random_state(dim, seed ^ 2)).unwrap();
        let b = Projector::from_vector(&random_state(dim, seed ^ 3)).unwrap();
        let e0 = Projector::from_vector(&StateVector::basis(dim, 0)).unwrap();
        let e1 = Projector::from_vector(&StateVector::basis(dim, 1)).unwrap();
        for (p, q) in [(&a, &b), (&e0, &e1), (&a, &a)] {
            let before = commutes(p, q, DEFAULT_TOL).unwrap();
            let after = commutes(&conjugate_by(&u, p).unwrap(), &conjugate_by(&u, q).unwrap(), DEFAULT_TOL).unwrap();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn born_value_is_basis_independent(seed in any::<u64>(), dim in 1usize..=4) {
        let rho = random_density(dim, seed);
        let p = Projector::from_vector(&random_state(dim, seed ^ 5)).unwrap();
        let u = random_unitary(dim, seed ^ 7);
        let moved = rho.conjugate_by(&u).unwrap();
        let a = born_value(&rho, &p).unwrap();
        let b = born_value(&moved, &conjugate_by(&u, &p).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn global_phase_leaves_valuation_unchanged(seed in any::<u64>(), theta in -10.0f64..10.0, dim in 2usize..=4) {
        let v = random_state(dim, seed);
        let (g, ctxs) = graph_of(&complete_bases(dim, seed)[..2]);
        let qs = superposition_from_vector(&v, &ctxs[1], &g).unwrap();
        let a = psa_from_superposition(&qs, &g).unwrap();
        let b = psa_from_superposition(&qs.with_global_phase(theta), &g).unwrap();
        for (id, x) in a.values() {
            prop_assert!((x - b.values()[id]).abs() <= 1e-12);
        }
    }
}

#[test]
fn generated_graph_grows_with_depth() {
    let seed = (0..3).map(|i| StateVector::basis(3, i)).collect::<Vec<_>>();
    let us = [Unitary::fourier(3), random_unitary(3, 4)];
    let mut previous: Option<PowerGraph> = None;
    for depth in 0..4 {
        let g = generate_graph(&seed, &us, depth).unwrap();
        if let Some(prev) = &previous {
            assert!(prev.nodes().iter().all(|p| g.find(p).is_some()), "depth {depth}");
            assert!(g.len() >= prev.len());
        }
        previous = Some(g);
    }
}

#[test]
fn sampling_never_changes_the_situation() {
    let (g, ctxs) = graph_of(&[spin::x_basis(), spin::y_basis()]);
    let qs = superposition_from_vector(&spin::up_x(), &ctxs[1], &g).unwrap();
    let before = json::to_string(&QsJson::from_qs(&qs)).unwrap();
    let psa_before = psa_from_superposition(&qs, &g).unwrap();
    let log = run_trials(&qs, 1_000_000, 99);
    assert!(immanence_check(&qs, &log));
    assert_eq!(json::to_string(&QsJson::from_qs(&qs)).unwrap(), before);
    assert_eq!(psa_from_superposition(&qs, &g).unwrap().values(), psa_before.values());
}

#[test]
fn contrary_pair_in_d3_is_sometimes_jointly_false() {
    let (g, ctxs) = graph_of(&[(0..3).map(|i| StateVector::basis(3, i)).collect()]);
    let v = StateVector::from_real(&[0.6, 0.48, 0.64]).unwrap();
    let qs = superposition_from_vector(&v, &ctxs[0], &g).unwrap();
    let psa = evaluate_psa(&DensityMatrix::from_pure(&v), &g).unwrap();
    let a = OutcomeProposition::new(0, ctxs[0].clone(), &psa).unwrap();
    let b = OutcomeProposition::new(1, ctxs[0].clone(), &psa).unwrap();
    assert_eq!(classify(&a, &b, &g).unwrap().kind, OppositionKind::Contrary);
    let log = run_trials(&qs, 10_000, 3);
    let both_false = log.outcomes.iter().filter(|&&o| o != 0 && o != 1).count();
    assert!(both_false > 0);
    assert!(log.counts[&0] > 0 && log.counts[&1] > 0);
}
