//! End-to-end run of the Stern–Gerlach example with a pass/fail table.
//!
//! Prepare a state in the x basis, valuate it on the x, y and z contexts,
//! rewrite it in the y basis, sample the y measurement, and classify the
//! (↑y, ↓y) pair. Every row compares an observed value against the expected
//! one for `|↑x⟩`; feeding any other prepared state makes rows fail.

use serde::Serialize;

use crate::error::Result;
use crate::fixtures::stern_gerlach;
use crate::hilbert::{c, DensityMatrix, StateVector, C64};
use crate::opposition::{classify, is_potential_contradiction, OppositionKind, OutcomeProposition};
use crate::powergraph::Context;
use crate::psa::{evaluate_psa, psa_from_superposition, superposition_from_vector};
use crate::sampler::run_trials;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 100_000;
const TOL: f64 = 1e-9;

// node ids in the Stern–Gerlach fixture
const UP_X: usize = 0;
const DOWN_X: usize = 1;
const UP_Y: usize = 2;
const DOWN_Y: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub trials: usize,
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&CheckRow> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }

    pub fn to_table(&self) -> String {
        let width = self.rows.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
        let mut out = format!("{:<width$}  {:<22}  {:<22}  result\n", "check", "expected", "observed");
        for r in &self.rows {
            out.push_str(&format!(
                "{:<width$}  {:<22}  {:<22}  {}\n",
                r.check,
                r.expected,
                r.observed,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

fn value_row(check: &str, expected: f64, observed: f64) -> CheckRow {
    CheckRow {
        check: check.into(),
        expected: format!("{expected:.9}"),
        observed: format!("{observed:.9}"),
        pass: (expected - observed).abs() <= TOL,
    }
}

/// Runs the example for the state `a|↑x⟩ + b|↓x⟩`.
pub fn run(prepared: [C64; 2], trials: usize, seed: u64) -> Result<Report> {
    let fixture = stern_gerlach();
    let g = fixture.graph()?;
    let v = StateVector::new(vec![
        (prepared[0] + prepared[1]) * std::f64::consts::FRAC_1_SQRT_2,
        (prepared[0] - prepared[1]) * std::f64::consts::FRAC_1_SQRT_2,
    ])?;
    let mut rows = Vec::new();

    let psa = evaluate_psa(&DensityMatrix::from_pure(&v), &g)?;
    rows.push(value_row("potentia P(up x)", 1.0, psa.value(UP_X)?));
    rows.push(value_row("potentia P(down x)", 0.0, psa.value(DOWN_X)?));
    rows.push(value_row("potentia P(up y)", 0.5, psa.value(UP_Y)?));
    rows.push(value_row("potentia P(down y)", 0.5, psa.value(DOWN_Y)?));
    rows.push(CheckRow {
        check: "context normalization".into(),
        expected: "all contexts sum to 1".into(),
        observed: match psa.check_normalization(&g) {
            Ok(()) => "all contexts sum to 1".into(),
            Err(e) => e.to_string(),
        },
        pass: psa.check_normalization(&g).is_ok(),
    });

    let cx = Context::new(&g, &[UP_X, DOWN_X])?;
    let cy = Context::new(&g, &[UP_Y, DOWN_Y])?;
    let qs_x = superposition_from_vector(&v, &cx, &g)?;
    let qs_y = superposition_from_vector(&v, &cy, &g)?;
    let half = std::f64::consts::FRAC_1_SQRT_2;
    rows.push(value_row("|c(up y)| in y basis", half, qs_y.coefficient(UP_Y)?.norm()));
    rows.push(value_row("|c(down y)| in y basis", half, qs_y.coefficient(DOWN_Y)?.norm()));

    let from_x = psa_from_superposition(&qs_x, &g)?;
    let from_y = psa_from_superposition(&qs_y, &g)?;
    let spread = (0..g.len())
        .map(|id| Ok((from_x.value(id)? - from_y.value(id)?).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    rows.push(value_row("PSA(x expansion) - PSA(y expansion)", 0.0, spread));

    let log_y = run_trials(&qs_y, trials, seed);
    let n = trials as f64;
    let band = 3.0 * (0.25 * n).sqrt();
    for (name, id) in [("up y", UP_Y), ("down y", DOWN_Y)] {
        let count = log_y.counts[&id] as f64;
        rows.push(CheckRow {
            check: format!("frequency of {name} (3 sigma)"),
            expected: format!("{:.0} +/- {band:.0}", n / 2.0),
            observed: format!("{count:.0}"),
            pass: (count - n / 2.0).abs() <= band,
        });
    }
    let log_x = run_trials(&qs_x, trials, seed);
    rows.push(CheckRow {
        check: "x measurement gives up x every trial".into(),
        expected: format!("{trials}"),
        observed: format!("{}", log_x.counts[&UP_X]),
        pass: log_x.counts[&UP_X] as usize == trials,
    });

    let up = OutcomeProposition::new(UP_Y, cy.clone(), &psa)?;
    let down = OutcomeProposition::new(DOWN_Y, cy, &psa)?;
    let kind = classify(&up, &down, &g)?.kind;
    rows.push(CheckRow {
        check: "classify (up y, down y)".into(),
        expected: OppositionKind::Contradictory.as_str().into(),
        observed: kind.as_str().into(),
        pass: kind == OppositionKind::Contradictory,
    });
    let potential = kind == OppositionKind::Contradictory && is_potential_contradiction(&up, &down, &psa, &g)?;
    rows.push(CheckRow {
        check: "(up y, down y) potential contradiction".into(),
        expected: "true".into(),
        observed: potential.to_string(),
        pass: potential,
    });

    Ok(Report { seed, trials, rows })
}

/// The example as stated: the prepared state is `|↑x⟩`.
pub fn reproduce_stern_gerlach(seed: u64) -> Result<Report> {
    reproduce_with(seed, DEFAULT_TRIALS)
}

pub fn reproduce_with(seed: u64, trials: usize) -> Result<Report> {
    run([c(1.0, 0.0), c(0.0, 0.0)], trials, seed)
}
