use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use logos_qm::dot::to_dot;
use logos_qm::error::Error;
use logos_qm::fixtures;
use logos_qm::hilbert::Unitary;
use logos_qm::json::{
    self, density_from_json, density_to_json, GraphJson, MatrixJson, PsaJson, QsJson, RecordJson, VectorJson,
    VectorsJson, VerdictJson, F17,
};
use logos_qm::ksvaluation::{find_binary_valuation_with_budget, Outcome};
use logos_qm::opposition::{classify, OutcomeProposition, POTENTIA_EPS};
use logos_qm::powergraph::{generate_graph, maximal_contexts, Context, NodeId, PowerGraph, DEFAULT_TOL};
use logos_qm::psa::{evaluate_psa, superposition_from_density, superposition_from_vector, Psa};
use logos_qm::report;
use logos_qm::sampler::{run_trials, TrialLogJson, GENERATOR};
use logos_qm::tomography::{exact_records, reconstruct, sampled_records};
use serde::Serialize;

use crate::{Command, Format, Output};

pub const SEED_ENV: &str = "LOGOS_SEED";

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

type CmdResult<T = u8> = Result<T, Failure>;

fn read(path: &Path) -> CmdResult<String> {
    fs::read_to_string(path).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> CmdResult<T> {
    let text = read(path)?;
    json::from_str(&text).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}

fn load_graph(path: &Path) -> CmdResult<PowerGraph> {
    Ok(load::<GraphJson>(path)?.to_graph()?)
}

/// A valuation file may name its graph by content id or by path.
fn load_psa(path: &Path, g: &PowerGraph, graph_path: &Path) -> CmdResult<Psa> {
    let file: PsaJson = load(path)?;
    let id = g.id();
    let named = Path::new(&file.graph);
    let same_file = named == graph_path || (named.file_name().is_some() && named.file_name() == graph_path.file_name());
    if file.graph != id && !same_file {
        return Err(Error::GraphMismatch { expected: id, found: file.graph }.into());
    }
    Ok(file.to_psa(g)?)
}

fn emit(output: &Output, text: &str) -> CmdResult<()> {
    match &output.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> CmdResult<()> {
    fs::write(path, text).map_err(|e| Failure { code: 3, message: format!("{}: {e}", path.display()) })
}

fn emit_json<T: Serialize>(output: &Output, value: &T) -> CmdResult<()> {
    emit(output, &json::to_string(value)?)
}

fn seed_or_env(seed: Option<u64>) -> CmdResult<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure { code: 1, message: format!("{SEED_ENV}={v} is not a u64") }),
        Err(_) => Ok(report::DEFAULT_SEED),
    }
}

fn unitary(name: &str, dim: usize) -> CmdResult<Unitary> {
    match name {
        "hadamard" => Ok(Unitary::hadamard()),
        "pauli-x" => Ok(Unitary::pauli_x()),
        "phase-s" => Ok(Unitary::phase_s()),
        "fourier" => Ok(Unitary::fourier(dim)),
        other => Err(Failure { code: 1, message: format!("unknown unitary {other:?}") }),
    }
}

#[derive(Serialize)]
struct ContextJson {
    node_ids: Vec<NodeId>,
    is_maximal: bool,
    full: bool,
}

#[derive(Serialize)]
struct ContextsJson {
    graph: String,
    contexts: Vec<ContextJson>,
}

#[derive(Serialize)]
struct ClassifyJson {
    pair: [NodeId; 2],
    classification: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    potentiae: BTreeMap<NodeId, F17>,
    potential_contradiction: bool,
}

#[derive(Serialize)]
struct SampleJson {
    generator: &'static str,
    seed: u64,
    trials: usize,
    qs_digest: String,
    counts: BTreeMap<NodeId, u64>,
    frequencies: BTreeMap<NodeId, F17>,
    potentiae: BTreeMap<NodeId, F17>,
}

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::BuildGraph { vectors, fixture, tol, unitaries, depth, output } => {
            let file = match (vectors, fixture) {
                (_, Some(name)) => {
                    let f = fixtures::by_name(&name)
                        .ok_or_else(|| Failure { code: 1, message: format!("unknown fixture {name:?}") })?;
                    GraphJson::from_fixture(&f)?
                }
                (Some(path), None) => {
                    let vs = load::<VectorsJson>(&path)?.to_vectors()?;
                    let tol = tol.unwrap_or(DEFAULT_TOL);
                    let g = match depth {
                        Some(depth) => {
                            let us = unitaries.iter().map(|u| unitary(u, vs[0].dim())).collect::<CmdResult<Vec<_>>>()?;
                            if us.is_empty() {
                                return Err(Failure { code: 1, message: "--depth needs at least one --unitary".into() });
                            }
                            let g = generate_graph(&vs, &us, depth)?;
                            PowerGraph::build(g.nodes().to_vec(), tol)?
                        }
                        None => {
                            let ps = vs
                                .iter()
                                .map(logos_qm::hilbert::Projector::from_vector)
                                .collect::<Result<Vec<_>, _>>()?;
                            PowerGraph::build(ps, tol)?
                        }
                    };
                    GraphJson::from_graph(&g)
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            emit_json(&output, &file)?;
            Ok(0)
        }
        Command::Contexts { graph, format, output } => {
            let g = load_graph(&graph)?;
            let ctxs = maximal_contexts(&g);
            let rows: Vec<ContextJson> = ctxs
                .iter()
                .map(|c| ContextJson {
                    node_ids: c.node_ids.clone(),
                    is_maximal: c.is_maximal,
                    full: g.is_resolution_of_identity(&c.node_ids),
                })
                .collect();
            match format {
                Format::Json => emit_json(&output, &ContextsJson { graph: g.id(), contexts: rows })?,
                Format::Table => {
                    let mut text = String::from("context  full  nodes\n");
                    for (k, r) in rows.iter().enumerate() {
                        let nodes: Vec<String> = r.node_ids.iter().map(|id| format!("P{id}")).collect();
                        text.push_str(&format!("C{k:<7}  {:<4}  {}\n", if r.full { "yes" } else { "no" }, nodes.join(" ")));
                    }
                    emit(&output, &text)?;
                }
            }
            Ok(0)
        }
        Command::Valuate { rho, graph, output } => {
            let g = load_graph(&graph)?;
            let rho = density_from_json(&load::<MatrixJson>(&rho)?)?;
            emit_json(&output, &PsaJson::from_psa(&evaluate_psa(&rho, &g)?))?;
            Ok(0)
        }
        Command::Superpose { graph, context, rho, vector, output } => {
            let g = load_graph(&graph)?;
            let ctx = Context::new(&g, &context)?;
            let qs = match (rho, vector) {
                (Some(rho), _) => superposition_from_density(&density_from_json(&load::<MatrixJson>(&rho)?)?, &ctx, &g)?,
                (None, Some(v)) => superposition_from_vector(&load::<VectorJson>(&v)?.to_vector()?, &ctx, &g)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            emit_json(&output, &QsJson::from_qs(&qs))?;
            Ok(0)
        }
        Command::Measure { rho, graph, shots, seed, output } => {
            let g = load_graph(&graph)?;
            let rho = density_from_json(&load::<MatrixJson>(&rho)?)?;
            let ctxs = g.full_contexts();
            let records = match shots {
                Some(n) => sampled_records(&rho, &ctxs, &g, n, seed_or_env(seed)?)?,
                None => exact_records(&rho, &ctxs, &g)?,
            };
            emit_json(&output, &records.iter().map(RecordJson::from_record).collect::<Vec<_>>())?;
            Ok(0)
        }
        Command::Tomography { records, graph, output } => {
            let g = load_graph(&graph)?;
            let records = load::<Vec<RecordJson>>(&records)?
                .iter()
                .map(RecordJson::to_record)
                .collect::<Result<Vec<_>, _>>()?;
            emit_json(&output, &density_to_json(&reconstruct(&records, &g)?))?;
            Ok(0)
        }
        Command::KsCheck { graph, budget, output } => {
            let g = load_graph(&graph)?;
            let verdict = find_binary_valuation_with_budget(&g, budget);
            emit_json(&output, &VerdictJson::from_verdict(&verdict))?;
            Ok(match verdict.outcome {
                Outcome::Found(_) => 0,
                Outcome::Impossible => 10,
                Outcome::Exhausted { .. } => 11,
            })
        }
        Command::Classify { graph: graph_path, psa, pair, output } => {
            let g = load_graph(&graph_path)?;
            let psa = load_psa(&psa, &g, &graph_path)?;
            let (i, j) = (pair[0], pair[1]);
            g.node(i)?;
            g.node(j)?;
            let shared = maximal_contexts(&g).into_iter().find(|c| c.contains(i) && c.contains(j));
            let (a, b) = match shared {
                Some(ctx) => (OutcomeProposition::new(i, ctx.clone(), &psa)?, OutcomeProposition::new(j, ctx, &psa)?),
                None => (OutcomeProposition::in_graph(i, &g, &psa)?, OutcomeProposition::in_graph(j, &g, &psa)?),
            };
            let class = classify(&a, &b, &g)?;
            let potential = class.kind == logos_qm::opposition::OppositionKind::Contradictory
                && a.potentia > POTENTIA_EPS
                && b.potentia > POTENTIA_EPS;
            emit_json(
                &output,
                &ClassifyJson {
                    pair: [i, j],
                    classification: class.kind.as_str(),
                    note: class.note,
                    potentiae: [(i, F17(a.potentia)), (j, F17(b.potentia))].into_iter().collect(),
                    potential_contradiction: potential,
                },
            )?;
            Ok(0)
        }
        Command::Sample { qs, n, seed, log, output } => {
            let qs = load::<QsJson>(&qs)?.to_qs()?;
            let seed = seed_or_env(seed)?;
            let trial_log = run_trials(&qs, n, seed);
            if let Some(path) = log {
                write_file(&path, &json::to_string(&TrialLogJson::from_log(&trial_log))?)?;
            }
            let frequencies = trial_log
                .counts
                .iter()
                .map(|(&id, &c)| (id, F17(if n == 0 { 0.0 } else { c as f64 / n as f64 })))
                .collect();
            emit_json(
                &output,
                &SampleJson {
                    generator: GENERATOR,
                    seed,
                    trials: n,
                    qs_digest: trial_log.qs_digest.clone(),
                    counts: trial_log.counts.clone(),
                    frequencies,
                    potentiae: qs.potentiae().into_iter().map(|(id, p)| (id, F17(p))).collect(),
                },
            )?;
            Ok(0)
        }
        Command::ExportDot { graph: graph_path, psa, contexts, output } => {
            let g = load_graph(&graph_path)?;
            let psa = psa.map(|p| load_psa(&p, &g, &graph_path)).transpose()?;
            let ctxs = contexts.then(|| maximal_contexts(&g));
            emit(&output, &to_dot(&g, psa.as_ref(), ctxs.as_deref()))?;
            Ok(0)
        }
        Command::Reproduce { seed, trials, format, output } => {
            let r = report::reproduce_with(seed_or_env(seed)?, trials)?;
            match format {
                Format::Json => emit_json(&output, &r)?,
                Format::Table => emit(&output, &r.to_table())?,
            }
            if !r.all_passed() {
                let names: Vec<&str> = r.failures().iter().map(|f| f.check.as_str()).collect();
                eprintln!("failed checks: {}", names.join(", "));
                return Ok(2);
            }
            Ok(0)
        }
    }
}
