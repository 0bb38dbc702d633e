//! Flag and config-file resolution.
//!
//! Every campaign flag can also live in a TOML config file under the same
//! name (dashes become underscores). Explicit flags win over file values,
//! and anything still unset falls back to the defaults listed here.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use catvqa::exp::{grid, ModelSpec, OptimizerConfig, Problem, SweepConfig};
use catvqa::noise::ModelKind;

use crate::problem::{parse_graph_file, parse_vqls_file};
use crate::CommonArgs;

/// Which workload a subcommand targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemSel {
    Qaoa,
    Vqls,
}

impl ProblemSel {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "qaoa" => Ok(ProblemSel::Qaoa),
            "vqls" => Ok(ProblemSel::Vqls),
            other => bail!("unknown problem {:?}: expected qaoa or vqls", other),
        }
    }

    fn name(self) -> &'static str {
        match self {
            ProblemSel::Qaoa => "qaoa",
            ProblemSel::Vqls => "vqls",
        }
    }
}

/// TOML mirror of the campaign flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    problem: Option<String>,
    noise_model: Option<String>,
    noise_level: Option<String>,
    layers: Option<String>,
    qubits: Option<String>,
    instances: Option<usize>,
    shots: Option<u64>,
    seed: Option<u64>,
    native_toffoli: Option<String>,
    epsilon: Option<f64>,
    out: Option<PathBuf>,
    resume: Option<bool>,
    edge_prob: Option<f64>,
    problem_file: Option<PathBuf>,
    dump_circuit: Option<bool>,
    dump_transpiled: Option<bool>,
    restarts: Option<usize>,
    max_evals: Option<usize>,
    ftol: Option<f64>,
    stall_evals: Option<usize>,
    simplex_step: Option<f64>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
    }
}

/// A fully resolved campaign invocation.
#[derive(Debug)]
pub struct Resolved {
    pub sweep: SweepConfig,
    pub out_dir: PathBuf,
    pub resume: bool,
    pub epsilon: f64,
    pub dump_circuit: bool,
    pub dump_transpiled: bool,
}

fn parse_toggle(s: &str) -> Result<bool> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        other => bail!("expected on or off, got {:?}", other),
    }
}

/// Merges flags over the optional config file and fills in defaults.
///
/// `fixed` pins the problem for `run-qaoa`/`run-vqls`; `sweep` passes its
/// `--problem` selection instead.
pub fn resolve(
    fixed: Option<ProblemSel>,
    problem_flag: Option<&str>,
    args: &CommonArgs,
) -> Result<Resolved> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };

    let problem_name: Option<String> = problem_flag
        .map(str::to_string)
        .or_else(|| file.problem.clone());
    let problem_sel = match (fixed, problem_name) {
        (Some(fixed), Some(named)) => {
            let named = ProblemSel::parse(&named)?;
            if named != fixed {
                bail!(
                    "config file selects problem {} but the subcommand runs {}",
                    named.name(),
                    fixed.name()
                );
            }
            fixed
        }
        (Some(fixed), None) => fixed,
        (None, Some(named)) => ProblemSel::parse(&named)?,
        (None, None) => bail!("no problem selected: pass --problem qaoa|vqls"),
    };

    let model_names: Vec<String> = args
        .noise_model
        .clone()
        .or_else(|| {
            file.noise_model
                .as_ref()
                .map(|s| s.split(',').map(|m| m.trim().to_string()).collect())
        })
        .ok_or_else(|| anyhow!("no noise model selected: pass --noise-model"))?;
    let native_toffoli = args
        .native_toffoli
        .as_deref()
        .or(file.native_toffoli.as_deref())
        .map(parse_toggle)
        .transpose()
        .context("--native-toffoli")?;
    let mut models = Vec::new();
    for name in &model_names {
        let kind = ModelKind::parse(name)?;
        let spec = match native_toffoli {
            None => ModelSpec::new(kind),
            Some(native) => ModelSpec {
                kind,
                native_toffoli: native,
            },
        };
        spec.build()
            .with_context(|| format!("noise model {}", name))?;
        models.push(spec);
    }

    let noise_grid = match args.noise_level.as_deref().or(file.noise_level.as_deref()) {
        Some(spec) => grid::parse_noise_levels(spec).context("--noise-level")?,
        None => grid::default_noise_grid(),
    };

    let mut qubit_grid = match args.qubits.as_deref().or(file.qubits.as_deref()) {
        Some(spec) => Some(grid::parse_count_range(spec).context("--qubits")?),
        None => None,
    };
    let mut layer_grid = match args.layers.as_deref().or(file.layers.as_deref()) {
        Some(spec) => Some(grid::parse_count_range(spec).context("--layers")?),
        None => None,
    };

    let edge_prob = args.edge_prob.or(file.edge_prob).unwrap_or(0.6);
    let problem_path = args.problem_file.clone().or(file.problem_file);
    let problem = match problem_sel {
        ProblemSel::Qaoa => {
            let fixed_edges = match &problem_path {
                Some(path) => {
                    let graph = parse_graph_file(path)?;
                    reconcile_axis(&mut qubit_grid, graph.n, "--qubits", path)?;
                    Some(graph.edges)
                }
                None => None,
            };
            Problem::Qaoa {
                edge_prob,
                fixed_edges,
            }
        }
        ProblemSel::Vqls => {
            if let Some(path) = &problem_path {
                let spec = parse_vqls_file(path)?;
                if let Some(qubits) = spec.qubits {
                    reconcile_axis(&mut qubit_grid, qubits, "--qubits", path)?;
                }
                if let Some(layers) = spec.layers {
                    reconcile_axis(&mut layer_grid, layers, "--layers", path)?;
                }
            }
            Problem::Vqls
        }
    };

    let qubit_grid = qubit_grid.unwrap_or_else(|| match problem_sel {
        ProblemSel::Qaoa => vec![5],
        ProblemSel::Vqls => vec![3],
    });
    let layer_grid = layer_grid.unwrap_or_else(|| vec![1]);

    let defaults = OptimizerConfig::default();
    let optimizer = OptimizerConfig {
        restarts: args.restarts.or(file.restarts).unwrap_or(defaults.restarts),
        max_evals: args
            .max_evals
            .or(file.max_evals)
            .unwrap_or(defaults.max_evals),
        ftol: args.ftol.or(file.ftol).unwrap_or(defaults.ftol),
        stall_evals: args
            .stall_evals
            .or(file.stall_evals)
            .unwrap_or(defaults.stall_evals),
        simplex_step: args
            .simplex_step
            .or(file.simplex_step)
            .unwrap_or(defaults.simplex_step),
    };

    let sweep = SweepConfig {
        problem,
        models,
        noise_grid,
        qubit_grid,
        layer_grid,
        instances: args.instances.or(file.instances).unwrap_or(100),
        shots: args.shots.or(file.shots).unwrap_or(10_000),
        seed: args.seed.or(file.seed).unwrap_or(42),
        optimizer,
    };

    Ok(Resolved {
        sweep,
        out_dir: args
            .out
            .clone()
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from("catvqa_out")),
        resume: args.resume || file.resume.unwrap_or(false),
        epsilon: args.epsilon.or(file.epsilon).unwrap_or(0.02),
        dump_circuit: args.dump_circuit || file.dump_circuit.unwrap_or(false),
        dump_transpiled: args.dump_transpiled || file.dump_transpiled.unwrap_or(false),
    })
}

/// Applies a problem-file value to a grid axis, rejecting contradictions.
fn reconcile_axis(
    axis: &mut Option<Vec<usize>>,
    value: usize,
    flag: &str,
    path: &Path,
) -> Result<()> {
    match axis {
        Some(grid) if grid.as_slice() != [value] => bail!(
            "{} conflicts with {} = {} from {}",
            flag,
            flag.trim_start_matches("--"),
            value,
            path.display()
        ),
        _ => {
            *axis = Some(vec![value]);
            Ok(())
        }
    }
}
