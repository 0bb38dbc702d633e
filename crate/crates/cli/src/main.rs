//! Command-line front end for the sweep engine: campaign subcommands,
//! threshold extraction, and plot-data regeneration.

mod config;
mod problem;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use catvqa::exp::{self, output, threshold, Problem};
use catvqa::rng::{substream, STREAM_INSTANCE, STREAM_OPTIMIZER_INIT};
use catvqa::transpile::{transpile, TranspileOptions};
use catvqa::vqa::qaoa::{self, Graph};
use catvqa::vqa::{uniform_angles, vqls};

use config::{ProblemSel, Resolved};

#[derive(Parser)]
#[command(
    name = "catvqa",
    version,
    about = "Noisy variational-circuit sweeps, thresholds, and plot data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a MaxCut QAOA campaign
    RunQaoa(RunArgs),
    /// Run the linear-system benchmark campaign
    RunVqls(RunArgs),
    /// Run a campaign with an explicit problem selector
    Sweep(SweepArgs),
    /// Recompute noise-resiliency thresholds from a raw CSV
    Threshold(ThresholdArgs),
    /// Regenerate plot-ready series files from a raw CSV
    PlotData(PlotDataArgs),
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Workload to optimize: qaoa or vqls
    #[arg(long)]
    problem: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Flags shared by every campaign subcommand. Each one can also be set in
/// a TOML config file (same name, underscores); flags win.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Comma-separated noise models: none, cat, agnostic-gate,
    /// agnostic-gate-no-toffoli, agnostic-layer
    #[arg(long, value_delimiter = ',')]
    noise_model: Option<Vec<String>>,
    /// Noise level: a single value or log-spaced lo:hi:count
    #[arg(long)]
    noise_level: Option<String>,
    /// Ansatz layers: a single value or inclusive lo:hi
    #[arg(long)]
    layers: Option<String>,
    /// Problem qubits: a single value or inclusive lo:hi
    #[arg(long)]
    qubits: Option<String>,
    /// Instances averaged per grid point
    #[arg(long)]
    instances: Option<usize>,
    /// Trajectory shots per cost evaluation
    #[arg(long)]
    shots: Option<u64>,
    /// Master seed; all randomness derives from it
    #[arg(long)]
    seed: Option<u64>,
    /// on|off: off decomposes Toffoli gates before noise is applied
    #[arg(long)]
    native_toffoli: Option<String>,
    /// Threshold tolerance in cost units
    #[arg(long)]
    epsilon: Option<f64>,
    /// Output directory for all campaign files
    #[arg(long)]
    out: Option<PathBuf>,
    /// Continue a journalled campaign in the output directory
    #[arg(long)]
    resume: bool,
    /// TOML config file mirroring these flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Edge probability for random MaxCut graphs
    #[arg(long)]
    edge_prob: Option<f64>,
    /// Problem file: a graph edge list (qaoa) or qubits/layers (vqls)
    #[arg(long)]
    problem_file: Option<PathBuf>,
    /// Write the first grid cell's circuit to <out>/circuit.txt and exit
    #[arg(long)]
    dump_circuit: bool,
    /// Write its transpiled form to <out>/transpiled.txt and exit
    #[arg(long)]
    dump_transpiled: bool,
    /// Optimizer restarts per instance
    #[arg(long)]
    restarts: Option<usize>,
    /// Cost-evaluation budget per restart
    #[arg(long)]
    max_evals: Option<usize>,
    /// Convergence tolerance on the simplex cost spread
    #[arg(long)]
    ftol: Option<f64>,
    /// Stop after this many evaluations without improvement (0 disables)
    #[arg(long)]
    stall_evals: Option<usize>,
    /// Initial simplex offset in radians
    #[arg(long)]
    simplex_step: Option<f64>,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Raw records CSV produced by a campaign
    raw: PathBuf,
    /// Threshold tolerance in cost units
    #[arg(long)]
    epsilon: Option<f64>,
    /// Report directory; defaults next to the CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotDataArgs {
    /// Raw records CSV produced by a campaign
    raw: PathBuf,
    /// Series directory; defaults next to the CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::RunQaoa(args) => run_campaign(Some(ProblemSel::Qaoa), None, &args.common),
        Command::RunVqls(args) => run_campaign(Some(ProblemSel::Vqls), None, &args.common),
        Command::Sweep(args) => run_campaign(None, args.problem.as_deref(), &args.common),
        Command::Threshold(args) => run_threshold(&args),
        Command::PlotData(args) => run_plot_data(&args),
    }
}

fn run_campaign(
    fixed: Option<ProblemSel>,
    problem_flag: Option<&str>,
    args: &CommonArgs,
) -> Result<()> {
    let resolved = config::resolve(fixed, problem_flag, args)?;
    if resolved.dump_circuit || resolved.dump_transpiled {
        return dump_circuits(&resolved);
    }
    let outcome = exp::run_sweep(
        &resolved.sweep,
        &resolved.out_dir,
        resolved.resume,
        resolved.epsilon,
    )?;
    for model in &outcome.clamped_models {
        eprintln!("note: {} noise levels were clamped to the model's cap", model);
    }
    println!(
        "{} records ({} computed, {} resumed) -> {}",
        outcome.records.len(),
        outcome.computed,
        outcome.resumed,
        resolved.out_dir.join("raw.csv").display()
    );
    if !outcome.reports.is_empty() {
        println!("thresholds (epsilon = {}):", resolved.epsilon);
        for report in &outcome.reports {
            println!("  {}", report);
        }
        let series = threshold::aggregate(&outcome.records);
        for line in threshold::comparison_lines(&outcome.reports, &series) {
            println!("  {}", line);
        }
    }
    Ok(())
}

/// Builds the instance-0, restart-0 circuit of the first grid cell and
/// writes the requested dumps instead of running the campaign.
fn dump_circuits(resolved: &Resolved) -> Result<()> {
    let sweep = &resolved.sweep;
    let n = sweep.qubit_grid[0];
    let layers = sweep.layer_grid[0];
    let mut angle_rng = substream(sweep.seed, 0, STREAM_OPTIMIZER_INIT, 0);
    let circuit = match &sweep.problem {
        Problem::Qaoa {
            edge_prob,
            fixed_edges,
        } => {
            let graph = match fixed_edges {
                Some(edges) => Graph::new(n, edges.clone())?,
                None => {
                    let mut rng = substream(sweep.seed, 0, STREAM_INSTANCE, n as u64);
                    qaoa::random_graph(n, *edge_prob, &mut rng)?
                }
            };
            let angles = uniform_angles(qaoa::n_params(layers), &mut angle_rng);
            qaoa::qaoa_circuit(&graph, layers, &angles)?
        }
        Problem::Vqls => {
            let angles = uniform_angles(vqls::n_params(n, layers), &mut angle_rng);
            vqls::vqls_circuit(n, layers, &angles)?
        }
    };
    fs::create_dir_all(&resolved.out_dir)
        .with_context(|| format!("creating {}", resolved.out_dir.display()))?;
    if resolved.dump_circuit {
        let path = resolved.out_dir.join("circuit.txt");
        fs::write(&path, circuit.to_string())
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    if resolved.dump_transpiled {
        let opts = TranspileOptions {
            native_toffoli: sweep.models[0].native_toffoli,
        };
        let path = resolved.out_dir.join("transpiled.txt");
        fs::write(&path, transpile(&circuit, &opts).to_string())
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn report_dir(out: &Option<PathBuf>, raw: &Path) -> PathBuf {
    out.clone().unwrap_or_else(|| {
        raw.parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    })
}

fn run_threshold(args: &ThresholdArgs) -> Result<()> {
    let records = output::read_raw_csv(&args.raw)?;
    if records.is_empty() {
        bail!("{} holds no records", args.raw.display());
    }
    let epsilon = args.epsilon.unwrap_or(0.02);
    let series = threshold::aggregate(&records);
    let mut reports = Vec::new();
    for (key, points) in &series {
        if points.len() >= 3 {
            reports.push(threshold::extract_threshold(key, points, epsilon)?);
        }
    }
    if reports.is_empty() {
        bail!("no series has the 3+ noise levels a threshold needs");
    }
    let comparisons = threshold::comparison_lines(&reports, &series);
    for report in &reports {
        println!("{}", report);
    }
    for line in &comparisons {
        println!("{}", line);
    }
    let out_dir = report_dir(&args.out, &args.raw);
    fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let path = out_dir.join("thresholds.txt");
    output::write_threshold_report(&path, &reports, &comparisons)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_plot_data(args: &PlotDataArgs) -> Result<()> {
    let records = output::read_raw_csv(&args.raw)?;
    if records.is_empty() {
        bail!("{} holds no records", args.raw.display());
    }
    let out_dir = report_dir(&args.out, &args.raw);
    fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    for path in exp::write_plot_data(&records, &out_dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
