//! Sweep campaigns over noise model, noise level, problem size, and
//! circuit depth.
//!
//! A sweep crosses every configured grid axis, optimizes each instance
//! under the designated noise model, and persists one record per
//! (point, instance). Records are journalled as they complete, so an
//! interrupted campaign resumes from the journal, and every record's
//! random stream is derived from (master seed, instance, purpose), so the
//! record set is independent of execution order and worker count.

pub mod grid;
pub mod output;
pub mod threshold;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::noise::{ModelKind, NoiseError, NoiseModel};
use crate::rng::{substream, STREAM_INSTANCE, STREAM_OPTIMIZER_INIT, STREAM_RESERVED_BASE};
use crate::sim::{compile, estimate_mean_value, SimError, StreamIds};
use crate::transpile::{transpile, TranspileOptions};
use crate::vqa::optim::{nelder_mead, NmOptions, NmResult};
use crate::vqa::qaoa::{self, Graph};
use crate::vqa::{uniform_angles, vqls, VqaError};

use grid::{clamp_grid, GridError};
use output::ProgressWriter;
use threshold::{ThresholdError, ThresholdReport};

/// Campaign orchestration failures.
#[derive(Debug, Error)]
pub enum ExpError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Vqa(#[from] VqaError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error("invalid sweep config: {0}")]
    Config(String),
    #[error("{path}: header {found:?} does not match the raw record layout")]
    BadCsvHeader { path: PathBuf, found: String },
    #[error("{path}: line {line}: malformed raw record row")]
    BadCsvRow { path: PathBuf, line: usize },
    #[error(
        "{path} was journalled under a different configuration; \
         use a fresh output directory or the original config"
    )]
    ConfigMismatch { path: PathBuf },
    #[error("{path} already holds sweep progress; pass --resume to continue it")]
    ExistingProgress { path: PathBuf },
}

/// The variational workload a sweep optimizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Problem {
    /// MaxCut QAOA on Erdos-Renyi instances, or on one fixed graph.
    Qaoa {
        edge_prob: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fixed_edges: Option<Vec<(usize, usize)>>,
    },
    /// The linear-system benchmark; the instance index only reseeds the
    /// optimizer, the problem itself is fixed by (n, layers).
    Vqls,
}

/// A noise model selection, serializable for the run config.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub native_toffoli: bool,
}

impl ModelSpec {
    /// Selects `kind` with its default Toffoli handling.
    pub fn new(kind: ModelKind) -> Self {
        ModelSpec {
            kind,
            native_toffoli: !matches!(kind, ModelKind::AgnosticGateNoToffoli),
        }
    }

    pub fn build(&self) -> Result<NoiseModel, NoiseError> {
        NoiseModel::with_native_toffoli(self.kind, self.native_toffoli)
    }
}

/// Optimizer budget and stopping rules, recorded with every run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Independent starts per instance; the best final cost wins.
    pub restarts: usize,
    pub max_evals: usize,
    pub ftol: f64,
    pub stall_evals: usize,
    pub simplex_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let nm = NmOptions::default();
        OptimizerConfig {
            restarts: 2,
            max_evals: nm.max_evals,
            ftol: nm.ftol,
            stall_evals: nm.stall_evals,
            simplex_step: nm.simplex_step,
        }
    }
}

impl OptimizerConfig {
    fn nm_options(&self) -> NmOptions {
        NmOptions {
            max_evals: self.max_evals,
            ftol: self.ftol,
            stall_evals: self.stall_evals,
            simplex_step: self.simplex_step,
        }
    }
}

/// Full description of one sweep campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub problem: Problem,
    pub models: Vec<ModelSpec>,
    /// Ascending noise levels; levels above a model's cap are clamped to
    /// the cap and deduplicated for that model.
    pub noise_grid: Vec<f64>,
    pub qubit_grid: Vec<usize>,
    pub layer_grid: Vec<usize>,
    pub instances: usize,
    pub shots: u64,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ExpError> {
        let bad = |msg: String| Err(ExpError::Config(msg));
        if self.models.is_empty() {
            return bad("no noise models selected".into());
        }
        let mut kinds = HashSet::new();
        for spec in &self.models {
            if !kinds.insert(spec.kind) {
                return bad(format!("noise model {} listed twice", spec.kind));
            }
            spec.build()?;
        }
        if self.noise_grid.is_empty() {
            return bad("noise grid is empty".into());
        }
        for &p in &self.noise_grid {
            if !p.is_finite() || p < 0.0 {
                return bad(format!("noise level {} is not a finite nonnegative number", p));
            }
        }
        if !self.noise_grid.windows(2).all(|w| w[0] < w[1]) {
            return bad("noise grid must be strictly ascending".into());
        }
        if self.qubit_grid.is_empty() {
            return bad("qubit grid is empty".into());
        }
        if self.layer_grid.is_empty() || self.layer_grid.contains(&0) {
            return bad("layer grid must be non-empty with layers >= 1".into());
        }
        if self.instances == 0 {
            return bad("instances must be at least 1".into());
        }
        if self.shots == 0 {
            return bad("shots must be at least 1".into());
        }
        if self.optimizer.restarts == 0 {
            return bad("optimizer restarts must be at least 1".into());
        }
        if self.optimizer.max_evals < 2 {
            return bad("optimizer needs at least 2 evaluations".into());
        }
        if !(self.optimizer.simplex_step > 0.0) {
            return bad("simplex step must be positive".into());
        }
        match &self.problem {
            Problem::Qaoa {
                edge_prob,
                fixed_edges,
            } => {
                if !(*edge_prob > 0.0 && *edge_prob < 1.0) {
                    return bad(format!("edge probability {} outside (0, 1)", edge_prob));
                }
                if let Some(n) = self.qubit_grid.iter().find(|&&n| n < 2) {
                    return bad(format!("QAOA needs at least 2 qubits, got {}", n));
                }
                if let Some(edges) = fixed_edges {
                    if self.qubit_grid.len() != 1 {
                        return bad("a fixed graph pins the qubit count to one value".into());
                    }
                    Graph::new(self.qubit_grid[0], edges.clone())?;
                }
            }
            Problem::Vqls => {
                if self.qubit_grid.contains(&0) {
                    return bad("VQLS needs at least 1 system qubit".into());
                }
            }
        }
        Ok(())
    }
}

/// One per-instance optimization result; rows of the raw CSV.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultRecord {
    pub model: String,
    pub p: f64,
    pub n: usize,
    #[serde(rename = "L")]
    pub layers: usize,
    pub instance: usize,
    pub final_cost: f64,
    /// Total cost evaluations across all restarts.
    pub iterations: u64,
    pub shots: u64,
    pub seed: u64,
    /// Scheduled depth of the transpiled circuit.
    pub depth: usize,
    /// Transpiled gate census; journalled but not part of the CSV.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gates: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Hash, PartialEq, Eq)]
struct RecordKey {
    model: String,
    p_bits: u64,
    n: usize,
    layers: usize,
    instance: usize,
}

impl ResultRecord {
    fn key(&self) -> RecordKey {
        RecordKey {
            model: self.model.clone(),
            p_bits: self.p.to_bits(),
            n: self.n,
            layers: self.layers,
            instance: self.instance,
        }
    }
}

/// Sorts records into the canonical output order.
fn sort_records(records: &mut [ResultRecord]) {
    records.sort_by(|a, b| {
        a.model
            .cmp(&b.model)
            .then(a.n.cmp(&b.n))
            .then(a.layers.cmp(&b.layers))
            .then(a.p.total_cmp(&b.p))
            .then(a.instance.cmp(&b.instance))
    });
}

struct WorkItem {
    model_idx: usize,
    p: f64,
    n: usize,
    layers: usize,
    instance: usize,
}

/// What a finished sweep produced.
#[derive(Debug)]
pub struct SweepOutcome {
    /// All records in canonical order, journalled and fresh alike.
    pub records: Vec<ResultRecord>,
    /// Records computed in this process.
    pub computed: usize,
    /// Records taken from the journal of an earlier run.
    pub resumed: usize,
    /// Models whose noise grids lost points to the model's cap.
    pub clamped_models: Vec<String>,
    /// Thresholds for every series with enough noise levels.
    pub reports: Vec<ThresholdReport>,
}

/// Runs one optimization and distills it into a record.
fn run_item(
    config: &SweepConfig,
    model: &NoiseModel,
    item: &WorkItem,
) -> Result<ResultRecord, ExpError> {
    let WorkItem {
        p, n, layers, instance, ..
    } = *item;
    let opts = TranspileOptions {
        native_toffoli: model.native_toffoli(),
    };

    type Builder = Box<dyn Fn(&[f64]) -> Result<Circuit, VqaError>>;
    let (table, dim, builder): (Vec<f64>, usize, Builder) = match &config.problem {
        Problem::Qaoa {
            edge_prob,
            fixed_edges,
        } => {
            let graph = match fixed_edges {
                Some(edges) => Graph::new(n, edges.clone())?,
                None => {
                    let mut rng = substream(config.seed, instance as u64, STREAM_INSTANCE, n as u64);
                    qaoa::random_graph(n, *edge_prob, &mut rng)?
                }
            };
            let table = qaoa::cost_table(&graph);
            let dim = qaoa::n_params(layers);
            let builder: Builder = Box::new(move |params| qaoa::qaoa_circuit(&graph, layers, params));
            (table, dim, builder)
        }
        Problem::Vqls => {
            let builder: Builder = Box::new(move |params| vqls::vqls_circuit(n, layers, params));
            (vqls::value_table(), vqls::n_params(n, layers), builder)
        }
    };

    // One probe evaluation surfaces any structural error before the
    // optimizer loop, and pins the record's circuit facts.
    let probe = transpile(&builder(&vec![0.0; dim])?, &opts);
    let probe_run = compile(&probe, model, p)?;
    let depth = probe_run.depth();
    let mut gates: BTreeMap<String, u64> = BTreeMap::new();
    for op in probe.ops() {
        *gates.entry(op.kind.name().to_string()).or_insert(0) += 1;
    }

    let mut evals: u64 = 0;
    let mut cost = |params: &[f64]| -> f64 {
        let circuit = builder(params).expect("parameter shape fixed by the probe");
        let run = compile(&transpile(&circuit, &opts), model, p)
            .expect("compilation succeeded for the probe");
        let ids = StreamIds {
            master: config.seed,
            instance: instance as u64,
            stream: evals,
        };
        assert!(evals < STREAM_RESERVED_BASE, "evaluation budget overflow");
        evals += 1;
        estimate_mean_value(&run, &table, ids, config.shots).clamp(0.0, 1.0)
    };

    let nm_opts = config.optimizer.nm_options();
    let mut best: Option<NmResult> = None;
    for restart in 0..config.optimizer.restarts {
        let mut rng = substream(
            config.seed,
            instance as u64,
            STREAM_OPTIMIZER_INIT,
            restart as u64,
        );
        let x0 = uniform_angles(dim, &mut rng);
        let result = nelder_mead(&mut cost, &x0, &nm_opts);
        if best.as_ref().map_or(true, |b| result.best_f < b.best_f) {
            best = Some(result);
        }
    }
    let best = best.expect("at least one restart ran");

    Ok(ResultRecord {
        model: model.name().to_string(),
        p,
        n,
        layers,
        instance,
        final_cost: best.best_f,
        iterations: evals,
        shots: config.shots,
        seed: config.seed,
        depth,
        gates,
    })
}

/// Runs a sweep campaign, journalling into `out_dir`.
///
/// With `resume`, records already in the journal are kept and only the
/// missing (point, instance) items run; the final files come out
/// byte-identical to an uninterrupted run. `epsilon` is the tolerance
/// recorded in the threshold report.
pub fn run_sweep(
    config: &SweepConfig,
    out_dir: &Path,
    resume: bool,
    epsilon: f64,
) -> Result<SweepOutcome, ExpError> {
    config.validate()?;
    fs::create_dir_all(out_dir).map_err(|source| ExpError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let config_path = out_dir.join("run_config.json");
    let progress_path = out_dir.join("progress.jsonl");

    let fingerprint = serde_json::to_value(config)?;
    if progress_path.exists() {
        if !resume {
            return Err(ExpError::ExistingProgress {
                path: progress_path,
            });
        }
        if config_path.exists() {
            let stored_text = fs::read_to_string(&config_path).map_err(|source| ExpError::Io {
                path: config_path.clone(),
                source,
            })?;
            let stored: serde_json::Value = serde_json::from_str(&stored_text)?;
            if stored != fingerprint {
                return Err(ExpError::ConfigMismatch { path: config_path });
            }
        }
    }
    fs::write(&config_path, serde_json::to_string_pretty(config)?).map_err(|source| {
        ExpError::Io {
            path: config_path.clone(),
            source,
        }
    })?;

    let mut models = Vec::new();
    let mut clamped_models = Vec::new();
    for spec in &config.models {
        let model = spec.build()?;
        let (grid, clamped) = clamp_grid(&config.noise_grid, model.p_max());
        if clamped {
            clamped_models.push(model.name().to_string());
        }
        models.push((model, grid));
    }

    let mut plan = Vec::new();
    for (model_idx, (_, grid)) in models.iter().enumerate() {
        for &n in &config.qubit_grid {
            for &layers in &config.layer_grid {
                for &p in grid {
                    for instance in 0..config.instances {
                        plan.push(WorkItem {
                            model_idx,
                            p,
                            n,
                            layers,
                            instance,
                        });
                    }
                }
            }
        }
    }
    let planned_keys: HashSet<RecordKey> = plan
        .iter()
        .map(|item| RecordKey {
            model: models[item.model_idx].0.name().to_string(),
            p_bits: item.p.to_bits(),
            n: item.n,
            layers: item.layers,
            instance: item.instance,
        })
        .collect();

    let mut done: HashMap<RecordKey, ResultRecord> = HashMap::new();
    if resume && progress_path.exists() {
        for record in output::read_progress(&progress_path)? {
            let key = record.key();
            if planned_keys.contains(&key) {
                done.insert(key, record);
            }
        }
        // Rewrite the journal compacted: parseable lines only, each one a
        // planned record, so append stays safe after a torn tail.
        let tmp = out_dir.join("progress.jsonl.tmp");
        {
            let mut writer = ProgressWriter::open(&tmp)?;
            let mut kept: Vec<&ResultRecord> = done.values().collect();
            kept.sort_by_key(|rec| {
                (
                    rec.model.clone(),
                    rec.n,
                    rec.layers,
                    rec.p.to_bits(),
                    rec.instance,
                )
            });
            for record in kept {
                writer.append(record)?;
            }
        }
        fs::rename(&tmp, &progress_path).map_err(|source| ExpError::Io {
            path: tmp.clone(),
            source,
        })?;
    } else {
        fs::write(&progress_path, b"").map_err(|source| ExpError::Io {
            path: progress_path.clone(),
            source,
        })?;
    }

    let pending: Vec<&WorkItem> = plan
        .iter()
        .filter(|item| {
            !done.contains_key(&RecordKey {
                model: models[item.model_idx].0.name().to_string(),
                p_bits: item.p.to_bits(),
                n: item.n,
                layers: item.layers,
                instance: item.instance,
            })
        })
        .collect();

    let journal = Mutex::new(ProgressWriter::open(&progress_path)?);
    let computed: Vec<ResultRecord> = pending
        .par_iter()
        .map(|item| {
            let record = run_item(config, &models[item.model_idx].0, item)?;
            journal
                .lock()
                .expect("journal writer poisoned")
                .append(&record)?;
            Ok(record)
        })
        .collect::<Result<_, ExpError>>()?;

    let n_computed = computed.len();
    let n_resumed = done.len();
    let mut records: Vec<ResultRecord> = done.into_values().chain(computed).collect();
    sort_records(&mut records);

    let series = threshold::aggregate(&records);
    output::write_raw_csv(&out_dir.join("raw.csv"), &records)?;
    output::write_aggregate_csv(&out_dir.join("aggregate.csv"), &series)?;
    output::write_plot_files(out_dir, &series)?;
    let reports = write_reports(&records, epsilon, out_dir)?;

    Ok(SweepOutcome {
        records,
        computed: n_computed,
        resumed: n_resumed,
        clamped_models,
        reports,
    })
}

/// Extracts thresholds from every series with enough noise levels and
/// writes `thresholds.txt`. Returns the reports.
pub fn write_reports(
    records: &[ResultRecord],
    epsilon: f64,
    out_dir: &Path,
) -> Result<Vec<ThresholdReport>, ExpError> {
    let series = threshold::aggregate(records);
    let mut reports = Vec::new();
    for (key, points) in &series {
        if points.len() >= 3 {
            reports.push(threshold::extract_threshold(key, points, epsilon)?);
        }
    }
    let comparisons = threshold::comparison_lines(&reports, &series);
    output::write_threshold_report(&out_dir.join("thresholds.txt"), &reports, &comparisons)?;
    Ok(reports)
}

/// Regenerates the per-series plot files from records.
pub fn write_plot_data(records: &[ResultRecord], out_dir: &Path) -> Result<Vec<PathBuf>, ExpError> {
    let series = threshold::aggregate(records);
    output::write_plot_files(out_dir, &series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> SweepConfig {
        SweepConfig {
            problem: Problem::Qaoa {
                edge_prob: 0.6,
                fixed_edges: None,
            },
            models: vec![ModelSpec::new(ModelKind::Cat)],
            noise_grid: vec![1e-3, 1e-1],
            qubit_grid: vec![3],
            layer_grid: vec![1],
            instances: 2,
            shots: 200,
            seed: 11,
            optimizer: OptimizerConfig {
                restarts: 1,
                max_evals: 12,
                ftol: 1e-3,
                stall_evals: 0,
                simplex_step: 0.6,
            },
        }
    }

    #[test]
    fn config_validation_catches_bad_axes() {
        let mut cfg = tiny_config();
        cfg.models.push(ModelSpec::new(ModelKind::Cat));
        assert!(matches!(cfg.validate(), Err(ExpError::Config(_))));

        let mut cfg = tiny_config();
        cfg.noise_grid = vec![1e-1, 1e-3];
        assert!(cfg.validate().is_err());

        let mut cfg = tiny_config();
        cfg.layer_grid = vec![0];
        assert!(cfg.validate().is_err());

        let mut cfg = tiny_config();
        cfg.problem = Problem::Qaoa {
            edge_prob: 1.0,
            fixed_edges: None,
        };
        assert!(cfg.validate().is_err());

        let mut cfg = tiny_config();
        cfg.problem = Problem::Qaoa {
            edge_prob: 0.6,
            fixed_edges: Some(vec![(0, 1)]),
        };
        cfg.qubit_grid = vec![3, 4];
        assert!(cfg.validate().is_err());

        assert!(tiny_config().validate().is_ok());
    }

    #[test]
    fn sweep_crosses_every_axis_and_is_deterministic() {
        let cfg = tiny_config();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let outcome_a = run_sweep(&cfg, dir_a.path(), false, 0.02).unwrap();
        let outcome_b = run_sweep(&cfg, dir_b.path(), false, 0.02).unwrap();

        assert_eq!(outcome_a.records.len(), 2 * 2);
        assert_eq!(outcome_a.computed, 4);
        assert_eq!(outcome_a.resumed, 0);
        assert!(outcome_a.clamped_models.is_empty());

        let raw_a = fs::read(dir_a.path().join("raw.csv")).unwrap();
        let raw_b = fs::read(dir_b.path().join("raw.csv")).unwrap();
        assert_eq!(raw_a, raw_b);
        assert!(dir_a.path().join("aggregate.csv").exists());
        assert!(dir_a.path().join("plot_cat_n3_L1.dat").exists());
        assert!(dir_a.path().join("thresholds.txt").exists());
        assert!(dir_a.path().join("run_config.json").exists());

        for rec in &outcome_a.records {
            assert!((0.0..=1.0).contains(&rec.final_cost));
            assert!(rec.iterations >= 12);
            assert!(rec.depth > 0);
            assert!(rec.gates["CNOT"] >= 2);
        }
    }

    #[test]
    fn resume_recomputes_only_the_missing_records() {
        let cfg = tiny_config();
        let dir_full = tempfile::tempdir().unwrap();
        run_sweep(&cfg, dir_full.path(), false, 0.02).unwrap();
        let full_raw = fs::read_to_string(dir_full.path().join("raw.csv")).unwrap();

        // Replay a partial journal: keep only the first two records.
        let dir_part = tempfile::tempdir().unwrap();
        let journal = fs::read_to_string(dir_full.path().join("progress.jsonl")).unwrap();
        let partial: Vec<&str> = journal.lines().take(2).collect();
        fs::write(
            dir_part.path().join("progress.jsonl"),
            format!("{}\n", partial.join("\n")),
        )
        .unwrap();
        fs::copy(
            dir_full.path().join("run_config.json"),
            dir_part.path().join("run_config.json"),
        )
        .unwrap();

        let outcome = run_sweep(&cfg, dir_part.path(), true, 0.02).unwrap();
        assert_eq!(outcome.resumed, 2);
        assert_eq!(outcome.computed, 2);
        let resumed_raw = fs::read_to_string(dir_part.path().join("raw.csv")).unwrap();
        assert_eq!(full_raw, resumed_raw);
    }

    #[test]
    fn journalled_progress_without_resume_is_refused() {
        let cfg = tiny_config();
        let dir = tempfile::tempdir().unwrap();
        run_sweep(&cfg, dir.path(), false, 0.02).unwrap();
        assert!(matches!(
            run_sweep(&cfg, dir.path(), false, 0.02),
            Err(ExpError::ExistingProgress { .. })
        ));
    }

    #[test]
    fn resume_under_a_different_config_is_refused() {
        let cfg = tiny_config();
        let dir = tempfile::tempdir().unwrap();
        run_sweep(&cfg, dir.path(), false, 0.02).unwrap();
        let mut other = cfg.clone();
        other.shots = 500;
        assert!(matches!(
            run_sweep(&other, dir.path(), true, 0.02),
            Err(ExpError::ConfigMismatch { .. })
        ));
    }

    #[test]
    fn noise_grids_clamp_to_the_model_cap() {
        let mut cfg = tiny_config();
        cfg.noise_grid = vec![1e-3, 0.15, 0.4];
        cfg.instances = 1;
        let dir = tempfile::tempdir().unwrap();
        let outcome = run_sweep(&cfg, dir.path(), false, 0.02).unwrap();
        assert_eq!(outcome.clamped_models, vec!["cat".to_string()]);
        let ps: Vec<f64> = outcome.records.iter().map(|r| r.p).collect();
        assert_eq!(ps, vec![1e-3, 0.15, 1.0 / 6.0]);
    }

    #[test]
    fn vqls_sweep_records_the_swap_test_depth() {
        let cfg = SweepConfig {
            problem: Problem::Vqls,
            models: vec![ModelSpec::new(ModelKind::AgnosticGate)],
            noise_grid: vec![1e-4],
            qubit_grid: vec![2],
            layer_grid: vec![1],
            instances: 1,
            shots: 300,
            seed: 5,
            optimizer: OptimizerConfig {
                restarts: 1,
                max_evals: 15,
                ftol: 1e-3,
                stall_evals: 0,
                simplex_step: 0.6,
            },
        };
        let dir = tempfile::tempdir().unwrap();
        let outcome = run_sweep(&cfg, dir.path(), false, 0.02).unwrap();
        assert_eq!(outcome.records.len(), 1);
        let rec = &outcome.records[0];
        assert_eq!(rec.model, "agnostic-gate");
        assert_eq!(rec.gates["Toffoli"], 2);
        assert!(rec.depth >= 6);
    }
}
