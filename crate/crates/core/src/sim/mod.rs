//! Circuit execution: noiseless statevectors, compiled noisy runs, and
//! trajectory sampling.
//!
//! [`compile`] lowers a circuit plus a noise model at a concrete noise
//! level into a [`CompiledRun`]: an execution-ordered list of unitary
//! actions and noise sites with all channel weights evaluated. Sampling a
//! shot draws one error configuration across the noise sites; shots whose
//! configuration is all-identity reuse a precomputed noiseless outcome
//! distribution, while shots with at least one error replay the circuit
//! with the drawn errors injected.
//!
//! The error-configuration sampler walks the noise sites through their
//! cumulative identity-probability prefix, jumping straight to the next
//! erring site by binary search, so clean and nearly-clean shots cost a
//! handful of uniform draws instead of one per site. The drawn
//! distribution is exactly the product of the per-site categoricals.
//!
//! The exact density-matrix route over the same compiled runs lives in
//! [`density`]; agreement between the two is checked statistically in the
//! integration tests.

pub mod density;
mod kernels;

use crate::circuit::{Circuit, GateKind, MeasureBasis};
use crate::noise::{GateChannel, NoiseError, NoiseModel};
use crate::rng::substream;
use crate::schedule::schedule;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use smallvec::SmallVec;
use thiserror::Error;

/// Hard cap on statevector width (16 bytes per amplitude).
pub const MAX_STATEVEC_QUBITS: usize = 24;

/// Below this identity-prefix mass the sampler stops jumping and falls
/// back to drawing every remaining site individually; conditional jump
/// probabilities would lose precision near the underflow floor.
const PREFIX_FLOOR: f64 = 1e-250;

/// Shots are reduced in fixed chunks of this size so parallel execution
/// reproduces the serial result bit for bit.
const SHOT_CHUNK: u64 = 512;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("register of {n} qubits exceeds the statevector limit of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("register of {n} qubits exceeds the density-matrix limit of {max}")]
    DensityTooLarge { n: usize, max: usize },
    #[error("amplitude vector of length {len} is not 2^{n}")]
    BadAmplitudeCount { len: usize, n: usize },
    #[error(transparent)]
    Noise(#[from] NoiseError),
}

/// A dense complex statevector over `n_qubits` qubits.
#[derive(Clone, Debug)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state.
    pub fn zero(n_qubits: usize) -> Result<Self, SimError> {
        if n_qubits > MAX_STATEVEC_QUBITS {
            return Err(SimError::TooManyQubits {
                n: n_qubits,
                max: MAX_STATEVEC_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps explicit amplitudes (length must be `2^n_qubits`).
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        if n_qubits > MAX_STATEVEC_QUBITS {
            return Err(SimError::TooManyQubits {
                n: n_qubits,
                max: MAX_STATEVEC_QUBITS,
            });
        }
        if amps.len() != 1 << n_qubits {
            return Err(SimError::BadAmplitudeCount {
                len: amps.len(),
                n: n_qubits,
            });
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn apply_gate(&mut self, kind: &GateKind, qubits: &[usize]) {
        kernels::apply_gate(&mut self.amps, kind, qubits);
    }

    /// Applies every non-measurement op of `circuit` in order.
    pub fn apply_circuit_unitaries(&mut self, circuit: &Circuit) {
        for op in circuit.ops() {
            if !op.kind.is_measurement() {
                kernels::apply_gate(&mut self.amps, &op.kind, &op.qubits);
            }
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Z-basis marginal distribution over `qubits` (ascending outcome bit
    /// `j` reads qubit `qubits[j]`).
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << qubits.len()];
        accumulate_marginal(&self.amps, qubits, &mut out);
        out
    }
}

/// Gathers the bits of `index` at `qubits` into a compact outcome.
fn gather_bits(index: usize, qubits: &[usize]) -> usize {
    let mut out = 0usize;
    for (j, &q) in qubits.iter().enumerate() {
        out |= ((index >> q) & 1) << j;
    }
    out
}

fn accumulate_marginal(amps: &[Complex64], qubits: &[usize], out: &mut [f64]) {
    for (i, amp) in amps.iter().enumerate() {
        out[gather_bits(i, qubits)] += amp.norm_sqr();
    }
}

/// A concrete error term on absolute qubit indices.
#[derive(Clone, Copy, Debug)]
pub(crate) enum ConcreteAtom {
    X(usize),
    Z(usize),
    Cz(usize, usize),
}

pub(crate) type ConcreteError = SmallVec<[ConcreteAtom; 2]>;

pub(crate) fn apply_concrete_error(amps: &mut [Complex64], error: &[ConcreteAtom]) {
    for atom in error {
        match *atom {
            ConcreteAtom::X(q) => kernels::pauli_x(amps, q),
            ConcreteAtom::Z(q) => kernels::pauli_z(amps, q),
            ConcreteAtom::Cz(a, b) => kernels::cz(amps, a, b),
        }
    }
}

/// One categorical noise site with weights evaluated at the run's level.
#[derive(Clone, Debug)]
pub(crate) struct CompiledFactor {
    /// Cumulative branch weights; entry 0 is the identity weight.
    pub cdf: SmallVec<[f64; 6]>,
    /// Branch errors; entry 0 is empty.
    pub errors: SmallVec<[ConcreteError; 6]>,
}

#[derive(Clone, Debug)]
pub(crate) enum Action {
    Gate {
        kind: GateKind,
        qubits: SmallVec<[usize; 3]>,
    },
    Noise(usize),
}

/// A circuit lowered against a noise model at a fixed noise level.
pub struct CompiledRun {
    n_qubits: usize,
    pub(crate) actions: Vec<Action>,
    pub(crate) factors: Vec<CompiledFactor>,
    /// `prefix_clean[i]` = probability that sites `0..i` all draw identity.
    prefix_clean: Vec<f64>,
    measured: Vec<(usize, MeasureBasis)>,
    measured_qubits: Vec<usize>,
    clean_cdf: Vec<f64>,
    depth: usize,
    p: f64,
}

impl CompiledRun {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Scheduled depth of the underlying circuit, in timesteps.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn noise_level(&self) -> f64 {
        self.p
    }

    pub fn n_noise_sites(&self) -> usize {
        self.factors.len()
    }

    pub fn measured(&self) -> &[(usize, MeasureBasis)] {
        &self.measured
    }

    /// Number of distinct outcomes (2^measured qubits).
    pub fn n_outcomes(&self) -> usize {
        1 << self.measured.len()
    }

    /// The noiseless outcome distribution.
    pub fn clean_distribution(&self) -> Vec<f64> {
        let mut probs = Vec::with_capacity(self.clean_cdf.len());
        let mut prev = 0.0;
        for &c in &self.clean_cdf {
            probs.push(c - prev);
            prev = c;
        }
        probs
    }

    /// Draws one shot: an outcome over the measured qubits, bit `j` being
    /// the `j`-th lowest measured qubit.
    pub fn sample_outcome(&self, rng: &mut ChaCha8Rng, scratch: &mut ReplayScratch) -> u64 {
        scratch.dirty.clear();
        let n_sites = self.factors.len();
        let mut k = 0usize;
        while k < n_sites {
            let pref_k = self.prefix_clean[k];
            if pref_k < PREFIX_FLOOR {
                for j in k..n_sites {
                    let u: f64 = rng.gen();
                    let cdf = &self.factors[j].cdf;
                    let b = branch_from_cdf(cdf, u);
                    if b > 0 {
                        scratch.dirty.push((j, b));
                    }
                }
                break;
            }
            let u: f64 = rng.gen();
            let rest_clean = self.prefix_clean[n_sites] / pref_k;
            if u >= 1.0 - rest_clean {
                break;
            }
            let one_minus_u = 1.0 - u;
            let tail = &self.prefix_clean[k + 1..=n_sites];
            let offset = tail.partition_point(|&pf| pf / pref_k >= one_minus_u);
            let m = k + offset;
            let cdf = &self.factors[m].cdf;
            let id_w = cdf[0];
            let v: f64 = rng.gen();
            let t = id_w + v * (1.0 - id_w);
            let b = branch_from_cdf(cdf, t).max(1);
            scratch.dirty.push((m, b));
            k = m + 1;
        }

        if scratch.dirty.is_empty() {
            let u: f64 = rng.gen();
            return draw_from_cdf(&self.clean_cdf, u);
        }
        self.replay(rng, scratch)
    }

    fn replay(&self, rng: &mut ChaCha8Rng, scratch: &mut ReplayScratch) -> u64 {
        let state = &mut scratch.state;
        state.fill(Complex64::new(0.0, 0.0));
        state[0] = Complex64::new(1.0, 0.0);
        let mut next_dirty = 0usize;
        for action in &self.actions {
            match action {
                Action::Gate { kind, qubits } => {
                    kernels::apply_gate(state, kind, qubits);
                }
                Action::Noise(site) => {
                    if next_dirty < scratch.dirty.len() && scratch.dirty[next_dirty].0 == *site {
                        let (_, branch) = scratch.dirty[next_dirty];
                        apply_concrete_error(state, &self.factors[*site].errors[branch]);
                        next_dirty += 1;
                    }
                }
            }
        }
        let probs = &mut scratch.probs;
        probs.fill(0.0);
        accumulate_marginal(state, &self.measured_qubits, probs);
        let mut acc = 0.0;
        for p in probs.iter_mut() {
            acc += *p;
            *p = acc;
        }
        let u: f64 = rng.gen();
        draw_from_cdf(probs, u)
    }
}

fn branch_from_cdf(cdf: &[f64], t: f64) -> usize {
    cdf.partition_point(|&c| c <= t).min(cdf.len() - 1)
}

fn draw_from_cdf(cdf: &[f64], u: f64) -> u64 {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1) as u64
}

/// Per-worker scratch buffers for shot replays.
pub struct ReplayScratch {
    state: Vec<Complex64>,
    probs: Vec<f64>,
    dirty: Vec<(usize, usize)>,
}

impl ReplayScratch {
    pub fn for_run(run: &CompiledRun) -> Self {
        ReplayScratch {
            state: vec![Complex64::new(0.0, 0.0); 1 << run.n_qubits],
            probs: vec![0.0; run.n_outcomes()],
            dirty: Vec::new(),
        }
    }
}

/// Lowers `circuit` against `model` at noise level `p`.
pub fn compile(circuit: &Circuit, model: &NoiseModel, p: f64) -> Result<CompiledRun, SimError> {
    if circuit.n_qubits() > MAX_STATEVEC_QUBITS {
        return Err(SimError::TooManyQubits {
            n: circuit.n_qubits(),
            max: MAX_STATEVEC_QUBITS,
        });
    }
    if !(0.0..=model.p_max()).contains(&p) {
        return Err(SimError::Noise(NoiseError::LevelOutOfRange {
            model: model.name(),
            p,
            max: model.p_max(),
        }));
    }

    let sched = schedule(circuit);
    let mut factors: Vec<CompiledFactor> = Vec::new();
    let mut actions: Vec<Action> = Vec::new();

    let push_channel = |actions: &mut Vec<Action>,
                            factors: &mut Vec<CompiledFactor>,
                            channel: &GateChannel,
                            qubits: &[usize]| {
        for factor in &channel.factors {
            let mut cdf: SmallVec<[f64; 6]> = SmallVec::new();
            let mut errors: SmallVec<[ConcreteError; 6]> = SmallVec::new();
            let mut acc = 0.0;
            for branch in &factor.branches {
                acc += branch.weight.eval(p);
                cdf.push(acc);
                errors.push(
                    branch
                        .error
                        .iter()
                        .map(|atom| match *atom {
                            crate::noise::ErrorAtom::X(s) => ConcreteAtom::X(qubits[s]),
                            crate::noise::ErrorAtom::Z(s) => ConcreteAtom::Z(qubits[s]),
                            crate::noise::ErrorAtom::Cz(a, b) => {
                                ConcreteAtom::Cz(qubits[a], qubits[b])
                            }
                        })
                        .collect(),
                );
            }
            if cdf[0] >= 1.0 {
                continue;
            }
            actions.push(Action::Noise(factors.len()));
            factors.push(CompiledFactor { cdf, errors });
        }
    };

    if model.layer_wise() {
        // Validate the gate set once up front; layer-wise channels are
        // trivial per gate but non-native gates must still be rejected.
        for op in circuit.ops() {
            model.gate_channel(&op.kind)?;
        }
        let spans = circuit.layer_spans();
        let mut slab_before: Vec<usize> = if spans.is_empty() {
            // No declared layers: treat the whole circuit as one layer.
            vec![0, circuit.len()]
        } else {
            let mut v = vec![spans[0].start];
            v.extend(spans.iter().map(|s| s.end));
            v
        };
        slab_before.dedup();
        let slab = model.layer_slab_channel();
        let mut measured_so_far = vec![false; circuit.n_qubits()];
        let mut next_slab = 0usize;
        for i in 0..=circuit.len() {
            while next_slab < slab_before.len() && slab_before[next_slab] == i {
                for q in 0..circuit.n_qubits() {
                    if !measured_so_far[q] {
                        push_channel(&mut actions, &mut factors, &slab, &[q]);
                    }
                }
                next_slab += 1;
            }
            if i == circuit.len() {
                break;
            }
            let op = &circuit.ops()[i];
            if op.kind.is_measurement() {
                measured_so_far[op.qubits[0]] = true;
            } else {
                actions.push(Action::Gate {
                    kind: op.kind,
                    qubits: op.qubits.clone(),
                });
            }
        }
    } else {
        let idle = model.idle_channel();
        for (step, ops_here) in sched.steps.iter().enumerate() {
            for &i in ops_here {
                let op = &circuit.ops()[i];
                let channel = model.gate_channel(&op.kind)?;
                if !op.kind.is_measurement() {
                    actions.push(Action::Gate {
                        kind: op.kind,
                        qubits: op.qubits.clone(),
                    });
                }
                push_channel(&mut actions, &mut factors, &channel, &op.qubits);
            }
            for &q in &sched.idle[step] {
                push_channel(&mut actions, &mut factors, &idle, &[q]);
            }
        }
    }

    let measured = circuit.measured_qubits();
    for &(q, basis) in &measured {
        if basis == MeasureBasis::X {
            actions.push(Action::Gate {
                kind: GateKind::Hadamard,
                qubits: SmallVec::from_slice(&[q]),
            });
        }
    }

    let mut prefix_clean = Vec::with_capacity(factors.len() + 1);
    prefix_clean.push(1.0);
    for f in &factors {
        let last = *prefix_clean.last().expect("prefix has an entry");
        prefix_clean.push(last * f.cdf[0]);
    }

    let mut clean_state = StateVector::zero(circuit.n_qubits())?;
    for action in &actions {
        if let Action::Gate { kind, qubits } = action {
            clean_state.apply_gate(kind, qubits);
        }
    }
    let measured_qubits: Vec<usize> = measured.iter().map(|&(q, _)| q).collect();
    let mut clean_cdf = clean_state.marginal_probabilities(&measured_qubits);
    let mut acc = 0.0;
    for c in clean_cdf.iter_mut() {
        acc += *c;
        *c = acc;
    }

    Ok(CompiledRun {
        n_qubits: circuit.n_qubits(),
        actions,
        factors,
        prefix_clean,
        measured,
        measured_qubits,
        clean_cdf,
        depth: sched.depth(),
        p,
    })
}

/// Identifies the shot substream for one cost evaluation.
#[derive(Clone, Copy, Debug)]
pub struct StreamIds {
    pub master: u64,
    pub instance: u64,
    pub stream: u64,
}

/// Mean of `table[outcome]` over `shots` trajectory samples.
///
/// Shots are split into fixed-size chunks; chunks run in parallel but are
/// reduced in order, so the result is independent of the worker count.
pub fn estimate_mean_value(
    run: &CompiledRun,
    table: &[f64],
    ids: StreamIds,
    shots: u64,
) -> f64 {
    assert_eq!(table.len(), run.n_outcomes(), "value table shape mismatch");
    assert!(shots > 0, "mean over zero shots");
    let chunk_sums: Vec<f64> = chunk_starts(shots)
        .par_iter()
        .map_init(
            || ReplayScratch::for_run(run),
            |scratch, &start| {
                let end = (start + SHOT_CHUNK).min(shots);
                let mut acc = 0.0;
                for shot in start..end {
                    let mut rng = substream(ids.master, ids.instance, ids.stream, shot);
                    let outcome = run.sample_outcome(&mut rng, scratch);
                    acc += table[outcome as usize];
                }
                acc
            },
        )
        .collect();
    chunk_sums.iter().sum::<f64>() / shots as f64
}

/// Histogram of outcomes over `shots` trajectory samples.
pub fn sample_counts(run: &CompiledRun, ids: StreamIds, shots: u64) -> Vec<u64> {
    let chunk_counts: Vec<Vec<u64>> = chunk_starts(shots)
        .par_iter()
        .map_init(
            || ReplayScratch::for_run(run),
            |scratch, &start| {
                let end = (start + SHOT_CHUNK).min(shots);
                let mut counts = vec![0u64; run.n_outcomes()];
                for shot in start..end {
                    let mut rng = substream(ids.master, ids.instance, ids.stream, shot);
                    let outcome = run.sample_outcome(&mut rng, scratch);
                    counts[outcome as usize] += 1;
                }
                counts
            },
        )
        .collect();
    let mut total = vec![0u64; run.n_outcomes()];
    for counts in chunk_counts {
        for (t, c) in total.iter_mut().zip(counts) {
            *t += c;
        }
    }
    total
}

fn chunk_starts(shots: u64) -> Vec<u64> {
    (0..shots).step_by(SHOT_CHUNK as usize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::noise::ModelKind;

    fn bell_circuit() -> Circuit {
        let mut c = Circuit::new(2);
        c.push(GateKind::PrepPlus, &[0]).unwrap();
        c.push(GateKind::Cnot, &[0, 1]).unwrap();
        c.push(GateKind::MeasureZ, &[0]).unwrap();
        c.push(GateKind::MeasureZ, &[1]).unwrap();
        c
    }

    #[test]
    fn noiseless_bell_pair_gives_correlated_outcomes() {
        let run = compile(&bell_circuit(), &NoiseModel::new(ModelKind::None), 0.0).unwrap();
        let counts = sample_counts(
            &run,
            StreamIds {
                master: 11,
                instance: 0,
                stream: 0,
            },
            4096,
        );
        assert_eq!(counts[0b01], 0);
        assert_eq!(counts[0b10], 0);
        assert_eq!(counts[0b00] + counts[0b11], 4096);
        assert!(counts[0b00] > 1500 && counts[0b11] > 1500);
    }

    #[test]
    fn clean_distribution_matches_statevector() {
        let run = compile(&bell_circuit(), &NoiseModel::new(ModelKind::None), 0.0).unwrap();
        let dist = run.clean_distribution();
        assert!((dist[0b00] - 0.5).abs() < 1e-12);
        assert!((dist[0b11] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn measure_x_reads_the_plus_state_as_zero() {
        let mut c = Circuit::new(1);
        c.push(GateKind::PrepPlus, &[0]).unwrap();
        c.push(GateKind::MeasureX, &[0]).unwrap();
        let run = compile(&c, &NoiseModel::new(ModelKind::None), 0.0).unwrap();
        let dist = run.clean_distribution();
        assert!((dist[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prep_phase_flips_show_up_in_x_readout() {
        // One PrepPlus followed by MeasureX under the phase-flip channel at
        // its cap: the qubit flips to |-> half the time.
        let mut c = Circuit::new(1);
        c.push(GateKind::PrepPlus, &[0]).unwrap();
        c.push(GateKind::MeasureX, &[0]).unwrap();
        let model = NoiseModel::new(ModelKind::Cat);
        let run = compile(&c, &model, 1.0 / 6.0).unwrap();
        let ids = StreamIds {
            master: 3,
            instance: 0,
            stream: 0,
        };
        let counts = sample_counts(&run, ids, 60_000);
        let frac_one = counts[1] as f64 / 60_000.0;
        assert!((frac_one - 1.0 / 6.0).abs() < 0.01, "got {frac_one}");
    }

    #[test]
    fn sampling_is_reproducible_and_chunk_order_free() {
        let run = compile(
            &bell_circuit(),
            &NoiseModel::new(ModelKind::AgnosticGate),
            0.05,
        )
        .unwrap();
        let ids = StreamIds {
            master: 42,
            instance: 7,
            stream: 3,
        };
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = pool1.install(|| sample_counts(&run, ids, 10_000));
        let b = pool4.install(|| sample_counts(&run, ids, 10_000));
        assert_eq!(a, b);
        let va = pool4.install(|| estimate_mean_value(&run, &[0.0, 1.0, 1.0, 0.0], ids, 10_000));
        let vb = pool1.install(|| estimate_mean_value(&run, &[0.0, 1.0, 1.0, 0.0], ids, 10_000));
        assert_eq!(va.to_bits(), vb.to_bits());
    }

    #[test]
    fn zero_noise_level_compiles_to_no_sites() {
        let run = compile(&bell_circuit(), &NoiseModel::new(ModelKind::Cat), 0.0).unwrap();
        assert_eq!(run.n_noise_sites(), 0);
        let run = compile(
            &bell_circuit(),
            &NoiseModel::new(ModelKind::AgnosticGate),
            0.0,
        )
        .unwrap();
        assert_eq!(run.n_noise_sites(), 0);
    }

    #[test]
    fn compile_rejects_out_of_range_levels_and_foreign_gates() {
        let c = bell_circuit();
        assert!(matches!(
            compile(&c, &NoiseModel::new(ModelKind::Cat), 0.2),
            Err(SimError::Noise(NoiseError::LevelOutOfRange { .. }))
        ));
        let mut with_roty = Circuit::new(1);
        with_roty.push(GateKind::RotY(0.3), &[0]).unwrap();
        assert!(matches!(
            compile(&with_roty, &NoiseModel::new(ModelKind::Cat), 0.01),
            Err(SimError::Noise(NoiseError::GateNotSupported { .. }))
        ));
    }

    #[test]
    fn cat_idle_sites_attach_to_waiting_qubits() {
        // Qubit 1 waits two steps for the CNOT while qubit 0 runs gates.
        let mut c = Circuit::new(2);
        c.push(GateKind::PrepPlus, &[0]).unwrap();
        c.push(GateKind::PrepPlus, &[1]).unwrap();
        c.push(GateKind::Hadamard, &[0]).unwrap();
        c.push(GateKind::Hadamard, &[0]).unwrap();
        c.push(GateKind::Cnot, &[0, 1]).unwrap();
        c.push(GateKind::MeasureZ, &[0]).unwrap();
        c.push(GateKind::MeasureZ, &[1]).unwrap();
        let run = compile(&c, &NoiseModel::new(ModelKind::Cat), 0.01).unwrap();
        // Sites: 2 preps + 2 hadamards + 1 cnot + 2 idle steps for qubit 1.
        assert_eq!(run.n_noise_sites(), 7);

        // Without the CNOT the scheduler measures qubit 1 as soon as it is
        // ready, so the qubit never idles: 4 gate sites only.
        let mut early = Circuit::new(2);
        early.push(GateKind::PrepPlus, &[0]).unwrap();
        early.push(GateKind::PrepPlus, &[1]).unwrap();
        early.push(GateKind::Hadamard, &[0]).unwrap();
        early.push(GateKind::Hadamard, &[0]).unwrap();
        early.push(GateKind::MeasureZ, &[0]).unwrap();
        early.push(GateKind::MeasureZ, &[1]).unwrap();
        let run = compile(&early, &NoiseModel::new(ModelKind::Cat), 0.01).unwrap();
        assert_eq!(run.n_noise_sites(), 4);
    }

    #[test]
    fn layer_model_places_slabs_around_spans() {
        let mut c = Circuit::new(2);
        c.push(GateKind::PrepPlus, &[0]).unwrap();
        c.push(GateKind::PrepPlus, &[1]).unwrap();
        let start = c.len();
        c.push(GateKind::Cnot, &[0, 1]).unwrap();
        c.push_layer_span(start..c.len()).unwrap();
        let start = c.len();
        c.push(GateKind::Cnot, &[0, 1]).unwrap();
        c.push_layer_span(start..c.len()).unwrap();
        c.push(GateKind::MeasureZ, &[0]).unwrap();
        c.push(GateKind::MeasureZ, &[1]).unwrap();
        let run = compile(&c, &NoiseModel::new(ModelKind::AgnosticLayer), 0.1).unwrap();
        // Three slabs (before layer 1, after layers 1 and 2) over 2 qubits.
        assert_eq!(run.n_noise_sites(), 6);
    }
}
