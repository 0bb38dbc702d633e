//! Greedy as-soon-as-possible scheduling of circuits into timesteps.
//!
//! Each op is placed in the earliest timestep after every earlier op that
//! shares a qubit with it. The resulting [`Schedule`] drives two things:
//! the reported circuit depth, and the bookkeeping of which qubits sit idle
//! in which timestep, which is where idle noise channels attach.
//!
//! Idle-noise conventions: a qubit is idle in a timestep when no op acts on
//! it there, it has not been measured in an earlier step, and the timestep
//! contains at least one non-measurement op. Timesteps consisting solely of
//! measurements contribute no idle slots, and a measured qubit stops
//! accruing idle noise for the rest of the circuit.

use crate::circuit::Circuit;

/// Timestep assignment for every op of a circuit.
#[derive(Clone, Debug)]
pub struct Schedule {
    /// Timestep of each op, indexed by op position.
    pub op_step: Vec<usize>,
    /// Op indices per timestep, in circuit order.
    pub steps: Vec<Vec<usize>>,
    /// Idle qubits per timestep, ascending. Empty for measurement-only steps.
    pub idle: Vec<Vec<usize>>,
    /// Whether a timestep contains only measurement ops.
    pub measure_only: Vec<bool>,
}

impl Schedule {
    /// Number of timesteps.
    pub fn depth(&self) -> usize {
        self.steps.len()
    }
}

/// Schedules `circuit` greedily, earliest step first.
pub fn schedule(circuit: &Circuit) -> Schedule {
    let n = circuit.n_qubits();
    let mut frontier = vec![0usize; n];
    let mut op_step = Vec::with_capacity(circuit.len());
    let mut steps: Vec<Vec<usize>> = Vec::new();

    for (idx, op) in circuit.ops().iter().enumerate() {
        let step = op.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0);
        if step == steps.len() {
            steps.push(Vec::new());
        }
        steps[step].push(idx);
        op_step.push(step);
        for &q in &op.qubits {
            frontier[q] = step + 1;
        }
    }

    let mut measured_at = vec![usize::MAX; n];
    for (idx, op) in circuit.ops().iter().enumerate() {
        if op.kind.is_measurement() {
            measured_at[op.qubits[0]] = op_step[idx];
        }
    }

    let mut idle = Vec::with_capacity(steps.len());
    let mut measure_only = Vec::with_capacity(steps.len());
    for (step, ops_here) in steps.iter().enumerate() {
        let meas_only = ops_here
            .iter()
            .all(|&i| circuit.ops()[i].kind.is_measurement());
        measure_only.push(meas_only);
        if meas_only {
            idle.push(Vec::new());
            continue;
        }
        let mut active = vec![false; n];
        for &i in ops_here {
            for &q in &circuit.ops()[i].qubits {
                active[q] = true;
            }
        }
        idle.push(
            (0..n)
                .filter(|&q| !active[q] && measured_at[q] > step)
                .collect(),
        );
    }

    Schedule {
        op_step,
        steps,
        idle,
        measure_only,
    }
}
