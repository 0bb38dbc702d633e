//! Variational linear solver instance: identity system matrix with a flat
//! right-hand side, verified through a swap test.
//!
//! The register holds `2n + 1` qubits: the swap-test ancilla on qubit 0,
//! the ansatz register `psi` on qubits `1..=n`, and the reference register
//! `b` on qubits `n+1..=2n`, prepared flat with one Hadamard per qubit.
//! The ansatz applies, per layer, one `RotY` per `psi` qubit followed by a
//! linear CNOT chain. Each controlled swap between partner qubits is built
//! as `CNOT(b, psi), Toffoli(ancilla, psi, b), CNOT(b, psi)`.
//!
//! With ancilla outcome probability `P0 = P(ancilla reads 0)`, the cost is
//!
//! ```text
//! cost = 2 (1 - P0) = 1 - |<psi|b>|^2
//! ```
//!
//! clamped to `[0, 1]` against shot noise. The flat target is reachable
//! exactly: `theta = pi/2` on the first layer and 0 elsewhere drives the
//! cost to zero.
//!
//! The ancilla is prepared with `PrepPlus` and read out with `MeasureX`;
//! both are bias-preserving operations rather than standalone Hadamards,
//! so under biased noise they carry preparation/measurement channels
//! instead of two Hadamard channels.

use super::VqaError;
use crate::circuit::{Circuit, GateKind};

/// Total register width for an `n`-qubit problem.
pub fn register_width(n: usize) -> usize {
    2 * n + 1
}

/// Number of ansatz parameters for `layers` layers.
pub fn n_params(n: usize, layers: usize) -> usize {
    n * layers
}

/// Builds the swap-test circuit for the `n`-qubit flat-state problem.
/// `thetas` is layer-major: `thetas[layer * n + k]` rotates `psi` qubit `k`.
pub fn vqls_circuit(n: usize, layers: usize, thetas: &[f64]) -> Result<Circuit, VqaError> {
    if n < 1 {
        return Err(VqaError::RegisterTooSmall { n, min: 1 });
    }
    if layers == 0 {
        return Err(VqaError::NoLayers);
    }
    if thetas.len() != n_params(n, layers) {
        return Err(VqaError::BadParameterCount {
            expected: n_params(n, layers),
            got: thetas.len(),
        });
    }
    let mut c = Circuit::new(register_width(n));
    let push = |c: &mut Circuit, kind: GateKind, qubits: &[usize]| {
        c.push(kind, qubits).expect("builder emits valid ops");
    };
    let psi = |k: usize| 1 + k;
    let b = |k: usize| 1 + n + k;

    push(&mut c, GateKind::PrepPlus, &[0]);
    for k in 0..n {
        push(&mut c, GateKind::Hadamard, &[b(k)]);
    }
    for layer in 0..layers {
        let start = c.len();
        for k in 0..n {
            push(&mut c, GateKind::RotY(thetas[layer * n + k]), &[psi(k)]);
        }
        for k in 0..n.saturating_sub(1) {
            push(&mut c, GateKind::Cnot, &[psi(k), psi(k + 1)]);
        }
        c.push_layer_span(start..c.len())
            .expect("layers are appended in order");
    }
    for k in 0..n {
        push(&mut c, GateKind::Cnot, &[b(k), psi(k)]);
        push(&mut c, GateKind::Toffoli, &[0, psi(k), b(k)]);
        push(&mut c, GateKind::Cnot, &[b(k), psi(k)]);
    }
    push(&mut c, GateKind::MeasureX, &[0]);
    Ok(c)
}

/// Per-outcome cost values for the ancilla readout; averaging them over
/// shots estimates `2 (1 - P0)` before clamping.
pub fn value_table() -> Vec<f64> {
    vec![0.0, 2.0]
}

/// Clamps a raw swap-test cost estimate into the valid range.
pub fn clamp_cost(raw: f64) -> f64 {
    raw.clamp(0.0, 1.0)
}

/// The exact solution angles: `pi/2` across the first layer, 0 elsewhere.
pub fn solution_angles(n: usize, layers: usize) -> Vec<f64> {
    let mut thetas = vec![0.0; n_params(n, layers)];
    for k in 0..n {
        thetas[k] = std::f64::consts::FRAC_PI_2;
    }
    thetas
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{ModelKind, NoiseModel};
    use crate::sim::density::outcome_distribution;
    use crate::sim::compile;

    /// Noiseless ancilla-zero probability computed through the simulator.
    fn exact_p0(n: usize, layers: usize, thetas: &[f64]) -> f64 {
        let c = vqls_circuit(n, layers, thetas).unwrap();
        let run = compile(&c, &NoiseModel::new(ModelKind::None), 0.0).unwrap();
        run.clean_distribution()[0]
    }

    /// For the product ansatz of one layer the overlap with the flat state
    /// factorizes per qubit into `(1 + sin theta) / 2`.
    fn closed_form_p0(thetas: &[f64]) -> f64 {
        let overlap_sq: f64 = thetas.iter().map(|t| (1.0 + t.sin()) / 2.0).product();
        (1.0 + overlap_sq) / 2.0
    }

    #[test]
    fn swap_test_matches_closed_form_overlap() {
        for thetas in [
            vec![0.2, -0.7, 1.1],
            vec![std::f64::consts::FRAC_PI_2; 3],
            vec![0.0, 0.0, 0.0],
        ] {
            let p0 = exact_p0(3, 1, &thetas);
            let expected = closed_form_p0(&thetas);
            assert!((p0 - expected).abs() < 1e-12, "{thetas:?}: {p0} vs {expected}");
        }
    }

    #[test]
    fn solution_angles_reach_zero_cost() {
        for layers in [1, 2, 3] {
            let thetas = solution_angles(3, layers);
            let p0 = exact_p0(3, layers, &thetas);
            assert!((p0 - 1.0).abs() < 1e-12);
            assert!(clamp_cost(2.0 * (1.0 - p0)) < 1e-12);
        }
    }

    #[test]
    fn orthogonal_states_leave_a_coin_flip() {
        // theta = -pi/2 prepares |->, orthogonal to the flat |+> target,
        // so the swap test degenerates to a fair coin.
        let thetas = vec![-std::f64::consts::FRAC_PI_2];
        let p0 = exact_p0(1, 1, &thetas);
        assert!((p0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn density_route_agrees_on_the_ancilla_marginal() {
        let thetas = vec![0.4, 1.3];
        let c = vqls_circuit(2, 1, &thetas).unwrap();
        let run = compile(&c, &NoiseModel::new(ModelKind::None), 0.0).unwrap();
        let exact = outcome_distribution(&run).unwrap();
        let clean = run.clean_distribution();
        assert!((exact[0] - clean[0]).abs() < 1e-12);
    }

    #[test]
    fn builder_validates_shapes() {
        assert!(matches!(
            vqls_circuit(2, 1, &[0.1]),
            Err(VqaError::BadParameterCount { expected: 2, got: 1 })
        ));
        assert!(vqls_circuit(0, 1, &[]).is_err());
        assert!(vqls_circuit(2, 0, &[]).is_err());
    }

    #[test]
    fn layer_spans_cover_the_ansatz_only() {
        let c = vqls_circuit(3, 2, &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        assert_eq!(c.layer_spans().len(), 2);
        // Prologue: 1 PrepPlus + 3 Hadamards.
        assert_eq!(c.layer_spans()[0].start, 4);
        // Each layer: 3 RotY + 2 chain CNOTs.
        assert_eq!(c.layer_spans()[0].end, 9);
        assert_eq!(c.layer_spans()[1], 9..14);
    }
}
