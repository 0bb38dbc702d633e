//! Rewriting circuits into the hardware basis.
//!
//! The target basis is `{RotZ, CNOT, X, Z, H, CZ}` plus `Toffoli` when the
//! backend executes it natively. Preparations and measurements pass
//! through. Two rewrites are applied:
//!
//! - `RotY(t)` becomes `RotZ(-pi/2), H, RotZ(t), H, RotZ(pi/2)`, which
//!   equals `RotY(t)` exactly (no global phase).
//! - `Toffoli`, when not native, becomes the standard six-CNOT network
//!   with `RotZ(+-pi/4)` in place of `T`/`T^dagger`, equal to the Toffoli
//!   up to a global phase.
//!
//! Declared layer spans are remapped through the rewrite so layer-wise
//! noise keeps its boundaries.

use crate::circuit::{Circuit, GateKind};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

#[derive(Clone, Copy, Debug)]
pub struct TranspileOptions {
    pub native_toffoli: bool,
}

impl Default for TranspileOptions {
    fn default() -> Self {
        TranspileOptions {
            native_toffoli: true,
        }
    }
}

/// Rewrites `circuit` into the target basis.
pub fn transpile(circuit: &Circuit, opts: &TranspileOptions) -> Circuit {
    let mut out = Circuit::new(circuit.n_qubits());
    let mut new_start = Vec::with_capacity(circuit.len() + 1);

    for op in circuit.ops() {
        new_start.push(out.len());
        let qs = op.qubits.as_slice();
        let emit = |out: &mut Circuit, kind: GateKind, qubits: &[usize]| {
            out.push(kind, qubits)
                .expect("rewriting a valid circuit stays valid");
        };
        match op.kind {
            GateKind::RotY(theta) => {
                emit(&mut out, GateKind::RotZ(-FRAC_PI_2), qs);
                emit(&mut out, GateKind::Hadamard, qs);
                emit(&mut out, GateKind::RotZ(theta), qs);
                emit(&mut out, GateKind::Hadamard, qs);
                emit(&mut out, GateKind::RotZ(FRAC_PI_2), qs);
            }
            GateKind::Toffoli if !opts.native_toffoli => {
                let (c1, c2, t) = (qs[0], qs[1], qs[2]);
                emit(&mut out, GateKind::Hadamard, &[t]);
                emit(&mut out, GateKind::Cnot, &[c2, t]);
                emit(&mut out, GateKind::RotZ(-FRAC_PI_4), &[t]);
                emit(&mut out, GateKind::Cnot, &[c1, t]);
                emit(&mut out, GateKind::RotZ(FRAC_PI_4), &[t]);
                emit(&mut out, GateKind::Cnot, &[c2, t]);
                emit(&mut out, GateKind::RotZ(-FRAC_PI_4), &[t]);
                emit(&mut out, GateKind::Cnot, &[c1, t]);
                emit(&mut out, GateKind::RotZ(FRAC_PI_4), &[c2]);
                emit(&mut out, GateKind::RotZ(FRAC_PI_4), &[t]);
                emit(&mut out, GateKind::Hadamard, &[t]);
                emit(&mut out, GateKind::Cnot, &[c1, c2]);
                emit(&mut out, GateKind::RotZ(FRAC_PI_4), &[c1]);
                emit(&mut out, GateKind::RotZ(-FRAC_PI_4), &[c2]);
                emit(&mut out, GateKind::Cnot, &[c1, c2]);
            }
            kind => emit(&mut out, kind, qs),
        }
    }
    new_start.push(out.len());

    for span in circuit.layer_spans() {
        out.push_layer_span(new_start[span.start]..new_start[span.end])
            .expect("remapped spans stay ascending");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::sim::StateVector;

    #[test]
    fn roty_rewrite_matches_exactly_on_superpositions() {
        let thetas = [0.0, 0.3, -1.2, std::f64::consts::PI, 5.9];
        for theta in thetas {
            let mut direct = Circuit::new(1);
            direct.push(GateKind::RotY(theta), &[0]).unwrap();
            let rewritten = transpile(&direct, &TranspileOptions::default());
            assert_eq!(rewritten.len(), 5);

            let mut a = StateVector::zero(1).unwrap();
            a.apply_gate(&GateKind::Hadamard, &[0]);
            let mut b = a.clone();
            a.apply_circuit_unitaries(&direct);
            b.apply_circuit_unitaries(&rewritten);
            let overlap = a.inner(&b);
            // Phase-exact: the inner product itself must be 1.
            assert!((overlap.re - 1.0).abs() < 1e-12 && overlap.im.abs() < 1e-12);
        }
    }

    #[test]
    fn toffoli_rewrite_matches_up_to_global_phase() {
        let mut direct = Circuit::new(3);
        direct.push(GateKind::Toffoli, &[0, 1, 2]).unwrap();
        let rewritten = transpile(
            &direct,
            &TranspileOptions {
                native_toffoli: false,
            },
        );
        assert_eq!(rewritten.len(), 15);
        assert!(rewritten
            .ops()
            .iter()
            .all(|op| !matches!(op.kind, GateKind::Toffoli)));

        for input in 0..8usize {
            let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 8];
            amps[input] = num_complex::Complex64::new(1.0, 0.0);
            let mut a = StateVector::from_amplitudes(3, amps.clone()).unwrap();
            let mut b = StateVector::from_amplitudes(3, amps).unwrap();
            a.apply_circuit_unitaries(&direct);
            b.apply_circuit_unitaries(&rewritten);
            let overlap = a.inner(&b).norm();
            assert!((overlap - 1.0).abs() < 1e-12, "input {input}: {overlap}");
        }
    }

    #[test]
    fn native_toffoli_passes_through() {
        let mut c = Circuit::new(3);
        c.push(GateKind::Toffoli, &[0, 1, 2]).unwrap();
        let out = transpile(&c, &TranspileOptions::default());
        assert_eq!(out.len(), 1);
        assert_eq!(out.ops()[0].kind, GateKind::Toffoli);
    }

    #[test]
    fn layer_spans_are_remapped_through_expansion() {
        let mut c = Circuit::new(2);
        c.push(GateKind::PrepPlus, &[0]).unwrap();
        c.push(GateKind::PrepPlus, &[1]).unwrap();
        let start = c.len();
        c.push(GateKind::RotY(0.4), &[0]).unwrap();
        c.push(GateKind::Cnot, &[0, 1]).unwrap();
        c.push_layer_span(start..c.len()).unwrap();
        let start = c.len();
        c.push(GateKind::RotY(0.9), &[1]).unwrap();
        c.push_layer_span(start..c.len()).unwrap();

        let out = transpile(&c, &TranspileOptions::default());
        assert_eq!(out.layer_spans().len(), 2);
        assert_eq!(out.layer_spans()[0], 2..8);
        assert_eq!(out.layer_spans()[1], 8..13);
    }

    #[test]
    fn measurements_and_preps_pass_through() {
        let mut c = Circuit::new(1);
        c.push(GateKind::PrepPlus, &[0]).unwrap();
        c.push(GateKind::MeasureX, &[0]).unwrap();
        let out = transpile(&c, &TranspileOptions::default());
        assert_eq!(out.ops(), c.ops());
    }
}
