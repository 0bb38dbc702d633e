//! Statevector gate kernels operating on raw amplitude slices.
//!
//! Qubit `q` corresponds to bit `q` of the amplitude index. All kernels
//! work on any slice whose length is a power of two at least `2^(q+1)`,
//! which lets the density-matrix code reuse them row by row.

use crate::circuit::GateKind;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

/// Applies a unitary gate. `PrepPlus` is applied as a Hadamard, which is
/// valid because circuit validation guarantees the qubit has not been
/// touched before and therefore still holds `|0>`. Measurement kinds are
/// rejected; readout is the simulator's job, not a kernel.
pub fn apply_gate(amps: &mut [Complex64], kind: &GateKind, qubits: &[usize]) {
    match *kind {
        GateKind::PrepPlus | GateKind::Hadamard => hadamard(amps, qubits[0]),
        GateKind::PauliX => pauli_x(amps, qubits[0]),
        GateKind::PauliZ => pauli_z(amps, qubits[0]),
        GateKind::RotZ(t) => rot_z(amps, qubits[0], t),
        GateKind::RotY(t) => rot_y(amps, qubits[0], t),
        GateKind::Cz => cz(amps, qubits[0], qubits[1]),
        GateKind::Cnot => cnot(amps, qubits[0], qubits[1]),
        GateKind::Toffoli => toffoli(amps, qubits[0], qubits[1], qubits[2]),
        GateKind::MeasureZ | GateKind::MeasureX => {
            unreachable!("measurements are not applied as kernels")
        }
    }
}

/// Conjugate of a gate's matrix, as another gate. Every supported gate is
/// real except `RotZ`, whose conjugate negates the angle.
pub fn conjugate_kind(kind: &GateKind) -> GateKind {
    match *kind {
        GateKind::RotZ(t) => GateKind::RotZ(-t),
        other => other,
    }
}

fn for_each_pair(
    amps: &mut [Complex64],
    q: usize,
    mut f: impl FnMut(Complex64, Complex64) -> (Complex64, Complex64),
) {
    let mask = 1usize << q;
    let block = mask << 1;
    let mut base = 0;
    while base < amps.len() {
        for i0 in base..base + mask {
            let i1 = i0 | mask;
            let (a, b) = f(amps[i0], amps[i1]);
            amps[i0] = a;
            amps[i1] = b;
        }
        base += block;
    }
}

pub fn hadamard(amps: &mut [Complex64], q: usize) {
    for_each_pair(amps, q, |a, b| {
        ((a + b) * FRAC_1_SQRT_2, (a - b) * FRAC_1_SQRT_2)
    });
}

pub fn pauli_x(amps: &mut [Complex64], q: usize) {
    for_each_pair(amps, q, |a, b| (b, a));
}

pub fn pauli_z(amps: &mut [Complex64], q: usize) {
    let mask = 1usize << q;
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & mask != 0 {
            *amp = -*amp;
        }
    }
}

pub fn rot_z(amps: &mut [Complex64], q: usize, theta: f64) {
    let e0 = Complex64::from_polar(1.0, -theta / 2.0);
    let e1 = Complex64::from_polar(1.0, theta / 2.0);
    for_each_pair(amps, q, |a, b| (a * e0, b * e1));
}

pub fn rot_y(amps: &mut [Complex64], q: usize, theta: f64) {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    for_each_pair(amps, q, |a, b| (c * a - s * b, s * a + c * b));
}

pub fn cnot(amps: &mut [Complex64], control: usize, target: usize) {
    let cmask = 1usize << control;
    let tmask = 1usize << target;
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}

pub fn cz(amps: &mut [Complex64], a: usize, b: usize) {
    let mask = (1usize << a) | (1usize << b);
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & mask == mask {
            *amp = -*amp;
        }
    }
}

pub fn toffoli(amps: &mut [Complex64], c1: usize, c2: usize, target: usize) {
    let cmask = (1usize << c1) | (1usize << c2);
    let tmask = 1usize << target;
    for i in 0..amps.len() {
        if i & cmask == cmask && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize, idx: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
        v[idx] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        // Qubit 0 is the control: |01> (index 1) -> |11> (index 3).
        let mut amps = basis(2, 0b01);
        cnot(&mut amps, 0, 1);
        assert_eq!(amps[0b11], Complex64::new(1.0, 0.0));
        let mut amps = basis(2, 0b10);
        cnot(&mut amps, 0, 1);
        assert_eq!(amps[0b10], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn toffoli_needs_both_controls() {
        let mut amps = basis(3, 0b011);
        toffoli(&mut amps, 0, 1, 2);
        assert_eq!(amps[0b111], Complex64::new(1.0, 0.0));
        let mut amps = basis(3, 0b001);
        toffoli(&mut amps, 0, 1, 2);
        assert_eq!(amps[0b001], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn hadamard_twice_is_identity() {
        let mut amps = basis(1, 1);
        hadamard(&mut amps, 0);
        hadamard(&mut amps, 0);
        assert!((amps[1].re - 1.0).abs() < 1e-15);
        assert!(amps[0].norm() < 1e-15);
    }

    #[test]
    fn rot_y_rotates_zero_to_plus_at_half_pi() {
        let mut amps = basis(1, 0);
        rot_y(&mut amps, 0, std::f64::consts::FRAC_PI_2);
        assert!((amps[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((amps[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rot_z_phases_match_definition() {
        let theta = 0.7;
        let mut amps = vec![Complex64::new(FRAC_1_SQRT_2, 0.0); 2];
        rot_z(&mut amps, 0, theta);
        let expected0 = Complex64::from_polar(FRAC_1_SQRT_2, -theta / 2.0);
        let expected1 = Complex64::from_polar(FRAC_1_SQRT_2, theta / 2.0);
        assert!((amps[0] - expected0).norm() < 1e-15);
        assert!((amps[1] - expected1).norm() < 1e-15);
    }
}
