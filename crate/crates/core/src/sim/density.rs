//! Exact density-matrix evolution of compiled runs.
//!
//! This is the slow, exact counterpart to trajectory sampling: gates are
//! conjugated onto the density matrix and every noise site is applied as an
//! explicit mixture over its branches, so the resulting outcome
//! distribution carries no sampling error. Cost grows as `4^n`, which keeps
//! this route to small registers; it exists to cross-check the trajectory
//! sampler and to evaluate quantities (like parameter gradients) that shot
//! noise would drown out.

use super::{Action, CompiledRun, SimError};
use crate::sim::kernels;
use num_complex::Complex64;

/// Hard cap on density-matrix width (a 2^n x 2^n complex matrix).
pub const MAX_DENSITY_QUBITS: usize = 10;

/// Dense density matrix, row-major.
struct DensityMatrix {
    d: usize,
    elems: Vec<Complex64>,
}

impl DensityMatrix {
    fn pure_zero(n: usize) -> Self {
        let d = 1usize << n;
        let mut elems = vec![Complex64::new(0.0, 0.0); d * d];
        elems[0] = Complex64::new(1.0, 0.0);
        DensityMatrix { d, elems }
    }

    /// Applies `rho -> U rho U^dagger` where `apply_conj` applies the
    /// elementwise conjugate of `U` to an amplitude slice.
    ///
    /// Applying `conj(U)` to every row computes `rho U^dagger`; a conjugate
    /// transpose of that is `U rho` because `rho` is Hermitian; applying
    /// `conj(U)` to the rows once more lands on `U rho U^dagger`.
    fn conjugate_unitary(&mut self, apply_conj: &mut dyn FnMut(&mut [Complex64])) {
        for row in self.elems.chunks_exact_mut(self.d) {
            apply_conj(row);
        }
        self.conj_transpose();
        for row in self.elems.chunks_exact_mut(self.d) {
            apply_conj(row);
        }
    }

    fn conj_transpose(&mut self) {
        let d = self.d;
        for i in 0..d {
            self.elems[i * d + i] = self.elems[i * d + i].conj();
            for j in i + 1..d {
                let a = self.elems[i * d + j].conj();
                let b = self.elems[j * d + i].conj();
                self.elems[i * d + j] = b;
                self.elems[j * d + i] = a;
            }
        }
    }

    fn trace(&self) -> f64 {
        (0..self.d).map(|i| self.elems[i * self.d + i].re).sum()
    }
}

/// Exact outcome distribution of a compiled run, bit `j` of the outcome
/// being the `j`-th lowest measured qubit, matching the trajectory sampler.
pub fn outcome_distribution(run: &CompiledRun) -> Result<Vec<f64>, SimError> {
    if run.n_qubits() > MAX_DENSITY_QUBITS {
        return Err(SimError::DensityTooLarge {
            n: run.n_qubits(),
            max: MAX_DENSITY_QUBITS,
        });
    }
    let mut rho = DensityMatrix::pure_zero(run.n_qubits());
    let mut scratch = vec![Complex64::new(0.0, 0.0); rho.elems.len()];
    let mut mixed = vec![Complex64::new(0.0, 0.0); rho.elems.len()];

    for action in &run.actions {
        match action {
            Action::Gate { kind, qubits } => {
                let conj_kind = kernels::conjugate_kind(kind);
                rho.conjugate_unitary(&mut |row| kernels::apply_gate(row, &conj_kind, qubits));
            }
            Action::Noise(site) => {
                let factor = &run.factors[*site];
                let id_weight = factor.cdf[0];
                for (dst, src) in mixed.iter_mut().zip(&rho.elems) {
                    *dst = src * id_weight;
                }
                let mut prev = id_weight;
                for (branch, error) in factor.errors.iter().enumerate().skip(1) {
                    let weight = factor.cdf[branch] - prev;
                    prev = factor.cdf[branch];
                    if weight <= 0.0 {
                        continue;
                    }
                    scratch.copy_from_slice(&rho.elems);
                    let mut tmp = DensityMatrix {
                        d: rho.d,
                        elems: std::mem::take(&mut scratch),
                    };
                    tmp.conjugate_unitary(&mut |row| super::apply_concrete_error(row, error));
                    for (dst, src) in mixed.iter_mut().zip(&tmp.elems) {
                        *dst += src * weight;
                    }
                    scratch = tmp.elems;
                }
                rho.elems.copy_from_slice(&mixed);
            }
        }
    }

    debug_assert!((rho.trace() - 1.0).abs() < 1e-9, "trace drifted");

    let measured: Vec<usize> = run.measured().iter().map(|&(q, _)| q).collect();
    let mut probs = vec![0.0; run.n_outcomes()];
    let d = rho.d;
    for i in 0..d {
        probs[super::gather_bits(i, &measured)] += rho.elems[i * d + i].re;
    }
    Ok(probs)
}

/// Exact expectation of `table[outcome]` under the run's distribution.
pub fn expected_value(run: &CompiledRun, table: &[f64]) -> Result<f64, SimError> {
    let probs = outcome_distribution(run)?;
    assert_eq!(table.len(), probs.len(), "value table shape mismatch");
    Ok(probs.iter().zip(table).map(|(p, v)| p * v).sum())
}
