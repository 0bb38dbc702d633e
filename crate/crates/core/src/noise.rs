//! Noise models: per-gate error channels, idle channels, and layer slabs.
//!
//! A channel attached to a gate is a product of independent categorical
//! factors ([`ChannelFactor`]). Each factor draws one branch: either the
//! identity (always branch 0) or a concrete error, itself a product of
//! X / Z / CZ terms on the gate's qubit slots. Branch weights are stored as
//! polynomials in the noise level `p` and evaluated exactly when a circuit
//! is compiled, so normalization can be checked to float precision at any
//! `p` in a model's validity range.
//!
//! Three model families are provided:
//!
//! - `cat`: biased-noise hardware where phase flips dominate. Every gate
//!   carries a single multi-qubit factor with Z-dominated branches; idle
//!   qubits dephase at rate `p` per timestep. The Toffoli gate is native.
//!   Valid for `p <= 1/6`.
//! - `agnostic-gate` / `agnostic-gate-no-toffoli`: hardware-agnostic model
//!   where every gate (state preparation included, measurements excluded)
//!   is followed by independent X and Z flips, each with probability `p`,
//!   on every qubit it acts on. Idle qubits see the same pair of coin
//!   flips per timestep. The two variants differ only in whether Toffoli
//!   is part of the native gate set.
//! - `agnostic-layer`: no per-gate or idle channels at all; instead a slab
//!   of independent X and Z coin flips hits every qubit before the first
//!   declared ansatz layer and after each one.
//!
//! In all models the noise level `p` is anchored to the phase-flip
//! probability of the plain Z-rotation gate, errors are injected after the
//! ideal gate they decorate, and measurements are noiseless.

use crate::circuit::GateKind;
use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

/// Branch weight as a polynomial `c0 + c1 p + c2 p^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weight {
    c0: f64,
    c1: f64,
    c2: f64,
}

impl Weight {
    pub const fn poly(c0: f64, c1: f64, c2: f64) -> Self {
        Weight { c0, c1, c2 }
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.c0 + p * (self.c1 + p * self.c2)
    }
}

/// One X / Z / CZ term of an error, addressed by gate qubit slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorAtom {
    X(usize),
    Z(usize),
    Cz(usize, usize),
}

/// Product of error atoms; the empty product is the identity.
pub type ErrorOp = SmallVec<[ErrorAtom; 2]>;

/// One branch of a categorical factor.
#[derive(Clone, Debug)]
pub struct Branch {
    pub weight: Weight,
    pub error: ErrorOp,
}

/// An independent categorical draw. Branch 0 is always the identity.
#[derive(Clone, Debug)]
pub struct ChannelFactor {
    pub branches: SmallVec<[Branch; 6]>,
}

/// The full channel decorating a gate: a product of independent factors.
///
/// An empty factor list is the trivial (noiseless) channel.
#[derive(Clone, Debug, Default)]
pub struct GateChannel {
    pub factors: SmallVec<[ChannelFactor; 3]>,
}

impl GateChannel {
    pub fn trivial() -> Self {
        GateChannel::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Checks that at noise level `p` every factor is a probability
    /// distribution: weights nonnegative and summing to one within `tol`.
    pub fn check_normalization(&self, p: f64, tol: f64) -> Result<(), NoiseError> {
        for factor in &self.factors {
            let mut sum = 0.0;
            for branch in &factor.branches {
                let w = branch.weight.eval(p);
                if w < -1e-15 {
                    return Err(NoiseError::NegativeWeight { p, weight: w });
                }
                sum += w;
            }
            if (sum - 1.0).abs() > tol {
                return Err(NoiseError::Unnormalized { p, sum });
            }
            if factor
                .branches
                .first()
                .map_or(true, |b| !b.error.is_empty())
            {
                return Err(NoiseError::MissingIdentityBranch);
            }
        }
        Ok(())
    }
}

/// The supported noise model families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    None,
    Cat,
    AgnosticGate,
    AgnosticGateNoToffoli,
    AgnosticLayer,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::None => "none",
            ModelKind::Cat => "cat",
            ModelKind::AgnosticGate => "agnostic-gate",
            ModelKind::AgnosticGateNoToffoli => "agnostic-gate-no-toffoli",
            ModelKind::AgnosticLayer => "agnostic-layer",
        }
    }

    pub fn parse(s: &str) -> Result<Self, NoiseError> {
        match s {
            "none" => Ok(ModelKind::None),
            "cat" => Ok(ModelKind::Cat),
            "agnostic-gate" => Ok(ModelKind::AgnosticGate),
            "agnostic-gate-no-toffoli" => Ok(ModelKind::AgnosticGateNoToffoli),
            "agnostic-layer" => Ok(ModelKind::AgnosticLayer),
            _ => Err(NoiseError::UnknownModel {
                token: s.to_string(),
            }),
        }
    }

    pub fn all() -> [ModelKind; 5] {
        [
            ModelKind::None,
            ModelKind::Cat,
            ModelKind::AgnosticGate,
            ModelKind::AgnosticGateNoToffoli,
            ModelKind::AgnosticLayer,
        ]
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum NoiseError {
    #[error("unknown noise model `{token}`")]
    UnknownModel { token: String },
    #[error("model `{model}` has no channel for gate {gate}; transpile first")]
    GateNotSupported {
        model: &'static str,
        gate: &'static str,
    },
    #[error("noise level {p} outside [0, {max}] for model `{model}`")]
    LevelOutOfRange { model: &'static str, p: f64, max: f64 },
    #[error("model `{model}` requires native-toffoli {required}")]
    ConflictingToffoliSetting { model: &'static str, required: bool },
    #[error("channel weight {weight} negative at p = {p}")]
    NegativeWeight { p: f64, weight: f64 },
    #[error("channel factor sums to {sum} at p = {p}")]
    Unnormalized { p: f64, sum: f64 },
    #[error("channel factor does not start with an identity branch")]
    MissingIdentityBranch,
}

/// A noise model family plus its transpilation preference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoiseModel {
    kind: ModelKind,
    native_toffoli: bool,
}

impl NoiseModel {
    /// Builds a model with its family's default Toffoli handling: native
    /// everywhere except `agnostic-gate-no-toffoli`.
    pub fn new(kind: ModelKind) -> Self {
        NoiseModel {
            kind,
            native_toffoli: !matches!(kind, ModelKind::AgnosticGateNoToffoli),
        }
    }

    /// Builds a model with an explicit Toffoli preference. Rejects
    /// combinations that contradict the family name.
    pub fn with_native_toffoli(kind: ModelKind, native: bool) -> Result<Self, NoiseError> {
        match kind {
            ModelKind::AgnosticGateNoToffoli if native => {
                Err(NoiseError::ConflictingToffoliSetting {
                    model: kind.as_str(),
                    required: false,
                })
            }
            _ => Ok(NoiseModel {
                kind,
                native_toffoli: native,
            }),
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.as_str()
    }

    pub fn native_toffoli(&self) -> bool {
        self.native_toffoli
    }

    /// Largest noise level at which every channel stays a distribution.
    pub fn p_max(&self) -> f64 {
        match self.kind {
            ModelKind::None => 0.0,
            ModelKind::Cat => 1.0 / 6.0,
            _ => 1.0,
        }
    }

    /// Whether errors are injected as per-layer slabs instead of per gate.
    pub fn layer_wise(&self) -> bool {
        self.kind == ModelKind::AgnosticLayer
    }

    /// The channel decorating one application of `kind`, or an error if the
    /// gate is outside the model's native set.
    pub fn gate_channel(&self, kind: &GateKind) -> Result<GateChannel, NoiseError> {
        if kind.is_measurement() {
            return Ok(GateChannel::trivial());
        }
        match self.kind {
            ModelKind::None | ModelKind::AgnosticLayer => {
                if matches!(kind, GateKind::Toffoli) && !self.native_toffoli {
                    return Err(self.unsupported(kind));
                }
                Ok(GateChannel::trivial())
            }
            ModelKind::Cat => self.cat_channel(kind),
            ModelKind::AgnosticGate | ModelKind::AgnosticGateNoToffoli => {
                if matches!(kind, GateKind::Toffoli) && !self.native_toffoli {
                    return Err(self.unsupported(kind));
                }
                Ok(coin_pair_factors(kind.arity()))
            }
        }
    }

    /// The channel applied to one qubit idling for one timestep.
    pub fn idle_channel(&self) -> GateChannel {
        match self.kind {
            ModelKind::None | ModelKind::AgnosticLayer => GateChannel::trivial(),
            ModelKind::Cat => dephasing_factor(1.0),
            ModelKind::AgnosticGate | ModelKind::AgnosticGateNoToffoli => coin_pair_factors(1),
        }
    }

    /// The per-qubit channel of one layer slab (layer-wise model only).
    pub fn layer_slab_channel(&self) -> GateChannel {
        match self.kind {
            ModelKind::AgnosticLayer => coin_pair_factors(1),
            _ => GateChannel::trivial(),
        }
    }

    fn unsupported(&self, kind: &GateKind) -> NoiseError {
        NoiseError::GateNotSupported {
            model: self.kind.as_str(),
            gate: kind.name(),
        }
    }

    fn cat_channel(&self, kind: &GateKind) -> Result<GateChannel, NoiseError> {
        let factor = match kind {
            GateKind::PrepPlus | GateKind::PauliX | GateKind::PauliZ | GateKind::RotZ(_) => {
                return Ok(dephasing_factor(1.0))
            }
            GateKind::Hadamard => ChannelFactor {
                branches: smallvec![
                    branch(Weight::poly(1.0, -5.0, 0.0), &[]),
                    branch(Weight::poly(0.0, 3.0, 0.0), &[ErrorAtom::Z(0)]),
                    branch(Weight::poly(0.0, 2.0, 0.0), &[ErrorAtom::X(0)]),
                ],
            },
            GateKind::Cz => ChannelFactor {
                branches: smallvec![
                    branch(Weight::poly(1.0, -2.0, 0.0), &[]),
                    branch(Weight::poly(0.0, 1.0, 0.0), &[ErrorAtom::Z(0)]),
                    branch(Weight::poly(0.0, 1.0, 0.0), &[ErrorAtom::Z(1)]),
                ],
            },
            GateKind::Cnot => ChannelFactor {
                branches: smallvec![
                    branch(Weight::poly(1.0, -4.0, 0.0), &[]),
                    branch(Weight::poly(0.0, 3.0, 0.0), &[ErrorAtom::Z(0)]),
                    branch(Weight::poly(0.0, 0.5, 0.0), &[ErrorAtom::Z(1)]),
                    branch(
                        Weight::poly(0.0, 0.5, 0.0),
                        &[ErrorAtom::Z(0), ErrorAtom::Z(1)]
                    ),
                ],
            },
            GateKind::Toffoli => ChannelFactor {
                branches: smallvec![
                    branch(Weight::poly(1.0, -6.0, 0.0), &[]),
                    branch(Weight::poly(0.0, 1.0, 0.0), &[ErrorAtom::Z(0)]),
                    branch(Weight::poly(0.0, 1.0, 0.0), &[ErrorAtom::Z(1)]),
                    branch(Weight::poly(0.0, 0.5, 0.0), &[ErrorAtom::Z(2)]),
                    branch(Weight::poly(0.0, 3.0, 0.0), &[ErrorAtom::Cz(0, 1)]),
                    branch(
                        Weight::poly(0.0, 0.5, 0.0),
                        &[ErrorAtom::Cz(0, 1), ErrorAtom::Z(2)]
                    ),
                ],
            },
            GateKind::RotY(_) => return Err(self.unsupported(kind)),
            GateKind::MeasureZ | GateKind::MeasureX => return Ok(GateChannel::trivial()),
        };
        Ok(GateChannel {
            factors: smallvec![factor],
        })
    }
}

fn branch(weight: Weight, atoms: &[ErrorAtom]) -> Branch {
    Branch {
        weight,
        error: SmallVec::from_slice(atoms),
    }
}

/// `{I: 1 - p, Z: p}` on slot 0, scaled so other rates could reuse it.
fn dephasing_factor(rate: f64) -> GateChannel {
    GateChannel {
        factors: smallvec![ChannelFactor {
            branches: smallvec![
                branch(Weight::poly(1.0, -rate, 0.0), &[]),
                branch(Weight::poly(0.0, rate, 0.0), &[ErrorAtom::Z(0)]),
            ],
        }],
    }
}

/// Independent X and Z coins on each of `slots` qubits, merged per qubit
/// into one four-branch factor `{I, X, Z, XZ}` with weights
/// `{(1-p)^2, p(1-p), p(1-p), p^2}`.
fn coin_pair_factors(slots: usize) -> GateChannel {
    let mut factors = SmallVec::new();
    for s in 0..slots {
        factors.push(ChannelFactor {
            branches: smallvec![
                branch(Weight::poly(1.0, -2.0, 1.0), &[]),
                branch(Weight::poly(0.0, 1.0, -1.0), &[ErrorAtom::X(s)]),
                branch(Weight::poly(0.0, 1.0, -1.0), &[ErrorAtom::Z(s)]),
                branch(Weight::poly(0.0, 0.0, 1.0), &[ErrorAtom::X(s), ErrorAtom::Z(s)]),
            ],
        });
    }
    GateChannel { factors }
}
