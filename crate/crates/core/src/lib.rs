//! Noisy quantum-circuit simulation and variational-algorithm experiments.
//!
//! The crate is organized as a pipeline. Circuits ([`circuit`]) are scheduled
//! into timesteps ([`schedule`]), rewritten into a hardware basis
//! ([`transpile`]), paired with a noise model ([`noise`]), and executed either
//! by stochastic trajectory sampling or by exact density-matrix evolution
//! ([`sim`]). On top of the simulator sit the variational algorithms and
//! their classical optimizer ([`vqa`]), and the experiment harness that runs
//! noise sweeps, extracts noise-resiliency thresholds, and writes result
//! tables ([`exp`]).
//!
//! Everything downstream of a `(master seed, instance)` pair is
//! deterministic: random numbers come from counter-derived ChaCha8 substreams
//! ([`rng`]), and all parallel reductions use fixed chunk boundaries, so
//! results do not depend on the number of worker threads.

pub mod circuit;
pub mod exp;
pub mod noise;
pub mod rng;
pub mod schedule;
pub mod sim;
pub mod transpile;
pub mod vqa;
