//! Variational algorithms: circuit builders, cost functions, and the
//! classical optimizer that drives them.

pub mod optim;
pub mod qaoa;
pub mod vqls;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum VqaError {
    #[error("graph needs at least one edge")]
    EmptyGraph,
    #[error("edge ({a}, {b}) invalid on {n} vertices")]
    BadEdge { a: usize, b: usize, n: usize },
    #[error("expected {expected} parameters, got {got}")]
    BadParameterCount { expected: usize, got: usize },
    #[error("register size {n} too small; need at least {min}")]
    RegisterTooSmall { n: usize, min: usize },
    #[error("layer count must be at least one")]
    NoLayers,
}

/// Uniform random angles in `[0, 2 pi)`, the optimizer starting point.
pub fn uniform_angles(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..dim)
        .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
        .collect()
}
