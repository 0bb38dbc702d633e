//! MaxCut QAOA: problem instances, the normalized cut cost, and the
//! alternating-operator circuit.
//!
//! The cost of a cut assignment `x` (one bit per vertex) is
//!
//! ```text
//! C(x) = 1 - (cut edges) / (total edges)
//! ```
//!
//! which lives in `[0, 1]`, reaches 0 exactly when every edge is cut, and
//! averages 0.5 over uniformly random assignments. The phase separator
//! implements `exp(-i gamma C)` as one `CNOT - RotZ - CNOT` block per edge,
//! and the mixer `exp(-i beta X)` per qubit as `H, RotZ(2 beta), H`.

use super::VqaError;
use crate::circuit::{Circuit, GateKind};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// An undirected graph with at least one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, canonicalizing edges to `(low, high)` sorted order
    /// and rejecting self-loops, duplicates, and out-of-range vertices.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, VqaError> {
        let mut canon: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(VqaError::BadEdge { a, b, n });
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        canon.dedup();
        if canon.is_empty() {
            return Err(VqaError::EmptyGraph);
        }
        Ok(Graph { n, edges: canon })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Samples an Erdos-Renyi graph: each vertex pair is an edge with
/// probability `edge_prob`. Edgeless draws are resampled so the cut cost
/// stays well defined; with the default density this is vanishingly rare.
pub fn random_graph(n: usize, edge_prob: f64, rng: &mut ChaCha8Rng) -> Result<Graph, VqaError> {
    if n < 2 {
        return Err(VqaError::RegisterTooSmall { n, min: 2 });
    }
    loop {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen::<f64>() < edge_prob {
                    edges.push((a, b));
                }
            }
        }
        if !edges.is_empty() {
            return Ok(Graph { n, edges });
        }
    }
}

/// Normalized cut cost of the assignment encoded in `bits` (bit `i` is the
/// side of vertex `i`).
pub fn cut_cost(graph: &Graph, bits: u64) -> f64 {
    let cut = graph
        .edges
        .iter()
        .filter(|&&(a, b)| ((bits >> a) ^ (bits >> b)) & 1 == 1)
        .count();
    1.0 - cut as f64 / graph.n_edges() as f64
}

/// Cost of every outcome, indexed by measured bitstring.
pub fn cost_table(graph: &Graph) -> Vec<f64> {
    (0..1u64 << graph.n)
        .map(|bits| cut_cost(graph, bits))
        .collect()
}

/// Number of circuit parameters for `layers` layers.
pub fn n_params(layers: usize) -> usize {
    2 * layers
}

/// Splits the interleaved parameter vector `[g1, b1, g2, b2, ...]`.
fn layer_params(params: &[f64], layer: usize) -> (f64, f64) {
    (params[2 * layer], params[2 * layer + 1])
}

/// Builds the QAOA circuit: `|+>^n` preparation, `layers` alternating
/// phase-separator and mixer layers (each declared as one ansatz layer),
/// and a final Z measurement of every qubit.
pub fn qaoa_circuit(graph: &Graph, layers: usize, params: &[f64]) -> Result<Circuit, VqaError> {
    if layers == 0 {
        return Err(VqaError::NoLayers);
    }
    if params.len() != n_params(layers) {
        return Err(VqaError::BadParameterCount {
            expected: n_params(layers),
            got: params.len(),
        });
    }
    let n = graph.n_vertices();
    let mut c = Circuit::new(n);
    let push = |c: &mut Circuit, kind: GateKind, qubits: &[usize]| {
        c.push(kind, qubits).expect("builder emits valid ops");
    };
    for q in 0..n {
        push(&mut c, GateKind::PrepPlus, &[q]);
    }
    // exp(-i gamma C) needs a ZZ rotation by gamma / n_edges per edge.
    let zz_weight = 1.0 / graph.n_edges() as f64;
    for layer in 0..layers {
        let (gamma, beta) = layer_params(params, layer);
        let start = c.len();
        for &(a, b) in graph.edges() {
            push(&mut c, GateKind::Cnot, &[a, b]);
            push(&mut c, GateKind::RotZ(gamma * zz_weight), &[b]);
            push(&mut c, GateKind::Cnot, &[a, b]);
        }
        for q in 0..n {
            push(&mut c, GateKind::Hadamard, &[q]);
            push(&mut c, GateKind::RotZ(2.0 * beta), &[q]);
            push(&mut c, GateKind::Hadamard, &[q]);
        }
        c.push_layer_span(start..c.len())
            .expect("layers are appended in order");
    }
    for q in 0..n {
        push(&mut c, GateKind::MeasureZ, &[q]);
    }
    Ok(c)
}
