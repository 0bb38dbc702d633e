//! Gate-level circuit representation and its plain-text serialization.
//!
//! A [`Circuit`] is an ordered list of gate applications on a fixed qubit
//! register, validated incrementally: qubit indices stay in range, gate
//! arities match, `PrepPlus` may only appear as the first operation on its
//! qubit, and nothing may act on a qubit after it has been measured.
//!
//! Circuits serialize to a line-oriented text format, one gate per line:
//!
//! ```text
//! GATE q0 [q1 [q2]] [angle]
//! ```
//!
//! for example `PrepPlus 0`, `CNOT 0 1`, `RotZ 2 0.7853981633974483`,
//! `Toffoli 0 1 2`, `MeasureX 0`. Blank lines and `#` comments are ignored
//! when parsing. Gate names are matched case-insensitively.

use smallvec::SmallVec;
use std::fmt;
use std::ops::Range;
use thiserror::Error;

/// One gate (or preparation / measurement) supported by the simulator.
///
/// Rotation angles are in radians: `RotZ(t)` is `exp(-i t Z / 2)` and
/// `RotY(t)` is `exp(-i t Y / 2)`. For `Cnot` the first qubit is the
/// control; for `Toffoli` the first two qubits are the controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    /// Prepare a qubit in `|+>`. Only valid as the first operation on it.
    PrepPlus,
    PauliX,
    PauliZ,
    Hadamard,
    RotZ(f64),
    RotY(f64),
    Cz,
    Cnot,
    Toffoli,
    MeasureZ,
    MeasureX,
}

impl GateKind {
    /// Canonical name used by the text format.
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::PrepPlus => "PrepPlus",
            GateKind::PauliX => "X",
            GateKind::PauliZ => "Z",
            GateKind::Hadamard => "H",
            GateKind::RotZ(_) => "RotZ",
            GateKind::RotY(_) => "RotY",
            GateKind::Cz => "CZ",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "Toffoli",
            GateKind::MeasureZ => "MeasureZ",
            GateKind::MeasureX => "MeasureX",
        }
    }

    /// Number of qubits the gate acts on.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cz | GateKind::Cnot => 2,
            GateKind::Toffoli => 3,
            _ => 1,
        }
    }

    /// Rotation angle, for the parameterized gates.
    pub fn angle(&self) -> Option<f64> {
        match self {
            GateKind::RotZ(t) | GateKind::RotY(t) => Some(*t),
            _ => None,
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, GateKind::MeasureZ | GateKind::MeasureX)
    }

    pub fn is_preparation(&self) -> bool {
        matches!(self, GateKind::PrepPlus)
    }
}

/// Measurement basis of a measured qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureBasis {
    Z,
    X,
}

/// A gate applied to specific qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: SmallVec<[usize; 3]>,
}

/// Validation errors raised while building a circuit.
#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("{gate} takes {expected} qubit(s), got {got}")]
    ArityMismatch {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{gate} addresses qubit {qubit} but the register has {n_qubits} qubit(s)")]
    QubitOutOfRange {
        gate: &'static str,
        qubit: usize,
        n_qubits: usize,
    },
    #[error("{gate} lists qubit {qubit} more than once")]
    DuplicateQubit { gate: &'static str, qubit: usize },
    #[error("operation on qubit {qubit} after it was measured")]
    OpAfterMeasurement { qubit: usize },
    #[error("PrepPlus on qubit {qubit} after it was already used")]
    PrepAfterUse { qubit: usize },
    #[error("non-finite angle on {gate}")]
    NonFiniteAngle { gate: &'static str },
    #[error("layer span {start}..{end} is out of order or out of bounds (ops: {n_ops})")]
    BadLayerSpan {
        start: usize,
        end: usize,
        n_ops: usize,
    },
}

/// Errors raised while parsing the text format.
#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: unknown gate `{token}`")]
    UnknownGate { line: usize, token: String },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: CircuitError,
    },
    #[error("circuit has no gates")]
    Empty,
}

/// An ordered gate list on a fixed register, valid by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
    layer_spans: Vec<Range<usize>>,
    measured: Vec<bool>,
    touched: Vec<bool>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
            layer_spans: Vec::new(),
            measured: vec![false; n_qubits],
            touched: vec![false; n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Ansatz-repetition boundaries declared by a circuit builder, as
    /// non-overlapping, ascending op-index ranges. Layer-aware noise models
    /// use these to place their per-layer error slabs.
    pub fn layer_spans(&self) -> &[Range<usize>] {
        &self.layer_spans
    }

    /// Appends a gate, validating it against the running circuit state.
    pub fn push(&mut self, kind: GateKind, qubits: &[usize]) -> Result<(), CircuitError> {
        let gate = kind.name();
        if qubits.len() != kind.arity() {
            return Err(CircuitError::ArityMismatch {
                gate,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if let Some(t) = kind.angle() {
            if !t.is_finite() {
                return Err(CircuitError::NonFiniteAngle { gate });
            }
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    gate,
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(CircuitError::DuplicateQubit { gate, qubit: q });
            }
            if self.measured[q] {
                return Err(CircuitError::OpAfterMeasurement { qubit: q });
            }
            if kind.is_preparation() && self.touched[q] {
                return Err(CircuitError::PrepAfterUse { qubit: q });
            }
        }
        for &q in qubits {
            self.touched[q] = true;
            if kind.is_measurement() {
                self.measured[q] = true;
            }
        }
        self.ops.push(GateOp {
            kind,
            qubits: SmallVec::from_slice(qubits),
        });
        Ok(())
    }

    /// Declares `span` as the next ansatz layer. Spans must be appended in
    /// ascending, non-overlapping order and lie within the current op list.
    pub fn push_layer_span(&mut self, span: Range<usize>) -> Result<(), CircuitError> {
        let floor = self.layer_spans.last().map_or(0, |s| s.end);
        if span.start < floor || span.start > span.end || span.end > self.ops.len() {
            return Err(CircuitError::BadLayerSpan {
                start: span.start,
                end: span.end,
                n_ops: self.ops.len(),
            });
        }
        self.layer_spans.push(span);
        Ok(())
    }

    /// Measured qubits with their bases, in ascending qubit order.
    pub fn measured_qubits(&self) -> Vec<(usize, MeasureBasis)> {
        let mut out: Vec<(usize, MeasureBasis)> = self
            .ops
            .iter()
            .filter_map(|op| match op.kind {
                GateKind::MeasureZ => Some((op.qubits[0], MeasureBasis::Z)),
                GateKind::MeasureX => Some((op.qubits[0], MeasureBasis::X)),
                _ => None,
            })
            .collect();
        out.sort_unstable_by_key(|&(q, _)| q);
        out
    }

    pub fn has_measurements(&self) -> bool {
        self.measured.iter().any(|&m| m)
    }

    /// Parses the text format, inferring the register size as one past the
    /// highest qubit index used.
    pub fn parse_str(text: &str) -> Result<Circuit, ParseError> {
        let lines = lex(text)?;
        let n = lines
            .iter()
            .flat_map(|(_, _, qs, _)| qs.iter().copied())
            .max()
            .ok_or(ParseError::Empty)?
            + 1;
        assemble(n, &lines)
    }

    /// Parses the text format onto a register of exactly `n_qubits` qubits.
    pub fn parse_str_with_qubits(text: &str, n_qubits: usize) -> Result<Circuit, ParseError> {
        let lines = lex(text)?;
        assemble(n_qubits, &lines)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            write!(f, "{}", op.kind.name())?;
            for q in &op.qubits {
                write!(f, " {q}")?;
            }
            if let Some(t) = op.kind.angle() {
                write!(f, " {t}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

type LexedLine = (usize, String, SmallVec<[usize; 3]>, Option<f64>);

fn lex(text: &str) -> Result<Vec<LexedLine>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let name = tokens.next().expect("non-empty line has a first token");
        let (arity, takes_angle) = gate_shape(name).ok_or_else(|| ParseError::UnknownGate {
            line,
            token: name.to_string(),
        })?;
        let mut qubits = SmallVec::new();
        for _ in 0..arity {
            let tok = tokens.next().ok_or_else(|| ParseError::Malformed {
                line,
                msg: format!("{name} expects {arity} qubit index(es)"),
            })?;
            let q: usize = tok.parse().map_err(|_| ParseError::Malformed {
                line,
                msg: format!("bad qubit index `{tok}`"),
            })?;
            qubits.push(q);
        }
        let angle = if takes_angle {
            let tok = tokens.next().ok_or_else(|| ParseError::Malformed {
                line,
                msg: format!("{name} expects an angle"),
            })?;
            let t: f64 = tok.parse().map_err(|_| ParseError::Malformed {
                line,
                msg: format!("bad angle `{tok}`"),
            })?;
            Some(t)
        } else {
            None
        };
        if let Some(extra) = tokens.next() {
            return Err(ParseError::Malformed {
                line,
                msg: format!("unexpected trailing token `{extra}`"),
            });
        }
        out.push((line, name.to_ascii_lowercase(), qubits, angle));
    }
    Ok(out)
}

fn gate_shape(name: &str) -> Option<(usize, bool)> {
    match name.to_ascii_lowercase().as_str() {
        "prepplus" | "x" | "z" | "h" | "measurez" | "measurex" => Some((1, false)),
        "rotz" | "roty" => Some((1, true)),
        "cz" | "cnot" => Some((2, false)),
        "toffoli" => Some((3, false)),
        _ => None,
    }
}

fn assemble(n_qubits: usize, lines: &[LexedLine]) -> Result<Circuit, ParseError> {
    let mut circuit = Circuit::new(n_qubits);
    for (line, name, qubits, angle) in lines {
        let kind = match name.as_str() {
            "prepplus" => GateKind::PrepPlus,
            "x" => GateKind::PauliX,
            "z" => GateKind::PauliZ,
            "h" => GateKind::Hadamard,
            "rotz" => GateKind::RotZ(angle.expect("lexer keeps RotZ angle")),
            "roty" => GateKind::RotY(angle.expect("lexer keeps RotY angle")),
            "cz" => GateKind::Cz,
            "cnot" => GateKind::Cnot,
            "toffoli" => GateKind::Toffoli,
            "measurez" => GateKind::MeasureZ,
            "measurex" => GateKind::MeasureX,
            _ => unreachable!("lexer rejects unknown gates"),
        };
        circuit
            .push(kind, qubits)
            .map_err(|source| ParseError::Invalid {
                line: *line,
                source,
            })?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_circuit() -> Circuit {
        let mut c = Circuit::new(3);
        c.push(GateKind::PrepPlus, &[0]).unwrap();
        c.push(GateKind::Hadamard, &[1]).unwrap();
        c.push(GateKind::RotZ(std::f64::consts::FRAC_PI_4), &[1])
            .unwrap();
        c.push(GateKind::Cnot, &[0, 1]).unwrap();
        c.push(GateKind::Toffoli, &[0, 1, 2]).unwrap();
        c.push(GateKind::MeasureZ, &[2]).unwrap();
        c.push(GateKind::MeasureX, &[0]).unwrap();
        c
    }

    #[test]
    fn text_round_trip_preserves_ops() {
        let c = sample_circuit();
        let text = c.to_string();
        let parsed = Circuit::parse_str(&text).unwrap();
        assert_eq!(parsed.n_qubits(), 3);
        assert_eq!(parsed.ops(), c.ops());
    }

    #[test]
    fn parse_accepts_comments_and_case() {
        let text = "# header\nprepplus 0\n  CNOT 0 1  # entangle\n\nmeasurez 1\n";
        let c = Circuit::parse_str(text).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.ops()[1].kind, GateKind::Cnot);
    }

    #[test]
    fn parse_rejects_unknown_gate_and_bad_arity() {
        assert!(matches!(
            Circuit::parse_str("SWAP 0 1"),
            Err(ParseError::UnknownGate { line: 1, .. })
        ));
        assert!(matches!(
            Circuit::parse_str("CNOT 0"),
            Err(ParseError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            Circuit::parse_str("H 0 1"),
            Err(ParseError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            Circuit::parse_str("RotZ 0"),
            Err(ParseError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn push_rejects_structural_violations() {
        let mut c = Circuit::new(2);
        c.push(GateKind::Hadamard, &[0]).unwrap();
        assert_eq!(
            c.push(GateKind::PrepPlus, &[0]),
            Err(CircuitError::PrepAfterUse { qubit: 0 })
        );
        assert_eq!(
            c.push(GateKind::Cnot, &[1, 1]),
            Err(CircuitError::DuplicateQubit { gate: "CNOT", qubit: 1 })
        );
        assert_eq!(
            c.push(GateKind::PauliX, &[2]),
            Err(CircuitError::QubitOutOfRange {
                gate: "X",
                qubit: 2,
                n_qubits: 2
            })
        );
        c.push(GateKind::MeasureZ, &[0]).unwrap();
        assert_eq!(
            c.push(GateKind::PauliZ, &[0]),
            Err(CircuitError::OpAfterMeasurement { qubit: 0 })
        );
    }

    #[test]
    fn layer_spans_must_ascend() {
        let mut c = sample_circuit();
        c.push_layer_span(0..2).unwrap();
        c.push_layer_span(2..5).unwrap();
        assert!(c.push_layer_span(1..3).is_err());
        assert!(c.push_layer_span(5..100).is_err());
        assert_eq!(c.layer_spans(), &[0..2, 2..5]);
    }

    #[test]
    fn measured_qubits_sorted_with_basis() {
        let c = sample_circuit();
        assert_eq!(
            c.measured_qubits(),
            vec![(0, MeasureBasis::X), (2, MeasureBasis::Z)]
        );
    }

    #[test]
    fn angle_round_trips_exactly() {
        let mut c = Circuit::new(1);
        c.push(GateKind::RotY(0.1234567890123456789), &[0]).unwrap();
        let parsed = Circuit::parse_str(&c.to_string()).unwrap();
        assert_eq!(parsed.ops()[0].kind, c.ops()[0].kind);
    }
}
