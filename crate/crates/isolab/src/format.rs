//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 2                      # header, first non-comment line
//! gate CNOT 0 1
//! umatrix 0 : 0+0i 1+0i 1+0i 0+0i
//! ancilla
//! traceout 1
//! channel depolarize 0 1
//! channel dephase 0
//! channel cdepolarize 0 : 1 2
//! channel kraus amp 0 : <op 1 entries> ; <op 2 entries>
//! ```
//!
//! Matrices are row-major lists of complex literals (`a`, `bi`, `a+bi`,
//! `a-bi`). The serializer writes every component with 17 significant digits.

use std::fmt;

use isolab_core::channel::KrausSet;
use isolab_core::circuit::{Builtin, ChannelOp, Circuit, CircuitError, Gate, UnitaryOp};
use isolab_core::linalg::ComplexMatrix;
use num_complex::Complex64;

/// Parse or validation failure at a 1-based source line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitParseError {
    pub line: usize,
    pub message: String,
}

impl CircuitParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for CircuitParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for CircuitParseError {}

/// Source lines with comments stripped, paired with their line numbers.
pub(crate) fn significant_lines(source: &str) -> impl Iterator<Item = (usize, &str)> {
    source.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.split('#').next().unwrap_or("").trim();
        (!text.is_empty()).then_some((i + 1, text))
    })
}

pub fn parse_complex(token: &str) -> Option<Complex64> {
    let t = token.trim();
    if let Some(body) = t.strip_suffix('i') {
        // Split at the last sign that does not belong to an exponent.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (body[..k].parse().ok()?, &body[k..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            s => s.parse().ok()?,
        };
        Some(Complex64::new(re, im))
    } else {
        t.parse().ok().map(|re| Complex64::new(re, 0.0))
    }
}

pub fn format_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

fn parse_index(token: &str, line: usize) -> Result<usize, CircuitParseError> {
    token
        .parse()
        .map_err(|_| CircuitParseError::new(line, format!("invalid qubit index '{token}'")))
}

fn parse_indices(tokens: &[&str], line: usize) -> Result<Vec<usize>, CircuitParseError> {
    tokens.iter().map(|t| parse_index(t, line)).collect()
}

fn parse_entries(tokens: &[&str], line: usize) -> Result<Vec<Complex64>, CircuitParseError> {
    tokens
        .iter()
        .map(|t| {
            parse_complex(t)
                .ok_or_else(|| CircuitParseError::new(line, format!("invalid complex literal '{t}'")))
        })
        .collect()
}

/// Square matrix from a row-major entry list.
fn square_matrix(entries: Vec<Complex64>, line: usize) -> Result<ComplexMatrix, CircuitParseError> {
    let n = (entries.len() as f64).sqrt().round() as usize;
    if n == 0 || n * n != entries.len() {
        return Err(CircuitParseError::new(
            line,
            format!("{} entries do not form a square matrix", entries.len()),
        ));
    }
    ComplexMatrix::from_row_major(n, n, entries).map_err(|e| CircuitParseError::new(line, e.to_string()))
}

/// Splits `lhs : rhs`; errors when the colon is missing.
fn split_colon<'a>(
    tokens: &'a [&'a str],
    line: usize,
    what: &str,
) -> Result<(&'a [&'a str], &'a [&'a str]), CircuitParseError> {
    let k = tokens
        .iter()
        .position(|&t| t == ":")
        .ok_or_else(|| CircuitParseError::new(line, format!("{what} needs ' : '")))?;
    Ok((&tokens[..k], &tokens[k + 1..]))
}

fn parse_gate(tokens: &[&str], line: usize) -> Result<Gate, CircuitParseError> {
    let err = |m: String| CircuitParseError::new(line, m);
    match tokens[0] {
        "gate" => {
            let name = tokens.get(1).ok_or_else(|| err("gate needs a name".into()))?;
            let b = Builtin::from_name(name).ok_or_else(|| err(format!("unknown gate '{name}'")))?;
            Ok(Gate::builtin(b, &parse_indices(&tokens[2..], line)?))
        }
        "umatrix" => {
            let (targets, entries) = split_colon(&tokens[1..], line, "umatrix")?;
            let m = square_matrix(parse_entries(entries, line)?, line)?;
            Ok(Gate::matrix(m, &parse_indices(targets, line)?))
        }
        "ancilla" if tokens.len() == 1 => Ok(Gate::AddAncilla),
        "ancilla" => Err(err("ancilla takes no arguments".into())),
        "traceout" => match tokens[1..] {
            [t] => Ok(Gate::TraceOut(parse_index(t, line)?)),
            _ => Err(err("traceout takes exactly one qubit".into())),
        },
        "channel" => {
            let kind = tokens.get(1).ok_or_else(|| err("channel needs a kind".into()))?;
            match *kind {
                "depolarize" => Ok(Gate::channel(
                    ChannelOp::Depolarize,
                    &parse_indices(&tokens[2..], line)?,
                )),
                "dephase" => Ok(Gate::channel(
                    ChannelOp::Dephase,
                    &parse_indices(&tokens[2..], line)?,
                )),
                "cdepolarize" => {
                    let (control, targets) = split_colon(&tokens[2..], line, "cdepolarize")?;
                    let mut all = parse_indices(control, line)?;
                    if all.len() != 1 {
                        return Err(err("cdepolarize takes exactly one control".into()));
                    }
                    all.extend(parse_indices(targets, line)?);
                    Ok(Gate::channel(ChannelOp::ControlledDepolarize, &all))
                }
                "kraus" => {
                    let name = tokens.get(2).ok_or_else(|| err("kraus channel needs a name".into()))?;
                    let (targets, body) = split_colon(&tokens[3..], line, "kraus channel")?;
                    let ops = body
                        .split(|&t| t == ";")
                        .map(|chunk| square_matrix(parse_entries(chunk, line)?, line))
                        .collect::<Result<Vec<_>, _>>()?;
                    let kraus = KrausSet::from_operators(ops).map_err(|e| err(e.to_string()))?;
                    Ok(Gate::channel(
                        ChannelOp::Kraus {
                            name: (*name).to_string(),
                            kraus,
                        },
                        &parse_indices(targets, line)?,
                    ))
                }
                other => Err(err(format!("unknown channel '{other}'"))),
            }
        }
        other => Err(err(format!("unknown instruction '{other}'"))),
    }
}

/// Parses and validates a circuit.
pub fn parse_circuit(source: &str) -> Result<Circuit, CircuitParseError> {
    parse_circuit_lines(significant_lines(source), source.lines().count().max(1))
}

pub(crate) fn parse_circuit_lines<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
    last_line: usize,
) -> Result<Circuit, CircuitParseError> {
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| CircuitParseError::new(last_line, "missing qubits header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let input_qubits = match tokens[..] {
        ["qubits", n] => n
            .parse()
            .map_err(|_| CircuitParseError::new(header_line, format!("invalid qubit count '{n}'")))?,
        _ => return Err(CircuitParseError::new(header_line, "missing qubits header")),
    };
    let mut circuit = Circuit::new(input_qubits);
    let mut gate_lines = Vec::new();
    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        circuit.push(parse_gate(&tokens, line)?);
        gate_lines.push(line);
    }
    circuit
        .validate()
        .map_err(|e| located(e, header_line, &gate_lines))?;
    Ok(circuit)
}

fn located(e: CircuitError, header_line: usize, gate_lines: &[usize]) -> CircuitParseError {
    let line = e.gate.map_or(header_line, |g| gate_lines[g]);
    CircuitParseError::new(line, e.message)
}

/// Validates an in-memory circuit. Lines refer to its serialized form
/// (header on line 1, gate `k` on line `k + 2`).
pub fn validate_circuit(c: &Circuit) -> Result<(), CircuitParseError> {
    let lines: Vec<usize> = (0..c.gates.len()).map(|k| k + 2).collect();
    c.validate().map_err(|e| located(e, 1, &lines))
}

fn join_indices(t: &[usize]) -> String {
    t.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_entries(m: &ComplexMatrix) -> String {
    m.as_slice()
        .iter()
        .map(|&z| format_complex(z))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn serialize_gate(g: &Gate) -> String {
    match g {
        Gate::Unitary {
            op: UnitaryOp::Builtin(b),
            targets,
        } => format!("gate {} {}", b.name(), join_indices(targets)),
        Gate::Unitary {
            op: UnitaryOp::Matrix(m),
            targets,
        } => format!("umatrix {} : {}", join_indices(targets), join_entries(m)),
        Gate::AddAncilla => "ancilla".to_string(),
        Gate::TraceOut(t) => format!("traceout {t}"),
        Gate::Channel { op, targets } => match op {
            ChannelOp::Depolarize => format!("channel depolarize {}", join_indices(targets)),
            ChannelOp::Dephase => format!("channel dephase {}", join_indices(targets)),
            ChannelOp::ControlledDepolarize => format!(
                "channel cdepolarize {} : {}",
                targets[0],
                join_indices(&targets[1..])
            ),
            ChannelOp::Kraus { name, kraus } => {
                let body = kraus
                    .operators()
                    .iter()
                    .map(join_entries)
                    .collect::<Vec<_>>()
                    .join(" ; ");
                format!("channel kraus {name} {} : {body}", join_indices(targets))
            }
        },
    }
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.input_qubits);
    for g in &c.gates {
        out.push_str(&serialize_gate(g));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = |re, im| Some(Complex64::new(re, im));
        assert_eq!(parse_complex("1.5"), c(1.5, 0.0));
        assert_eq!(parse_complex("-2i"), c(0.0, -2.0));
        assert_eq!(parse_complex("i"), c(0.0, 1.0));
        assert_eq!(parse_complex("1-i"), c(1.0, -1.0));
        assert_eq!(parse_complex("1e-3+2.5e+2i"), c(1e-3, 250.0));
        assert_eq!(parse_complex("-1e-3-2E-2i"), c(-1e-3, -2e-2));
        assert_eq!(parse_complex("abc"), None);
        let z = Complex64::new(0.1, -1.0 / 3.0);
        assert_eq!(parse_complex(&format_complex(z)), Some(z));
    }

    #[test]
    fn smallest_circuit() {
        let c = parse_circuit("qubits 1\ngate H 0").unwrap();
        assert_eq!(c.gates, vec![Gate::builtin(Builtin::H, &[0])]);
    }

    #[test]
    fn copy_circuit() {
        let c = parse_circuit("qubits 1\nancilla\ngate CNOT 0 1").unwrap();
        assert_eq!(c.output_qubits(), 2);
    }

    #[test]
    fn error_lines() {
        let e = parse_circuit("qubits 1\ngate CNOT 0 5").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.starts_with("target out of range"), "{e}");
        let e = parse_circuit("").unwrap_err();
        assert_eq!(e.message, "missing qubits header");
        let e = parse_circuit("# only a comment\n\ngate H 0").unwrap_err();
        assert_eq!((e.line, e.message.as_str()), (3, "missing qubits header"));
        let e = parse_circuit("qubits 1\n# c\ngate FOO 0").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("FOO"));
        let e = parse_circuit("qubits 1\numatrix 0 : 1 1 0 1").unwrap_err();
        assert!(e.message.starts_with("non-unitary gate"));
    }

    #[test]
    fn empty_gate_list_serializes_to_header() {
        assert_eq!(serialize_circuit(&Circuit::new(3)), "qubits 3\n");
    }

    #[test]
    fn all_forms_round_trip() {
        let src = "qubits 2\n\
                   gate CNOT 0 1\n\
                   umatrix 1 : 0.6 0.8i 0.8i 0.6\n\
                   ancilla\n\
                   channel cdepolarize 2 : 0 1\n\
                   channel dephase 1\n\
                   channel depolarize 0 2\n\
                   channel kraus flip 1 : 0.6 0 0 0.6 ; 0 0.8 0.8 0\n\
                   traceout 0\n";
        let c = parse_circuit(src).unwrap();
        let again = parse_circuit(&serialize_circuit(&c)).unwrap();
        assert_eq!(c, again);
    }
}
