//! Verifier files: a register header followed by a circuit.
//!
//! ```text
//! witness: 0
//! ancilla: 1
//! measure: 1
//! garbage: 0
//! qubits 2
//! gate H 1
//! ```
//!
//! `witness` and `measure` are required; `ancilla` and `garbage` default to
//! empty.

use isolab_core::reduction::VerifierSpec;

use crate::format::{parse_circuit_lines, serialize_circuit, significant_lines, CircuitParseError};

fn parse_list(value: &str, line: usize, key: &str) -> Result<Vec<usize>, CircuitParseError> {
    value
        .split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| {
                CircuitParseError::new(line, format!("malformed register header: {key} index '{t}'"))
            })
        })
        .collect()
}

pub fn parse_verifier(source: &str) -> Result<VerifierSpec, CircuitParseError> {
    let mut lines = significant_lines(source).peekable();
    let (mut witness, mut ancilla, mut measure, mut garbage) = (None, None, None, None);
    let mut first_line = 1;
    while let Some(&(line, text)) = lines.peek() {
        if text.starts_with("qubits") {
            break;
        }
        lines.next();
        let (key, value) = text.split_once(':').ok_or_else(|| {
            CircuitParseError::new(line, format!("malformed register header '{text}'"))
        })?;
        let key = key.trim();
        let slot = match key {
            "witness" => &mut witness,
            "ancilla" => &mut ancilla,
            "measure" => &mut measure,
            "garbage" => &mut garbage,
            _ => {
                return Err(CircuitParseError::new(
                    line,
                    format!("malformed register header: unknown register '{key}'"),
                ))
            }
        };
        if slot.is_some() {
            return Err(CircuitParseError::new(
                line,
                format!("malformed register header: '{key}' given twice"),
            ));
        }
        *slot = Some(parse_list(value, line, key)?);
        first_line = line;
    }
    let header_end = first_line;
    let circuit = parse_circuit_lines(lines, source.lines().count().max(1))?;
    let missing = |key: &str| {
        CircuitParseError::new(header_end, format!("malformed register header: missing '{key}'"))
    };
    let witness = witness.ok_or_else(|| missing("witness"))?;
    let measure = match measure.ok_or_else(|| missing("measure"))?[..] {
        [m] => m,
        _ => {
            return Err(CircuitParseError::new(
                header_end,
                "malformed register header: 'measure' takes exactly one index",
            ))
        }
    };
    VerifierSpec::new(
        circuit,
        witness,
        ancilla.unwrap_or_default(),
        measure,
        garbage.unwrap_or_default(),
    )
    .map_err(|e| CircuitParseError::new(header_end, e.to_string()))
}

pub fn serialize_verifier(v: &VerifierSpec) -> String {
    let list = |xs: &[usize]| xs.iter().map(|q| format!(" {q}")).collect::<String>();
    format!(
        "witness:{}\nancilla:{}\nmeasure: {}\ngarbage:{}\n{}",
        list(v.witness()),
        list(v.ancilla()),
        v.measured(),
        list(v.garbage()),
        serialize_circuit(v.circuit())
    )
}
