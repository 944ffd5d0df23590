//! Mixed-state circuits: unitary gates plus ancilla introduction, trace-out
//! and Kraus channel gates. A validated [`Circuit`] is the executable
//! description of a channel from `input_qubits` to `output_qubits` qubits.
//!
//! Qubit indices are positional labels. `AddAncilla` appends a qubit at the
//! highest index; `TraceOut(t)` removes qubit `t` and shifts every higher
//! index down by one.

mod gate;
pub(crate) mod sim;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use gate::{
    controlled_depolarize_kraus, depolarizing_kraus, Builtin, ChannelOp, Gate, UnitaryOp,
};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::tol;
use sim::Layout;

/// Validation failure located at a gate (0-based position in the gate list).
/// `gate == None` refers to the circuit header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitError {
    pub gate: Option<usize>,
    pub message: String,
}

impl CircuitError {
    fn at(gate: usize, message: impl Into<String>) -> Self {
        Self {
            gate: Some(gate),
            message: message.into(),
        }
    }
}

impl fmt::Display for CircuitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gate {
            Some(g) => write!(f, "gate {g}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl From<CircuitError> for Error {
    fn from(e: CircuitError) -> Self {
        Error::InvalidCircuit(alloc::string::ToString::to_string(&e))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub input_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(input_qubits: usize) -> Self {
        Self {
            input_qubits,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(input_qubits: usize, gates: Vec<Gate>) -> Self {
        Self {
            input_qubits,
            gates,
        }
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    /// `input_qubits + #AddAncilla − #TraceOut`
    pub fn output_qubits(&self) -> usize {
        let delta: isize = self.gates.iter().map(Gate::qubit_delta).sum();
        (self.input_qubits as isize + delta).max(0) as usize
    }

    pub fn dim_in(&self) -> usize {
        1 << self.input_qubits
    }

    pub fn dim_out(&self) -> usize {
        1 << self.output_qubits()
    }

    /// Largest qubit count reached anywhere in the circuit.
    pub fn peak_qubits(&self) -> usize {
        let mut n = self.input_qubits as isize;
        let mut peak = n;
        for g in &self.gates {
            n += g.qubit_delta();
            peak = peak.max(n);
        }
        peak.max(0) as usize
    }

    /// True when the circuit has no trace-out and no channel gates.
    pub fn is_unitary_only(&self) -> bool {
        self.gates
            .iter()
            .all(|g| matches!(g, Gate::Unitary { .. } | Gate::AddAncilla))
    }

    /// Qubit count in effect just before each gate.
    fn counts(&self) -> impl Iterator<Item = isize> + '_ {
        self.gates.iter().scan(self.input_qubits as isize, |n, g| {
            let before = *n;
            *n += g.qubit_delta();
            Some(before)
        })
    }

    /// Checks every gate invariant, reporting the first violation.
    pub fn validate(&self) -> core::result::Result<(), CircuitError> {
        if self.input_qubits == 0 {
            return Err(CircuitError {
                gate: None,
                message: "circuit needs at least one input qubit".into(),
            });
        }
        for (idx, (gate, n)) in self.gates.iter().zip(self.counts()).enumerate() {
            if n < 1 {
                return Err(CircuitError::at(idx, "no qubits left before gate"));
            }
            validate_gate(gate, n as usize).map_err(|m| CircuitError::at(idx, m))?;
        }
        Ok(())
    }

    /// Applies the channel to a density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.matrix())?;
        DensityMatrix::new(out)
    }

    /// Applies the (linear) channel to an arbitrary operator on the input space.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.apply_embedded(x, 1, 1)
    }

    /// Applies `1_pre ⊗ Φ ⊗ 1_post` to an operator on `C^pre ⊗ input ⊗ C^post`.
    pub fn apply_embedded(&self, x: &ComplexMatrix, pre: usize, post: usize) -> Result<ComplexMatrix> {
        self.validate()?;
        let expected = pre * self.dim_in() * post;
        if !x.is_square() || x.rows() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: x.rows(),
            });
        }
        Ok(self.run(x.clone(), pre, post))
    }

    /// The isometry `V` of a circuit made of unitaries and ancillas only,
    /// as a `dim_out × dim_in` matrix.
    pub fn isometry_matrix(&self) -> Result<ComplexMatrix> {
        self.validate()?;
        if !self.is_unitary_only() {
            return Err(Error::InvalidCircuit(
                "isometry matrix needs a circuit without traceout or channel gates".into(),
            ));
        }
        let mut layout = Layout {
            pre: 1,
            qubits: self.input_qubits,
            post: 1,
        };
        let mut x = ComplexMatrix::identity(self.dim_in());
        for gate in &self.gates {
            match gate {
                Gate::Unitary { op, targets } => {
                    x = sim::left_apply(&x, layout, targets, &op.matrix());
                }
                Gate::AddAncilla => {
                    x = sim::add_ancilla_rows(&x, layout);
                    layout.qubits += 1;
                }
                _ => unreachable!("checked above"),
            }
        }
        Ok(x)
    }

    /// Simulation without validation; the circuit must already be valid.
    pub(crate) fn run(&self, mut x: ComplexMatrix, pre: usize, post: usize) -> ComplexMatrix {
        let mut layout = Layout {
            pre,
            qubits: self.input_qubits,
            post,
        };
        for gate in &self.gates {
            match gate {
                Gate::Unitary { op, targets } => {
                    x = sim::conjugate(&x, layout, targets, &op.matrix());
                }
                Gate::Channel { op, targets } => {
                    x = match op {
                        ChannelOp::Depolarize => sim::depolarize(&x, layout, targets, false),
                        ChannelOp::ControlledDepolarize => sim::depolarize(&x, layout, targets, true),
                        _ => {
                            let k = op.kraus(targets.len());
                            sim::kraus_apply(&x, layout, targets, k.operators())
                        }
                    };
                }
                Gate::AddAncilla => {
                    x = sim::add_ancilla(&x, layout);
                    layout.qubits += 1;
                }
                Gate::TraceOut(t) => {
                    x = sim::trace_out(&x, layout, *t);
                    layout.qubits -= 1;
                }
            }
        }
        x
    }
}

fn validate_gate(gate: &Gate, n: usize) -> core::result::Result<(), String> {
    let targets = gate.targets();
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(format!("target out of range ({t} with {n} qubits)"));
        }
        if targets[..i].contains(&t) {
            return Err(format!("duplicate target {t}"));
        }
    }
    match gate {
        Gate::Unitary { op, targets } => {
            if targets.is_empty() {
                return Err("unitary gate without targets".into());
            }
            if let UnitaryOp::Builtin(b) = op {
                if b.arity() != targets.len() {
                    return Err(format!(
                        "{} expects {} target(s), got {}",
                        b.name(),
                        b.arity(),
                        targets.len()
                    ));
                }
            }
            let m = op.matrix();
            let d = 1usize << targets.len();
            if m.rows() != d || m.cols() != d {
                return Err(format!(
                    "matrix is {}x{} but {} target(s) need {d}x{d}",
                    m.rows(),
                    m.cols(),
                    targets.len()
                ));
            }
            let defect = m.adjoint().matmul(&m).max_abs_diff(&ComplexMatrix::identity(d));
            if defect > tol::STRUCTURAL {
                return Err(format!("non-unitary gate (deviation {defect:e})"));
            }
        }
        Gate::Channel { op, targets } => {
            match op {
                ChannelOp::Dephase if targets.len() != 1 => {
                    return Err("dephase acts on exactly one qubit".into());
                }
                ChannelOp::ControlledDepolarize if targets.len() < 2 => {
                    return Err("cdepolarize needs a control and at least one target".into());
                }
                _ if targets.is_empty() => return Err("channel gate without targets".into()),
                _ => {}
            }
            let k = op.kraus(targets.len());
            let d = 1usize << targets.len();
            if k.dim_in() != d || k.dim_out() != d {
                return Err(format!(
                    "Kraus operators are {}x{} but {} target(s) need {d}x{d}",
                    k.dim_out(),
                    k.dim_in(),
                    targets.len()
                ));
            }
            let defect = k.completeness_defect();
            if defect > tol::STRUCTURAL {
                return Err(format!("not trace preserving (deviation {defect:e})"));
            }
        }
        Gate::AddAncilla | Gate::TraceOut(_) => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::KrausSet;
    use crate::linalg::{PureState, ONE, ZERO};
    use alloc::vec;
    use num_complex::Complex64 as C;

    fn plus() -> DensityMatrix {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![C::new(s, 0.0), C::new(s, 0.0)]).unwrap().projector()
    }

    #[test]
    fn copy_then_discard_decoheres() {
        // Hand-multiplied: CNOT(|+⟩⟨+| ⊗ |0⟩⟨0|)CNOT = |Φ+⟩⟨Φ+|, whose marginal is I/2.
        let mut c = Circuit::new(1);
        c.push(Gate::AddAncilla)
            .push(Gate::builtin(Builtin::Cnot, &[0, 1]))
            .push(Gate::TraceOut(1));
        let out = c.apply(&plus()).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn full_trace_gives_scalar_one() {
        let mut c = Circuit::new(1);
        c.push(Gate::TraceOut(0));
        assert_eq!(c.output_qubits(), 0);
        let out = c.apply(&plus()).unwrap();
        assert_eq!(out.dim(), 1);
        assert!((out.matrix()[(0, 0)] - ONE).norm() < 1e-15);
    }

    #[test]
    fn isometry_matrix_matches_operator_simulation() {
        let mut c = Circuit::new(1);
        c.push(Gate::builtin(Builtin::H, &[0]))
            .push(Gate::AddAncilla)
            .push(Gate::builtin(Builtin::Cnot, &[0, 1]))
            .push(Gate::builtin(Builtin::S, &[1]));
        let v = c.isometry_matrix().unwrap();
        assert_eq!((v.rows(), v.cols()), (4, 2));
        let rho = plus();
        let direct = c.apply(&rho).unwrap();
        assert!(v.conjugate(rho.matrix()).max_abs_diff(direct.matrix()) < 1e-15);
        c.push(Gate::TraceOut(0));
        assert!(c.isometry_matrix().is_err());
    }

    #[test]
    fn identity_circuit() {
        let c = Circuit::new(1);
        let rho = plus();
        assert!(c.apply(&rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn target_out_of_range() {
        let mut c = Circuit::new(1);
        c.push(Gate::builtin(Builtin::Cnot, &[0, 5]));
        let err = c.validate().unwrap_err();
        assert_eq!(err.gate, Some(0));
        assert!(err.message.starts_with("target out of range"));
    }

    #[test]
    fn non_unitary_matrix_rejected() {
        let m = ComplexMatrix::from_row_major(2, 2, vec![ONE, ONE, ZERO, ONE]).unwrap();
        let mut c = Circuit::new(1);
        c.push(Gate::matrix(m, &[0]));
        assert!(c.validate().unwrap_err().message.starts_with("non-unitary gate"));
    }

    #[test]
    fn perturbed_kraus_rejected() {
        let mut ops = depolarizing_kraus(2).operators().to_vec();
        ops[0][(0, 0)] += C::new(1e-3, 0.0);
        let kraus = KrausSet::from_operators(ops).unwrap();
        assert!(kraus.completeness_defect() > 1e-4);
        let mut c = Circuit::new(1);
        c.push(Gate::channel(
            ChannelOp::Kraus {
                name: "bad".into(),
                kraus,
            },
            &[0],
        ));
        assert!(c.validate().unwrap_err().message.starts_with("not trace preserving"));
    }

    #[test]
    fn gates_after_full_trace_rejected() {
        let mut c = Circuit::new(1);
        c.push(Gate::TraceOut(0)).push(Gate::AddAncilla);
        assert!(c.validate().is_err());
    }

    #[test]
    fn traceout_shifts_indices() {
        // Prepare |1⟩ on qubit 1, discard qubit 0, the survivor is now qubit 0.
        let mut c = Circuit::new(2);
        c.push(Gate::builtin(Builtin::X, &[1])).push(Gate::TraceOut(0));
        let rho = DensityMatrix::basis(4, 0);
        let out = c.apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::basis(2, 1).matrix()) < 1e-15);
    }

    #[test]
    fn controlled_depolarize_gate_semantics() {
        let mut c = Circuit::new(2);
        c.push(Gate::channel(ChannelOp::ControlledDepolarize, &[0, 1]));
        // control |1⟩, target |0⟩ ↦ |1⟩⟨1| ⊗ I/2
        let out = c.apply(&DensityMatrix::basis(4, 2)).unwrap();
        let expect = ComplexMatrix::from_diagonal(&[ZERO, ZERO, C::new(0.5, 0.0), C::new(0.5, 0.0)]);
        assert!(out.matrix().max_abs_diff(&expect) < 1e-15);
        // control |0⟩ leaves the target alone
        let out = c.apply(&DensityMatrix::basis(4, 1)).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::basis(4, 1).matrix()) < 1e-15);
    }
}
