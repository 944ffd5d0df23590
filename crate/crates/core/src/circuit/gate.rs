use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use num_complex::Complex64;

use crate::channel::KrausSet;
use crate::linalg::{tensor, ComplexMatrix, ONE, ZERO};

/// Named unitaries understood by the circuit format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    Cnot,
    Cz,
    Swap,
}

impl Builtin {
    pub const ALL: [Builtin; 10] = [
        Builtin::I,
        Builtin::X,
        Builtin::Y,
        Builtin::Z,
        Builtin::H,
        Builtin::S,
        Builtin::T,
        Builtin::Cnot,
        Builtin::Cz,
        Builtin::Swap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::I => "I",
            Builtin::X => "X",
            Builtin::Y => "Y",
            Builtin::Z => "Z",
            Builtin::H => "H",
            Builtin::S => "S",
            Builtin::T => "T",
            Builtin::Cnot => "CNOT",
            Builtin::Cz => "CZ",
            Builtin::Swap => "SWAP",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Cnot | Builtin::Cz | Builtin::Swap => 2,
            _ => 1,
        }
    }

    /// Matrix in the basis of the gate's targets, first target most significant.
    pub fn matrix(self) -> ComplexMatrix {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let m2 = |a, b, cc, d| ComplexMatrix::from_row_major(2, 2, vec![a, b, cc, d]).unwrap();
        match self {
            Builtin::I => ComplexMatrix::identity(2),
            Builtin::X => m2(ZERO, ONE, ONE, ZERO),
            Builtin::Y => m2(ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO),
            Builtin::Z => m2(ONE, ZERO, ZERO, c(-1.0, 0.0)),
            Builtin::H => m2(
                c(FRAC_1_SQRT_2, 0.0),
                c(FRAC_1_SQRT_2, 0.0),
                c(FRAC_1_SQRT_2, 0.0),
                c(-FRAC_1_SQRT_2, 0.0),
            ),
            Builtin::S => m2(ONE, ZERO, ZERO, c(0.0, 1.0)),
            Builtin::T => m2(ONE, ZERO, ZERO, c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
            Builtin::Cnot => permutation(&[0, 1, 3, 2]),
            Builtin::Cz => ComplexMatrix::from_diagonal(&[ONE, ONE, ONE, c(-1.0, 0.0)]),
            Builtin::Swap => permutation(&[0, 2, 1, 3]),
        }
    }
}

fn permutation(images: &[usize]) -> ComplexMatrix {
    let n = images.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (col, &row) in images.iter().enumerate() {
        m[(row, col)] = ONE;
    }
    m
}

/// The unitary carried by a [`Gate::Unitary`].
#[derive(Clone, Debug, PartialEq)]
pub enum UnitaryOp {
    Builtin(Builtin),
    /// Explicit matrix literal (`umatrix`).
    Matrix(ComplexMatrix),
}

impl UnitaryOp {
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            UnitaryOp::Builtin(b) => b.matrix(),
            UnitaryOp::Matrix(m) => m.clone(),
        }
    }
}

/// Non-unitary gates with a Kraus description.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelOp {
    /// Completely depolarizing channel Ω on the targets: `X ↦ tr(X)·I/d`.
    Depolarize,
    /// Computational-basis dephasing of one qubit (a measurement whose outcome is discarded).
    Dephase,
    /// Ω on `targets[1..]` controlled by `targets[0]`.
    ControlledDepolarize,
    /// User-supplied Kraus set acting on the targets.
    Kraus { name: String, kraus: KrausSet },
}

impl ChannelOp {
    pub fn name(&self) -> &str {
        match self {
            ChannelOp::Depolarize => "depolarize",
            ChannelOp::Dephase => "dephase",
            ChannelOp::ControlledDepolarize => "cdepolarize",
            ChannelOp::Kraus { name, .. } => name,
        }
    }

    /// Kraus operators for `arity` target qubits.
    pub fn kraus(&self, arity: usize) -> KrausSet {
        match self {
            ChannelOp::Depolarize => depolarizing_kraus(1 << arity),
            ChannelOp::Dephase => {
                let p0 = ComplexMatrix::from_diagonal(&[ONE, ZERO]);
                let p1 = ComplexMatrix::from_diagonal(&[ZERO, ONE]);
                KrausSet::from_operators(vec![p0, p1]).expect("dephasing Kraus shapes")
            }
            ChannelOp::ControlledDepolarize => {
                controlled_depolarize_kraus(1 << arity.saturating_sub(1))
            }
            ChannelOp::Kraus { kraus, .. } => kraus.clone(),
        }
    }
}

/// `{|i⟩⟨j|/√d}` for the completely depolarizing channel on dimension `d`.
pub fn depolarizing_kraus(d: usize) -> KrausSet {
    let s = 1.0 / libm::sqrt(d as f64);
    let mut ops = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut a = ComplexMatrix::zeros(d, d);
            a[(i, j)] = Complex64::new(s, 0.0);
            ops.push(a);
        }
    }
    KrausSet::from_operators(ops).expect("depolarizing Kraus shapes")
}

/// Controlled Ω on a qubit control and a `d`-dimensional target:
/// `{|0⟩⟨0| ⊗ I_d} ∪ {|1⟩⟨1| ⊗ |i⟩⟨j|/√d}`.
pub fn controlled_depolarize_kraus(d: usize) -> KrausSet {
    let p0 = ComplexMatrix::from_diagonal(&[ONE, ZERO]);
    let p1 = ComplexMatrix::from_diagonal(&[ZERO, ONE]);
    let mut ops = Vec::with_capacity(1 + d * d);
    ops.push(tensor(&p0, &ComplexMatrix::identity(d)));
    for a in depolarizing_kraus(d).operators() {
        ops.push(tensor(&p1, a));
    }
    KrausSet::from_operators(ops).expect("controlled depolarizing Kraus shapes")
}

/// One step of a mixed-state circuit.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Unitary { op: UnitaryOp, targets: Vec<usize> },
    /// Appends a fresh `|0⟩` qubit at the highest index.
    AddAncilla,
    /// Discards a qubit; higher indices shift down by one.
    TraceOut(usize),
    Channel { op: ChannelOp, targets: Vec<usize> },
}

impl Gate {
    pub fn builtin(b: Builtin, targets: &[usize]) -> Self {
        Gate::Unitary {
            op: UnitaryOp::Builtin(b),
            targets: targets.to_vec(),
        }
    }

    pub fn matrix(m: ComplexMatrix, targets: &[usize]) -> Self {
        Gate::Unitary {
            op: UnitaryOp::Matrix(m),
            targets: targets.to_vec(),
        }
    }

    pub fn channel(op: ChannelOp, targets: &[usize]) -> Self {
        Gate::Channel {
            op,
            targets: targets.to_vec(),
        }
    }

    pub fn targets(&self) -> &[usize] {
        match self {
            Gate::Unitary { targets, .. } | Gate::Channel { targets, .. } => targets,
            Gate::TraceOut(t) => core::slice::from_ref(t),
            Gate::AddAncilla => &[],
        }
    }

    /// Change in qubit count caused by this gate.
    pub fn qubit_delta(&self) -> isize {
        match self {
            Gate::AddAncilla => 1,
            Gate::TraceOut(_) => -1,
            _ => 0,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Unitary { op: UnitaryOp::Builtin(b), targets } => {
                write!(f, "{} {:?}", b.name(), targets)
            }
            Gate::Unitary { targets, .. } => write!(f, "umatrix {targets:?}"),
            Gate::AddAncilla => f.write_str("ancilla"),
            Gate::TraceOut(t) => write!(f, "traceout {t}"),
            Gate::Channel { op, targets } => write!(f, "channel {} {:?}", op.name(), targets),
        }
    }
}
