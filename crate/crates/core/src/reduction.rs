//! Reduction from a verifier circuit to a channel whose distance from an
//! isometry encodes the verifier's maximum acceptance probability.
//!
//! The channel takes the witness register `W`, prepares the ancillas `A` in
//! `|0⟩`, runs the verifier isometry `V`, dephases the measured qubit `M`
//! and, controlled on `M = 1`, completely depolarizes the garbage register
//! `G` together with padding qubits.

use alloc::format;
use alloc::vec::Vec;

use crate::channel::{
    classify_with_lower_bound, min_output_opnorm_with, ChannelHandle, Classification,
    SearchOptions,
};
use crate::circuit::{ChannelOp, Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{eigh, operator_norm, ComplexMatrix, PureState, ZERO};

/// Largest `|W| + |A|` accepted by [`max_accept_prob`].
pub const MAX_VERIFIER_INPUT_QUBITS: usize = 10;

/// Slack used when checking the two implications.
pub const IMPLICATION_SLACK: f64 = 1e-3;

/// A verifier: an isometry circuit `V` with labeled registers.
///
/// `witness` and `ancilla` partition the input qubits of `circuit`;
/// `measured` and `garbage` partition its output qubits. The verifier
/// accepts when `measured` reads `|1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifierSpec {
    circuit: Circuit,
    witness: Vec<usize>,
    ancilla: Vec<usize>,
    measured: usize,
    garbage: Vec<usize>,
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// `a ∪ b == {0, …, n−1}` with `a ∩ b = ∅`.
fn is_partition(a: &[usize], b: &[usize], n: usize) -> bool {
    let mut seen = alloc::vec![false; n];
    for &q in a.iter().chain(b) {
        if q >= n || seen[q] {
            return false;
        }
        seen[q] = true;
    }
    seen.iter().all(|&s| s)
}

impl VerifierSpec {
    pub fn new(
        circuit: Circuit,
        witness: Vec<usize>,
        ancilla: Vec<usize>,
        measured: usize,
        garbage: Vec<usize>,
    ) -> Result<Self> {
        circuit.validate()?;
        if !circuit.is_unitary_only() {
            return Err(Error::InvalidCircuit(
                "verifier body must contain only unitaries and ancillas".into(),
            ));
        }
        let (witness, ancilla, garbage) = (sorted(witness), sorted(ancilla), sorted(garbage));
        if witness.is_empty() {
            return Err(Error::InvalidCircuit("verifier needs at least one witness qubit".into()));
        }
        if !is_partition(&witness, &ancilla, circuit.input_qubits) {
            return Err(Error::InvalidCircuit(format!(
                "witness and ancilla registers must partition the {} input qubits",
                circuit.input_qubits
            )));
        }
        if !is_partition(&[measured], &garbage, circuit.output_qubits()) {
            return Err(Error::InvalidCircuit(format!(
                "measured and garbage registers must partition the {} output qubits",
                circuit.output_qubits()
            )));
        }
        Ok(Self {
            circuit,
            witness,
            ancilla,
            measured,
            garbage,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn witness(&self) -> &[usize] {
        &self.witness
    }

    pub fn ancilla(&self) -> &[usize] {
        &self.ancilla
    }

    pub fn measured(&self) -> usize {
        self.measured
    }

    pub fn garbage(&self) -> &[usize] {
        &self.garbage
    }

    /// Witness dimension `2^|W|`.
    pub fn witness_dim(&self) -> usize {
        1 << self.witness.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutput {
    pub channel_circuit: Circuit,
    pub padding_qubits: usize,
    /// Label of the measured qubit in `channel_circuit`'s output.
    pub measured: usize,
    /// Dimension `d` of the depolarized register (garbage plus padding).
    pub depolarized_dim: usize,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::OutOfRange(format!("epsilon {epsilon} not in (0, 1/2)")));
    }
    Ok(())
}

/// Smallest `n` with `2^n > 2/ε`.
fn output_qubits_needed(epsilon: f64) -> usize {
    let mut n = 0;
    while libm::ldexp(1.0, n as i32) <= 2.0 / epsilon {
        n += 1;
    }
    n
}

/// Builds the channel `Φ: D(W) → D(M ⊗ G ⊗ padding)`.
///
/// Gate order: ancillas for `A`, padding ancillas, the body of `V` with
/// relabeled targets, `dephase M`, `cdepolarize M : G ∪ padding`. Padding
/// brings the output to `n` qubits, the smallest `n` with `2^n > 2/ε`.
pub fn build_instance(v: &VerifierSpec, epsilon: f64) -> Result<ReductionOutput> {
    check_epsilon(epsilon)?;
    let n_in = v.circuit.input_qubits;
    let n_out = v.circuit.output_qubits();
    let padding_qubits = output_qubits_needed(epsilon).saturating_sub(n_out);

    // Inputs: witnesses first, then ancillas; padding sits right after the
    // verifier inputs and pushes the verifier's own ancillas up.
    let mut label = alloc::vec![0; n_in];
    for (k, &q) in v.witness.iter().chain(&v.ancilla).enumerate() {
        label[q] = k;
    }
    let relabel = |q: usize| if q < n_in { label[q] } else { q + padding_qubits };

    let mut c = Circuit::new(v.witness.len());
    for _ in 0..v.ancilla.len() + padding_qubits {
        c.push(Gate::AddAncilla);
    }
    for gate in &v.circuit.gates {
        match gate {
            Gate::Unitary { op, targets } => {
                let t: Vec<usize> = targets.iter().map(|&q| relabel(q)).collect();
                c.push(Gate::Unitary {
                    op: op.clone(),
                    targets: t,
                });
            }
            Gate::AddAncilla => {
                c.push(Gate::AddAncilla);
            }
            _ => unreachable!("verifier bodies are unitary-only"),
        }
    }
    let measured = relabel(v.measured);
    let mut targets = alloc::vec![measured];
    targets.extend(v.garbage.iter().map(|&q| relabel(q)));
    targets.extend(n_in..n_in + padding_qubits);
    let depolarized_dim = 1 << (targets.len() - 1);
    c.push(Gate::channel(ChannelOp::Dephase, &[measured]));
    c.push(Gate::channel(ChannelOp::ControlledDepolarize, &targets));
    c.validate()?;
    Ok(ReductionOutput {
        channel_circuit: c,
        padding_qubits,
        measured,
        depolarized_dim,
    })
}

/// Input-space index of witness basis state `w` with all ancillas `|0⟩`.
fn input_index(v: &VerifierSpec, w: usize) -> usize {
    let n_in = v.circuit.input_qubits;
    let k = v.witness.len();
    v.witness
        .iter()
        .enumerate()
        .filter(|&(i, _)| (w >> (k - 1 - i)) & 1 == 1)
        .map(|(_, &q)| 1 << (n_in - 1 - q))
        .sum()
}

/// The acceptance operator `E = (⟨0|_A ⊗ I_W) V† (|1⟩⟨1|_M ⊗ I_G) V (|0⟩_A ⊗ I_W)`
/// on the witness space.
pub fn acceptance_operator(v: &VerifierSpec) -> Result<ComplexMatrix> {
    let n_in = v.circuit.input_qubits;
    if n_in > MAX_VERIFIER_INPUT_QUBITS {
        return Err(Error::DimensionCap {
            requested: 1 << n_in,
            cap: 1 << MAX_VERIFIER_INPUT_QUBITS,
        });
    }
    let iso = v.circuit.isometry_matrix()?;
    let n_out = v.circuit.output_qubits();
    let shift = n_out - 1 - v.measured;
    let dw = v.witness_dim();
    let cols: Vec<usize> = (0..dw).map(|w| input_index(v, w)).collect();
    let accepting: Vec<usize> = (0..iso.rows()).filter(|o| (o >> shift) & 1 == 1).collect();
    Ok(ComplexMatrix::from_fn(dw, dw, |a, b| {
        accepting.iter().fold(ZERO, |acc, &o| {
            acc + iso[(o, cols[a])].conj() * iso[(o, cols[b])]
        })
    }))
}

/// Maximum acceptance probability and an optimal witness: the top
/// eigenpair of [`acceptance_operator`].
pub fn max_accept_prob(v: &VerifierSpec) -> Result<(f64, PureState)> {
    let e = eigh(&acceptance_operator(v)?);
    let p = e.top_value().clamp(0.0, 1.0);
    let witness = PureState::normalized(e.top_vector())?;
    Ok((p, witness))
}

/// Which implication the acceptance probability triggers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Implication {
    /// `p ≤ ε`, so the minimum must be at least `1 − ε`.
    LowAcceptance,
    /// `p ≥ 1 − ε`, so the minimum must be at most `ε`.
    HighAcceptance,
    None,
}

impl Implication {
    pub fn as_str(self) -> &'static str {
        match self {
            Implication::LowAcceptance => "p <= eps implies min >= 1 - eps",
            Implication::HighAcceptance => "p >= 1 - eps implies min <= eps",
            Implication::None => "no implication applies",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    pub epsilon: f64,
    pub p: f64,
    pub optimal_witness: PureState,
    pub instance: ReductionOutput,
    /// Smallest extended-output opnorm found by the search.
    pub min_output_opnorm: f64,
    pub minimizer: PureState,
    /// Opnorm at `|ψ_opt⟩ ⊗ |0⟩_R`, evaluated when `p ≥ 1 − ε`.
    pub explicit_witness_opnorm: Option<f64>,
    pub implication: Implication,
    /// Whether the applicable implication holds within [`IMPLICATION_SLACK`].
    pub holds: Option<bool>,
    pub classification: Classification,
}

/// Computes `p`, builds the instance, searches its minimum output opnorm
/// and checks whichever implication applies.
pub fn reduction_check(v: &VerifierSpec, epsilon: f64, opts: &SearchOptions) -> Result<ReductionReport> {
    let (p, optimal_witness) = max_accept_prob(v)?;
    let instance = build_instance(v, epsilon)?;
    let ch = ChannelHandle::new(instance.channel_circuit.clone())?;
    let kraus = ch.kraus()?;
    let search = min_output_opnorm_with(&kraus, opts);
    let m = search.value;

    let implication = if p <= epsilon {
        Implication::LowAcceptance
    } else if p >= 1.0 - epsilon {
        Implication::HighAcceptance
    } else {
        Implication::None
    };
    let holds = match implication {
        Implication::LowAcceptance => Some(m >= 1.0 - epsilon - IMPLICATION_SLACK),
        Implication::HighAcceptance => Some(m <= epsilon + IMPLICATION_SLACK),
        Implication::None => None,
    };
    let explicit_witness_opnorm = match implication {
        Implication::HighAcceptance => {
            let gamma = optimal_witness.tensor(&PureState::basis(ch.dim_in(), 0));
            Some(operator_norm(&ch.apply_extended_operator(gamma.projector().matrix())?))
        }
        _ => None,
    };
    // Every output has opnorm at least 1 − p_in ≥ 1 − p.
    let classification = classify_with_lower_bound(m, Some(1.0 - p), epsilon)?;
    Ok(ReductionReport {
        epsilon,
        p,
        optimal_witness,
        instance,
        min_output_opnorm: m,
        minimizer: search.state,
        explicit_witness_opnorm,
        implication,
        holds,
        classification,
    })
}
