//! Choi and Kraus representations and the isometry analysis of a channel.
//!
//! A channel is always given by a [`Circuit`]. Its extension `Φ ⊗ 1_R`
//! uses a reference space `R` of the same dimension as the input, and
//! extended operators are ordered `K ⊗ R` (channel output first).

mod approx;
mod choi;
mod isometry;
mod kraus;
mod search;

pub use approx::{
    extract_approx_isometry, probe_epsilon, ApproxIsometry, ApproxIsometryDiagnostics,
    RANDOM_PROBES,
};
pub use choi::{kraus_from_choi, ChoiMatrix};
pub use isometry::{
    analyze, classify_nonisometry, classify_with_lower_bound, exact_isometry_test,
    Classification, ExactIsometry, IsometryReport,
};
pub use kraus::KrausSet;
pub use search::{
    extended_output, min_output_opnorm, min_output_opnorm_with, OpnormSearch, SearchOptions,
};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, PureState};
use crate::tol;

/// A validated circuit viewed as a channel `D(C^dim_in) → D(C^dim_out)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelHandle {
    circuit: Circuit,
    dim_in: usize,
    dim_out: usize,
    max_dim: usize,
}

impl ChannelHandle {
    /// Validates the circuit; uses the default dimension cap of 2^12.
    pub fn new(circuit: Circuit) -> Result<Self> {
        Self::with_max_dim(circuit, tol::DEFAULT_MAX_DIM)
    }

    /// Validates the circuit against a custom cap on the largest operator
    /// dimension the analysis will form (Choi matrix and intermediate states).
    pub fn with_max_dim(circuit: Circuit, max_dim: usize) -> Result<Self> {
        circuit.validate()?;
        let dim_in = circuit.dim_in();
        let dim_out = circuit.dim_out();
        let ch = Self {
            circuit,
            dim_in,
            dim_out,
            max_dim,
        };
        ch.check_cap(ch.extended_peak_dim())?;
        Ok(ch)
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Largest operator dimension met while simulating `Φ ⊗ 1_R`.
    pub fn extended_peak_dim(&self) -> usize {
        (1usize << self.circuit.peak_qubits()) * self.dim_in
    }

    pub(crate) fn check_cap(&self, requested: usize) -> Result<()> {
        if requested > self.max_dim {
            Err(Error::DimensionCap {
                requested,
                cap: self.max_dim,
            })
        } else {
            Ok(())
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.circuit.apply(rho)
    }

    /// `Φ(X)` for an arbitrary operator `X` on the input space.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.circuit.apply_operator(x)
    }

    /// `(Φ ⊗ 1_R)(X)` for an operator on `H ⊗ R`.
    pub fn apply_extended_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.circuit.apply_embedded(x, 1, self.dim_in)
    }

    /// `(Φ ⊗ 1_R)(|ψ⟩⟨ψ|)` with `dim R = dim H`.
    pub fn apply_extended(&self, psi: &PureState) -> Result<DensityMatrix> {
        let d = self.dim_in * self.dim_in;
        if psi.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: psi.dim(),
            });
        }
        let out = self.apply_extended_operator(psi.projector().matrix())?;
        DensityMatrix::new(out)
    }

    pub fn choi(&self) -> Result<ChoiMatrix> {
        ChoiMatrix::of(self)
    }

    pub fn kraus(&self) -> Result<KrausSet> {
        Ok(kraus_from_choi(&self.choi()?, tol::RANK))
    }
}
