//! Dense complex linear algebra plus the distance and purity functionals.
//!
//! Conventions shared by every module: matrices are row-major, tensor
//! factor 0 is the leftmost slot, and `|ij⟩ = |i⟩⊗|j⟩` has flat index
//! `i·d_j + j`.

mod matrix;
mod metrics;
mod spectral;
mod state;

pub use matrix::{partial_trace, permute_factors, tensor, tensor_vec, ComplexMatrix};
pub use metrics::{
    closest_pure_state, fidelity, operator_norm, purity_metrics, swap_operator,
    sym_antisym_projectors, top_eigenpair, trace_norm, PurityMetrics,
};
pub use spectral::{eigh, eigvalsh, singular_values, svd, HermitianEigen, Svd};
pub use state::{DensityMatrix, PureState};

pub(crate) use matrix::{ONE, ZERO};
pub(crate) use state::{inner, vec_norm};
