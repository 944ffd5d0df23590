use alloc::vec::Vec;

use num_complex::Complex64;

use super::{ChannelHandle, KrausSet};
use crate::error::Result;
use crate::linalg::{eigh, partial_trace, ComplexMatrix, DensityMatrix, PureState};

/// Normalized Choi matrix `C(Φ) = (Φ ⊗ 1_H)(|φ+⟩⟨φ+|)` on `K ⊗ H`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    dim_in: usize,
    dim_out: usize,
    matrix: DensityMatrix,
}

impl ChoiMatrix {
    /// Applies the circuit to one half of the maximally entangled state.
    pub fn of(ch: &ChannelHandle) -> Result<Self> {
        ch.check_cap(ch.extended_peak_dim())?;
        let phi = PureState::maximally_entangled(ch.dim_in());
        let out = ch.apply_extended_operator(phi.projector().matrix())?;
        Ok(Self {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            matrix: DensityMatrix::new(out)?,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &DensityMatrix {
        &self.matrix
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(self.matrix.matrix()).values
    }

    /// Number of eigenvalues above `rank_tol`.
    pub fn rank(&self, rank_tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > rank_tol).count()
    }

    /// `tr(C²)`; equals one exactly for isometric channels.
    pub fn purity(&self) -> f64 {
        self.matrix.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max |tr_K C − I/dim_in|`, zero for trace-preserving maps.
    pub fn marginal_defect(&self) -> f64 {
        let marginal = partial_trace(self.matrix.matrix(), &[self.dim_out, self.dim_in], &[1])
            .expect("Choi dimensions are consistent");
        let target = ComplexMatrix::identity(self.dim_in).scale_real(1.0 / self.dim_in as f64);
        marginal.max_abs_diff(&target)
    }
}

/// Minimal Kraus set read off the Choi spectrum: one operator
/// `√(λ·dim_in) · reshape(v)` per eigenpair with `λ > rank_tol`.
///
/// Dropping sub-threshold eigenvalues can leave a completeness defect of
/// the order of the discarded weight; callers needing a strict check use
/// [`KrausSet::completeness_defect`].
pub fn kraus_from_choi(choi: &ChoiMatrix, rank_tol: f64) -> KrausSet {
    let e = eigh(choi.matrix.matrix());
    let (d_out, d_in) = (choi.dim_out, choi.dim_in);
    let mut ops = Vec::new();
    for (k, &lam) in e.values.iter().enumerate() {
        if lam <= rank_tol {
            break;
        }
        let s = libm::sqrt(lam * d_in as f64);
        let v: Vec<Complex64> = e.vector(k).into_iter().map(|z| z * s).collect();
        ops.push(ComplexMatrix::from_row_major(d_out, d_in, v).expect("reshape of Choi eigenvector"));
    }
    if ops.is_empty() {
        // Only reachable with rank_tol ≥ the largest eigenvalue.
        ops.push(ComplexMatrix::zeros(d_out, d_in));
    }
    KrausSet::from_operators(ops).expect("Choi eigenvectors give at most dim_in*dim_out operators")
}
