use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE};
use super::spectral::{eigh, singular_values};
use super::state::{inner, DensityMatrix, PureState};
use crate::error::{Error, Result};

/// Inputs closer than this to Hermitian take the eigenvalue path.
const HERMITIAN_SHORTCUT: f64 = 1e-13;

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    if m.is_square() && m.hermiticity_defect() <= HERMITIAN_SHORTCUT * m.max_abs().max(1.0) {
        let ev = eigh(m).values;
        ev[0].abs().max(ev[ev.len() - 1].abs())
    } else {
        singular_values(m)[0]
    }
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    if m.is_square() && m.hermiticity_defect() <= HERMITIAN_SHORTCUT * m.max_abs().max(1.0) {
        eigh(m).values.iter().map(|v| v.abs()).sum()
    } else {
        singular_values(m).iter().sum()
    }
}

/// Top eigenvalue of a density matrix with its eigenvector.
pub fn top_eigenpair(rho: &DensityMatrix) -> (f64, PureState) {
    let e = eigh(rho.matrix());
    let v = e.top_vector();
    (e.top_value(), PureState::normalized(v).expect("eigenvector has unit norm"))
}

/// Positive square root of a PSD matrix, clamping negative rounding.
fn psd_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    let e = eigh(m);
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lam) in e.values.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let s = libm::sqrt(lam);
        let v = e.vector(k);
        for i in 0..n {
            let vi = v[i] * s;
            for j in 0..n {
                out[(i, j)] += vi * v[j].conj();
            }
        }
    }
    out
}

/// If `rho` is rank one (to rounding), its state vector.
fn as_pure(rho: &DensityMatrix) -> Option<Vec<Complex64>> {
    let purity: f64 = rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum();
    if purity >= 1.0 - 1e-12 {
        Some(eigh(rho.matrix()).top_vector())
    } else {
        None
    }
}

/// `F(ρ,σ) = tr √(√ρ σ √ρ)`, evaluated as `‖√ρ √σ‖_tr`.
///
/// When either argument is pure the closed form `√⟨ψ|ρ|ψ⟩` is used.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let pure_formula = |psi: &[Complex64], other: &DensityMatrix| {
        let v = other.matrix().mul_vec(psi);
        libm::sqrt(inner(psi, &v).re.max(0.0))
    };
    let f = if let Some(psi) = as_pure(sigma) {
        pure_formula(&psi, rho)
    } else if let Some(psi) = as_pure(rho) {
        pure_formula(&psi, sigma)
    } else {
        let prod = psd_sqrt(rho.matrix()).matmul(&psd_sqrt(sigma.matrix()));
        singular_values(&prod).iter().sum()
    };
    Ok(f.clamp(0.0, 1.0))
}

/// Three equivalent measures of how close a state is to pure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PurityMetrics {
    /// `tr(ρ²)`
    pub purity: f64,
    /// `‖ρ‖∞`, the largest eigenvalue.
    pub opnorm: f64,
    /// `min_ψ ‖ρ − |ψ⟩⟨ψ|‖_tr = 2(1 − ‖ρ‖∞)`, attained at the top eigenvector.
    pub tdist_to_pure: f64,
}

pub fn purity_metrics(rho: &DensityMatrix) -> PurityMetrics {
    let purity = rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum();
    let opnorm = eigh(rho.matrix()).top_value();
    PurityMetrics {
        purity,
        opnorm,
        tdist_to_pure: 2.0 * (1.0 - opnorm),
    }
}

/// The pure state nearest to `rho` in trace distance (its top eigenvector).
pub fn closest_pure_state(rho: &DensityMatrix) -> PureState {
    top_eigenpair(rho).1
}

/// Swap `W|ij⟩ = |ji⟩` on `C^d ⊗ C^d`.
pub fn swap_operator(dim: usize) -> ComplexMatrix {
    let n = dim * dim;
    let mut w = ComplexMatrix::zeros(n, n);
    for i in 0..dim {
        for j in 0..dim {
            w[(j * dim + i, i * dim + j)] = ONE;
        }
    }
    w
}

/// Projectors `((I+W)/2, (I−W)/2)` onto the symmetric and antisymmetric
/// subspaces of `C^d ⊗ C^d`.
pub fn sym_antisym_projectors(dim: usize) -> (ComplexMatrix, ComplexMatrix) {
    let n = dim * dim;
    let w = swap_operator(dim);
    let id = ComplexMatrix::identity(n);
    let sym = (&id + &w).scale_real(0.5);
    let anti = (&id - &w).scale_real(0.5);
    (sym, anti)
}
