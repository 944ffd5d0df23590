use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};
use super::spectral::eigh;
use crate::error::{Error, Result};
use crate::tol;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `m` as a density matrix.
    ///
    /// Small eigenvalues in `[-1e-9, 0)` are clamped to zero and the trace is
    /// renormalized to one; anything further out is rejected.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidState(format!(
                "not square ({}x{})",
                m.rows(),
                m.cols()
            )));
        }
        if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = m.hermiticity_defect();
        if defect > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {defect:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURAL || tr.im.abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("trace {} != 1", tr.re)));
        }
        let h = m.hermitian_part();
        let eig = eigh(&h);
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        let matrix = if min < 0.0 {
            let n = h.rows();
            let mut out = ComplexMatrix::zeros(n, n);
            for (k, &lam) in eig.values.iter().enumerate() {
                if lam <= 0.0 {
                    continue;
                }
                let v = eig.vector(k);
                for i in 0..n {
                    let vi = v[i] * lam;
                    for j in 0..n {
                        out[(i, j)] += vi * v[j].conj();
                    }
                }
            }
            out
        } else {
            h
        };
        let tr = matrix.trace().re;
        Ok(Self {
            matrix: matrix.scale_real(1.0 / tr),
        })
    }

    /// Wraps a matrix the caller already knows to be a valid state.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    /// `I/d`
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        PureState::basis(dim, index).projector()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `ρ ⊗ σ`
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_trusted(self.matrix.kron(&other.matrix))
    }

    /// Convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::OutOfRange(format!("mixing weight {w} not in [0,1]")));
        }
        let m = &self.matrix.scale_real(w) + &other.matrix.scale_real(1.0 - w);
        Ok(Self::from_trusted(m))
    }
}

/// Unit vector in a finite-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Accepts amplitudes whose Euclidean norm is within 1e-9 of one.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if !norm.is_finite() || (norm - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::NotNormalized(norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut amplitudes = alloc::vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    /// `Σ_i |ii⟩/√d` on `C^d ⊗ C^d`.
    pub fn maximally_entangled(d: usize) -> Self {
        let mut amplitudes = alloc::vec![ZERO; d * d];
        let s = 1.0 / libm::sqrt(d as f64);
        for i in 0..d {
            amplitudes[i * d + i] = Complex64::new(s, 0.0);
        }
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amplitudes: super::matrix::tensor_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub(crate) fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}
