//! Spectral kernels. Every spectral quantity in the crate goes through
//! [`eigh`] (Hermitian input) or [`svd`] (general input).

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order; ties keep the solver's
/// original index order. `vectors` holds the matching unit eigenvectors
/// as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn top_value(&self) -> f64 {
        self.values[0]
    }

    pub fn top_vector(&self) -> Vec<Complex64> {
        self.vectors.column_vec(0)
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column_vec(k)
    }
}

/// Singular value decomposition `M = U diag(s) V†`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub values: Vec<f64>,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

fn to_na(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

fn from_na(m: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Stable sort keeps the first index on ties.
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

/// Hermitian eigendecomposition. Only the Hermitian part of `m` is used.
pub fn eigh(m: &ComplexMatrix) -> HermitianEigen {
    assert!(m.is_square(), "eigh requires a square matrix");
    let n = m.rows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        };
    }
    let hp = m.hermitian_part();
    if let Some(e) = try_eigh(&hp) {
        return e;
    }
    // nalgebra's solver can return NaN or inf on sparse inputs with exact
    // zeros. A fixed random unitary similarity removes that structure.
    let u = crate::rng::haar_unitary(n, &mut crate::rng::stream_rng(0x5eed, n as u64));
    let rotated = u.matmul(&hp).matmul(&u.adjoint());
    let e = try_eigh(&rotated.hermitian_part()).expect("eigensolver failed after random similarity");
    HermitianEigen {
        values: e.values,
        vectors: u.adjoint().matmul(&e.vectors),
    }
}

fn try_eigh(h: &ComplexMatrix) -> Option<HermitianEigen> {
    let n = h.rows();
    let eig = to_na(h).symmetric_eigen();
    let finite = eig.eigenvalues.iter().all(|x| x.is_finite())
        && eig.eigenvectors.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite {
        return None;
    }
    let raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = descending_order(&raw);
    let values = order.iter().map(|&k| raw[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Some(HermitianEigen { values, vectors })
}

/// Eigenvalues only, descending.
pub fn eigvalsh(m: &ComplexMatrix) -> Vec<f64> {
    eigh(m).values
}

/// Thin SVD of a general matrix.
pub fn svd(m: &ComplexMatrix) -> Svd {
    let (r, c) = (m.rows(), m.cols());
    if r == 0 || c == 0 {
        return Svd {
            values: Vec::new(),
            u: ComplexMatrix::zeros(r, 0),
            v: ComplexMatrix::zeros(c, 0),
        };
    }
    let dec = to_na(m).svd(true, true);
    let raw: Vec<f64> = dec.singular_values.iter().copied().collect();
    let order = descending_order(&raw);
    let u_full = from_na(dec.u.as_ref().expect("requested U"));
    let vt = from_na(dec.v_t.as_ref().expect("requested V^T"));
    let k = raw.len();
    let u = ComplexMatrix::from_fn(r, k, |i, j| u_full[(i, order[j])]);
    let v = ComplexMatrix::from_fn(c, k, |i, j| vt[(order[j], i)].conj());
    Svd {
        values: order.iter().map(|&j| raw[j]).collect(),
        u,
        v,
    }
}

/// Singular values only, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (r, c) = (m.rows(), m.cols());
    if r == 0 || c == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}
