use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// `|u⟩⟨v|`
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Matrix with a single column.
    pub fn column(v: &[Complex64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column_vec(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `self * x * self†`
    pub fn conjugate(&self, x: &Self) -> Self {
        self.matmul(x).matmul(&self.adjoint())
    }

    /// Kronecker product `self ⊗ rhs` with factor `self` in the leading slot.
    pub fn kron(&self, rhs: &Self) -> Self {
        tensor(self, rhs)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(X + X†)/2`
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Embeds a vector `v` of length `rows*cols` as a matrix (row-major reshape).
    pub fn reshape(v: &[Complex64], rows: usize, cols: usize) -> Result<Self> {
        Self::from_row_major(rows, cols, v.to_vec())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product: `(a⊗b)[i·rb+k, j·cb+l] = a[i,j]·b[k,l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    let oc = ca * cb;
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.data[i * ca + j];
            if aij == ZERO {
                continue;
            }
            for k in 0..rb {
                let base = (i * rb + k) * oc + j * cb;
                for l in 0..cb {
                    out.data[base + l] = aij * b.data[k * cb + l];
                }
            }
        }
    }
    out
}

/// Kronecker product of vectors.
pub fn tensor_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        out.extend(b.iter().map(|&y| x * y));
    }
    out
}

/// Row-major strides of a factor-dimension list (factor 0 is the leading, slowest index).
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Flat offsets of every multi-index over the selected factors, enumerated in
/// row-major order of the selection.
fn offsets(dims: &[usize], strides: &[usize], factors: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &f in factors {
        let mut next = Vec::with_capacity(out.len() * dims[f]);
        for &base in &out {
            for d in 0..dims[f] {
                next.push(base + d * strides[f]);
            }
        }
        out = next;
    }
    out
}

/// Partial trace keeping the factors in `keep` (in ascending factor order).
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.rows,
        });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::Structure(alloc::format!(
            "factor index {bad} out of range for {} factors",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let st = strides(dims);
    let kept_off = offsets(dims, &st, &kept);
    let traced_off = offsets(dims, &st, &traced);
    let n = kept_off.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (a, &ra) in kept_off.iter().enumerate() {
        for (b, &cb) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += m.data[(ra + t) * total + cb + t];
            }
            out.data[a * n + b] = acc;
        }
    }
    Ok(out)
}

/// Reorders tensor factors: output factor `k` is input factor `perm[k]`.
pub fn permute_factors(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows != total || perm.len() != dims.len() {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.rows,
        });
    }
    let map = permutation_map(dims, perm)?;
    let mut out = ComplexMatrix::zeros(total, total);
    for (i, &si) in map.iter().enumerate() {
        for (j, &sj) in map.iter().enumerate() {
            out.data[i * total + j] = m.data[si * total + sj];
        }
    }
    Ok(out)
}

/// For each output flat index, the input flat index it is read from.
pub(crate) fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; dims.len()];
    for &p in perm {
        if p >= dims.len() || seen[p] {
            return Err(Error::Structure(alloc::format!("invalid factor permutation {perm:?}")));
        }
        seen[p] = true;
    }
    let in_strides = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let sel_strides: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
    // Enumerate output indices in row-major order of new_dims.
    let mut map = vec![0usize];
    for (k, &d) in new_dims.iter().enumerate() {
        let mut next = Vec::with_capacity(map.len() * d);
        for &base in &map {
            for x in 0..d {
                next.push(base + x * sel_strides[k]);
            }
        }
        map = next;
    }
    Ok(map)
}
