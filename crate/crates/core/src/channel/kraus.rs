use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::tol;

/// Kraus representation `Φ(X) = Σ A_i X A_i†` of a trace-preserving map.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    dim_in: usize,
    dim_out: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    /// Checks shapes, the operator-count bound and `Σ A†A = I` within 1e-9.
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let set = Self::from_operators(operators)?;
        let defect = set.completeness_defect();
        if defect > tol::STRUCTURAL {
            return Err(Error::InvalidCircuit(format!(
                "not trace preserving (Kraus completeness defect {defect:e})"
            )));
        }
        Ok(set)
    }

    /// Shape checks only; completeness is left to the caller.
    pub fn from_operators(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::Structure("empty Kraus set".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if let Some(bad) = operators
            .iter()
            .find(|a| a.rows() != dim_out || a.cols() != dim_in)
        {
            return Err(Error::Structure(format!(
                "Kraus operator shape {}x{} differs from {}x{}",
                bad.rows(),
                bad.cols(),
                dim_out,
                dim_in
            )));
        }
        if operators.len() > dim_in * dim_out {
            return Err(Error::Structure(format!(
                "{} Kraus operators exceed dim_in*dim_out = {}",
                operators.len(),
                dim_in * dim_out
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            operators,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `max |(Σ A†A − I)_ij|`
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for a in &self.operators {
            sum = &sum + &a.adjoint().matmul(a);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim_in))
    }

    /// `Σ A_i X A_i†` on an arbitrary (not necessarily Hermitian) operator.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                found: x.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for a in &self.operators {
            out = &out + &a.conjugate(x);
        }
        Ok(out)
    }

    /// Adjoint map `Σ A_i† Y A_i`.
    pub fn apply_adjoint(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if y.rows() != self.dim_out || y.cols() != self.dim_out {
            return Err(Error::DimensionMismatch {
                expected: self.dim_out,
                found: y.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for a in &self.operators {
            out = &out + &a.adjoint().matmul(y).matmul(a);
        }
        Ok(out)
    }
}
