use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::search::{min_output_opnorm_with, OpnormSearch, SearchOptions};
use super::{kraus_from_choi, ChannelHandle};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PureState};
use crate::tol;

/// Outcome of the exact (Choi-rank) isometry criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactIsometry {
    pub choi_rank: usize,
    pub choi_eigenvalues: Vec<f64>,
    /// `choi_rank == 1` and the Kraus operator satisfies `A†A = I` within 1e-9.
    pub exact_isometry: bool,
    /// The leading Kraus operator (the isometry itself when `exact_isometry`).
    pub leading_kraus: ComplexMatrix,
    /// `max |(A†A − I)_ij|` for the leading Kraus operator.
    pub leading_kraus_defect: f64,
}

impl ExactIsometry {
    pub fn isometry_operator(&self) -> Option<&ComplexMatrix> {
        self.exact_isometry.then_some(&self.leading_kraus)
    }
}

/// A channel is an isometry iff its Choi matrix has rank one; the single
/// Kraus operator is then the isometry.
pub fn exact_isometry_test(ch: &ChannelHandle, rank_tol: f64) -> Result<ExactIsometry> {
    let choi = ch.choi()?;
    let choi_eigenvalues = choi.eigenvalues();
    let choi_rank = choi_eigenvalues.iter().filter(|&&v| v > rank_tol).count();
    let kraus = kraus_from_choi(&choi, rank_tol);
    let leading_kraus = kraus.operators()[0].clone();
    let leading_kraus_defect = leading_kraus
        .adjoint()
        .matmul(&leading_kraus)
        .max_abs_diff(&ComplexMatrix::identity(ch.dim_in()));
    Ok(ExactIsometry {
        choi_rank,
        exact_isometry: choi_rank == 1 && leading_kraus_defect <= tol::STRUCTURAL,
        choi_eigenvalues,
        leading_kraus,
        leading_kraus_defect,
    })
}

/// Answer to the promise problem at a given ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Some pure input has extended output opnorm ≤ ε.
    YesInstance,
    /// Every pure input has extended output opnorm ≥ 1 − ε (certified).
    NoInstance,
    /// Neither side could be established.
    Indeterminate,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::YesInstance => "yes-instance",
            Classification::NoInstance => "no-instance",
            Classification::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::OutOfRange(format!("epsilon {epsilon} not in [0, 1/2)")));
    }
    Ok(())
}

/// Classifies from a found minimum and an optional certified lower bound
/// on the true minimum.
///
/// The search value is an upper bound only, so a no-instance requires an
/// external certificate (exact isometry, or a verifier acceptance bound).
pub fn classify_with_lower_bound(
    found_min: f64,
    certified_lower_bound: Option<f64>,
    epsilon: f64,
) -> Result<Classification> {
    check_epsilon(epsilon)?;
    if found_min <= epsilon {
        return Ok(Classification::YesInstance);
    }
    match certified_lower_bound {
        Some(lb) if lb >= 1.0 - epsilon => Ok(Classification::NoInstance),
        _ => Ok(Classification::Indeterminate),
    }
}

/// Full analysis of one channel.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryReport {
    pub epsilon: f64,
    pub exact: ExactIsometry,
    pub search: OpnormSearch,
    pub classification: Classification,
}

impl IsometryReport {
    pub fn choi_rank(&self) -> usize {
        self.exact.choi_rank
    }

    pub fn exact_isometry(&self) -> bool {
        self.exact.exact_isometry
    }

    pub fn min_output_opnorm(&self) -> f64 {
        self.search.value
    }

    pub fn minimizing_state(&self) -> &PureState {
        &self.search.state
    }
}

/// Exact test, worst-case search and classification in one pass.
pub fn analyze(ch: &ChannelHandle, epsilon: f64, opts: &SearchOptions) -> Result<IsometryReport> {
    check_epsilon(epsilon)?;
    let exact = exact_isometry_test(ch, tol::RANK)?;
    let kraus = ch.kraus()?;
    let search = min_output_opnorm_with(&kraus, opts);
    let lower = exact.exact_isometry.then_some(1.0);
    let classification = classify_with_lower_bound(search.value, lower, epsilon)?;
    Ok(IsometryReport {
        epsilon,
        exact,
        search,
        classification,
    })
}

pub fn classify_nonisometry(
    ch: &ChannelHandle,
    epsilon: f64,
    opts: &SearchOptions,
) -> Result<Classification> {
    Ok(analyze(ch, epsilon, opts)?.classification)
}
