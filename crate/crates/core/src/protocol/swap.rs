use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::tol;

/// Outcome distribution and post-measurement states of the swap test.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapTestOutcome {
    pub p_symmetric: f64,
    pub p_antisymmetric: f64,
    /// `P₊ρP₊ / p₊`, or `None` when `p₊ < 1e-12`.
    pub post_symmetric: Option<DensityMatrix>,
    /// `P₋ρP₋ / p₋`, or `None` when `p₋ < 1e-12`.
    pub post_antisymmetric: Option<DensityMatrix>,
}

/// Side length `d` of a `d² × d²` operator on `X ⊗ X`.
pub(crate) fn factor_dim(m: &ComplexMatrix) -> Result<usize> {
    let n = m.rows();
    let d = libm::round(libm::sqrt(n as f64)) as usize;
    if !m.is_square() || d * d != n {
        return Err(Error::Structure(format!(
            "swap test needs a square bipartition, got dimension {n}"
        )));
    }
    Ok(d)
}

/// Flat index map of the swap `|ij⟩ ↦ |ji⟩`.
fn swap_map(d: usize) -> Vec<usize> {
    (0..d * d).map(|k| (k % d) * d + k / d).collect()
}

/// `tr(W ρ)`
pub(crate) fn swap_expectation(rho: &ComplexMatrix, d: usize) -> f64 {
    let n = d * d;
    let data = rho.as_slice();
    swap_map(d)
        .iter()
        .enumerate()
        .map(|(k, &sk)| data[sk * n + k].re)
        .sum()
}

/// `P ρ P` with `P = (I + sign·W)/2`, using index permutations.
pub(crate) fn project(rho: &ComplexMatrix, d: usize, sign: f64) -> ComplexMatrix {
    let n = d * d;
    let map = swap_map(d);
    let src = rho.as_slice();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let (si, sj) = (map[i], map[j]);
        (src[i * n + j] + (src[si * n + j] + src[i * n + sj]) * sign + src[si * n + sj]) * 0.25
    })
}

/// Two-outcome measurement `{(I+W)/2, (I−W)/2}` on `X ⊗ X`.
pub fn swap_test(rho: &DensityMatrix) -> Result<SwapTestOutcome> {
    let m = rho.matrix();
    let d = factor_dim(m)?;
    let w = swap_expectation(m, d);
    let p_symmetric = ((1.0 + w) * 0.5).clamp(0.0, 1.0);
    let p_antisymmetric = ((1.0 - w) * 0.5).clamp(0.0, 1.0);
    let post = |sign: f64, p: f64| {
        (p >= tol::NEGLIGIBLE_PROBABILITY).then(|| {
            DensityMatrix::from_trusted(project(m, d, sign).hermitian_part().scale_real(1.0 / p))
        })
    };
    Ok(SwapTestOutcome {
        p_symmetric,
        p_antisymmetric,
        post_symmetric: post(1.0, p_symmetric),
        post_antisymmetric: post(-1.0, p_antisymmetric),
    })
}
