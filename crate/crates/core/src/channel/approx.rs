//! Reconstruction of an operator `A` with `Φ(ρ) ≈ AρA†` for channels that
//! are close to an isometry.
//!
//! Column `i` of `A` is `c_i |ψ_i⟩`, where `|ψ_i⟩` is the top eigenvector of
//! `Φ(|i⟩⟨i|)` and the phases `c_i` are aligned against the top singular
//! pair of the off-diagonal images `Φ(|0⟩⟨i|)`, with `c_0 = 1` as gauge.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::ChannelHandle;
use crate::error::{Error, Result};
use crate::linalg::{
    eigh, inner, operator_norm, svd, trace_norm, ComplexMatrix, DensityMatrix, PureState, ONE,
};
use crate::rng::{haar_state, stream_rng};
use crate::tol;

/// Number of seeded random probes used by the diagnostics.
pub const RANDOM_PROBES: usize = 50;

const PROBE_SEED: u64 = 0x150_1a6;

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxIsometryDiagnostics {
    /// `1 − min` extended-output opnorm over the probes `|ii⟩` and `(|ii⟩+|jj⟩)/√2`.
    pub epsilon_measured: f64,
    /// Smallest opnorm of `Φ(|i⟩⟨i|)` over basis inputs.
    pub min_basis_opnorm: f64,
    pub max_distance_basis: f64,
    pub max_distance_superposition: f64,
    pub max_distance_random: f64,
    /// Largest `‖Φ(ρ) − AρA†‖_tr` over all probes; a lower bound on the max over all states.
    pub max_distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxIsometry {
    pub operator: ComplexMatrix,
    pub phases: Vec<Complex64>,
    pub diagnostics: ApproxIsometryDiagnostics,
}

fn basis_operator(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = ONE;
    m
}

fn phase_of(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n < 1e-12 {
        ONE
    } else {
        z / n
    }
}

/// `ε = 1 − min` over the probes `|ii⟩` and `(|ii⟩+|jj⟩)/√2` of the
/// extended output operator norm.
pub fn probe_epsilon(ch: &ChannelHandle) -> Result<f64> {
    let d = ch.dim_in();
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut min_norm = f64::INFINITY;
    for i in 0..d {
        for j in i..d {
            let mut amps = alloc::vec![Complex64::new(0.0, 0.0); d * d];
            if i == j {
                amps[i * d + i] = ONE;
            } else {
                amps[i * d + i] = Complex64::new(s, 0.0);
                amps[j * d + j] = Complex64::new(s, 0.0);
            }
            let psi = PureState::new(amps)?;
            let out = ch.apply_extended_operator(psi.projector().matrix())?;
            min_norm = min_norm.min(operator_norm(&out));
        }
    }
    Ok(1.0 - min_norm)
}

pub fn extract_approx_isometry(ch: &ChannelHandle) -> Result<ApproxIsometry> {
    let d_in = ch.dim_in();
    let d_out = ch.dim_out();

    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(d_in);
    let mut min_basis_opnorm = f64::INFINITY;
    for i in 0..d_in {
        let out = ch.apply_operator(&basis_operator(d_in, i, i))?;
        let e = eigh(&out);
        min_basis_opnorm = min_basis_opnorm.min(e.top_value());
        // At exactly 1/2 the top eigenvector need not be unique.
        if e.top_value() <= 0.5 + tol::STRUCTURAL {
            return Err(Error::NotNearIsometry {
                probe_opnorm: e.top_value(),
            });
        }
        columns.push(e.top_vector());
    }

    let mut phases = alloc::vec![ONE; d_in];
    for i in 1..d_in {
        let x = ch.apply_operator(&basis_operator(d_in, 0, i))?;
        let dec = svd(&x);
        let u = dec.u.column_vec(0);
        let w = dec.v.column_vec(0);
        // Maximize Re tr[(c_i* |ψ_0⟩⟨ψ_i|)† u w†] = Re[c_i ⟨ψ_0|u⟩⟨w|ψ_i⟩].
        let overlap = inner(&columns[0], &u) * inner(&w, &columns[i]);
        phases[i] = phase_of(overlap).conj();
    }

    let operator = ComplexMatrix::from_fn(d_out, d_in, |r, c| phases[c] * columns[c][r]);

    let distance = |rho: &DensityMatrix| -> Result<f64> {
        let actual = ch.apply_operator(rho.matrix())?;
        let approx = operator.conjugate(rho.matrix());
        Ok(trace_norm(&(&actual - &approx)))
    };

    let mut max_distance_basis: f64 = 0.0;
    for i in 0..d_in {
        max_distance_basis = max_distance_basis.max(distance(&DensityMatrix::basis(d_in, i))?);
    }
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut max_distance_superposition: f64 = 0.0;
    for i in 0..d_in {
        for j in i + 1..d_in {
            let mut amps = alloc::vec![Complex64::new(0.0, 0.0); d_in];
            amps[i] = Complex64::new(s, 0.0);
            amps[j] = Complex64::new(s, 0.0);
            let rho = PureState::new(amps)?.projector();
            max_distance_superposition = max_distance_superposition.max(distance(&rho)?);
        }
    }
    let mut max_distance_random: f64 = 0.0;
    for k in 0..RANDOM_PROBES {
        let mut rng = stream_rng(PROBE_SEED, k as u64);
        let rho = haar_state(d_in, &mut rng).projector();
        max_distance_random = max_distance_random.max(distance(&rho)?);
    }

    let diagnostics = ApproxIsometryDiagnostics {
        epsilon_measured: probe_epsilon(ch)?,
        min_basis_opnorm,
        max_distance_basis,
        max_distance_superposition,
        max_distance_random,
        max_distance: max_distance_basis
            .max(max_distance_superposition)
            .max(max_distance_random),
    };
    Ok(ApproxIsometry {
        operator,
        phases,
        diagnostics,
    })
}
