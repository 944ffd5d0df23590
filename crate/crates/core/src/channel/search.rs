//! Random-restart local search for `min_ψ ‖(Φ ⊗ 1_R)(|ψ⟩⟨ψ|)‖∞`.
//!
//! Each restart starts from a Haar-random state on `H ⊗ R` drawn from its
//! own RNG stream and runs projected gradient descent on the unit sphere.
//! The objective is the top eigenvalue of the extended output; its gradient
//! with respect to `ψ̄` is `2 Σ_a (A_a⊗1)† v v† (A_a⊗1) ψ` for the top
//! eigenvector `v`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{ChannelHandle, KrausSet};
use crate::error::Result;
use crate::linalg::{eigh, inner, vec_norm, ComplexMatrix, PureState, ZERO};
use crate::rng::{haar_state, stream_rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Iteration budget per restart.
    pub max_iters: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            seed: 0,
            max_iters: 2000,
        }
    }
}

impl SearchOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self {
            restarts,
            seed,
            ..Self::default()
        }
    }
}

/// Result of [`min_output_opnorm`].
#[derive(Clone, Debug, PartialEq)]
pub struct OpnormSearch {
    /// Smallest objective value found; an upper bound on the true minimum.
    pub value: f64,
    /// State on `H ⊗ R` attaining `value`.
    pub state: PureState,
    /// Final objective value of every restart, in restart order.
    pub per_restart: Vec<f64>,
    /// Index of the restart that produced `value` (first on ties).
    pub best_restart: usize,
}

/// Stop once a step improves the objective by less than this.
const IMPROVEMENT_TOL: f64 = 1e-10;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;
const MAX_STEP: f64 = 4.0;

/// Extended-channel evaluator built from a Kraus set.
struct Extended<'a> {
    kraus: &'a KrausSet,
    dim_ref: usize,
}

impl Extended<'_> {
    /// `φ_a = (A_a ⊗ 1_R) ψ` for every Kraus operator.
    fn branches(&self, psi: &[Complex64]) -> Vec<Vec<Complex64>> {
        let (d_out, d_in, r) = (self.kraus.dim_out(), self.kraus.dim_in(), self.dim_ref);
        self.kraus
            .operators()
            .iter()
            .map(|a| {
                let mut phi = vec![ZERO; d_out * r];
                for k in 0..d_out {
                    let row = a.row(k);
                    for (h, &akh) in row.iter().enumerate().take(d_in) {
                        if akh == ZERO {
                            continue;
                        }
                        for rr in 0..r {
                            phi[k * r + rr] += akh * psi[h * r + rr];
                        }
                    }
                }
                phi
            })
            .collect()
    }

    fn output(&self, branches: &[Vec<Complex64>]) -> ComplexMatrix {
        let n = self.kraus.dim_out() * self.dim_ref;
        let mut out = ComplexMatrix::zeros(n, n);
        for phi in branches {
            out = &out + &ComplexMatrix::outer(phi, phi);
        }
        out
    }

    /// Objective value, top eigenvector and branch vectors at `psi`.
    ///
    /// With fewer branches than output dimensions the top eigenpair comes
    /// from the Gram matrix `G_ab = ⟨φ_a|φ_b⟩`: if `G u = λ u` then
    /// `Σ_a u_a φ_a / √λ` is a unit eigenvector of the output.
    fn evaluate(&self, psi: &[Complex64]) -> (f64, Vec<Complex64>, Vec<Vec<Complex64>>) {
        let branches = self.branches(psi);
        let n = self.kraus.dim_out() * self.dim_ref;
        if branches.len() >= n {
            let e = eigh(&self.output(&branches));
            return (e.top_value(), e.top_vector(), branches);
        }
        let k = branches.len();
        let gram = ComplexMatrix::from_fn(k, k, |a, b| inner(&branches[a], &branches[b]));
        let e = eigh(&gram);
        let lambda = e.top_value();
        let u = e.top_vector();
        let mut v = vec![ZERO; n];
        for (ua, phi) in u.iter().zip(&branches) {
            for (x, y) in v.iter_mut().zip(phi) {
                *x += ua * y;
            }
        }
        let norm = vec_norm(&v);
        if norm > 0.0 {
            v.iter_mut().for_each(|z| *z /= norm);
        }
        (lambda, v, branches)
    }

    fn value(&self, psi: &[Complex64]) -> f64 {
        self.evaluate(psi).0
    }

    /// `2 Σ_a (A_a⊗1)† v ⟨v|φ_a⟩`
    fn gradient(&self, v: &[Complex64], branches: &[Vec<Complex64>]) -> Vec<Complex64> {
        let (d_out, d_in, r) = (self.kraus.dim_out(), self.kraus.dim_in(), self.dim_ref);
        let mut g = vec![ZERO; d_in * r];
        for (a, phi) in self.kraus.operators().iter().zip(branches) {
            let w = inner(v, phi) * 2.0;
            for k in 0..d_out {
                let row = a.row(k);
                for (h, &akh) in row.iter().enumerate().take(d_in) {
                    if akh == ZERO {
                        continue;
                    }
                    let c = akh.conj() * w;
                    for rr in 0..r {
                        g[h * r + rr] += c * v[k * r + rr];
                    }
                }
            }
        }
        g
    }
}

fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let n = vec_norm(&v);
    for z in &mut v {
        *z /= n;
    }
    v
}

/// One projected-gradient descent run from `start`.
fn descend(ext: &Extended<'_>, start: Vec<Complex64>, max_iters: usize) -> (f64, Vec<Complex64>) {
    let mut psi = start;
    let (mut f, mut v, mut branches) = ext.evaluate(&psi);
    let mut step = 1.0;
    for _ in 0..max_iters {
        let g = ext.gradient(&v, &branches);
        // Riemannian gradient: drop the radial component.
        let radial = inner(&psi, &g).re;
        let tangent: Vec<Complex64> = g.iter().zip(&psi).map(|(&gi, &pi)| gi - pi * radial).collect();
        let gnorm2: f64 = tangent.iter().map(|z| z.norm_sqr()).sum();
        if gnorm2 < 1e-24 {
            break;
        }
        let mut accepted = None;
        while step >= MIN_STEP {
            let cand = normalize(psi.iter().zip(&tangent).map(|(&p, &t)| p - t * step).collect());
            let fc = ext.value(&cand);
            if fc <= f - ARMIJO * step * gnorm2 {
                accepted = Some((cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc)) = accepted else { break };
        let improvement = f - fc;
        psi = cand;
        (f, v, branches) = ext.evaluate(&psi);
        if improvement < IMPROVEMENT_TOL {
            break;
        }
        step = (step * 2.0).min(MAX_STEP);
    }
    (f, psi)
}

/// `(Φ ⊗ 1_R)(|ψ⟩⟨ψ|)` evaluated through a Kraus set.
pub fn extended_output(kraus: &KrausSet, psi: &PureState) -> ComplexMatrix {
    let ext = Extended {
        kraus,
        dim_ref: kraus.dim_in(),
    };
    ext.output(&ext.branches(psi.amplitudes()))
}

/// Smallest extended-output operator norm found over seeded restarts.
pub fn min_output_opnorm(ch: &ChannelHandle, opts: &SearchOptions) -> Result<OpnormSearch> {
    let kraus = ch.kraus()?;
    Ok(min_output_opnorm_with(&kraus, opts))
}

/// Same as [`min_output_opnorm`] for a precomputed Kraus set.
pub fn min_output_opnorm_with(kraus: &KrausSet, opts: &SearchOptions) -> OpnormSearch {
    let ext = Extended {
        kraus,
        dim_ref: kraus.dim_in(),
    };
    let dim = kraus.dim_in() * kraus.dim_in();
    let runs: Vec<(f64, Vec<Complex64>)> = (0..opts.restarts.max(1))
        .map(|i| {
            let mut rng = stream_rng(opts.seed, i as u64);
            let start = haar_state(dim, &mut rng).into_amplitudes();
            descend(&ext, start, opts.max_iters)
        })
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.0 < runs[best].0 {
            best = i;
        }
    }
    let per_restart = runs.iter().map(|r| r.0).collect();
    let (value, psi) = runs.into_iter().nth(best).expect("at least one restart");
    OpnormSearch {
        value,
        state: PureState::normalized(psi).expect("descent keeps unit norm"),
        per_restart,
        best_restart: best,
    }
}
