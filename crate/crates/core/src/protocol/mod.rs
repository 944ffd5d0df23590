//! The two-swap-test verification protocol.
//!
//! A witness `ρ` on `(H⊗R)^⊗2` is swap-tested; on the symmetric outcome the
//! renormalized projection is sent through `(Φ⊗1_R)^⊗2` and swap-tested
//! again. The verifier accepts when the first test is symmetric and the
//! second antisymmetric.
//! An isometry maps the projected symmetric witness to a symmetric state,
//! so it is never accepted.

mod swap;

use alloc::vec::Vec;

use rand::Rng;

pub use swap::{swap_test, SwapTestOutcome};

use crate::channel::{
    exact_isometry_test, min_output_opnorm_with, probe_epsilon, ChannelHandle, SearchOptions,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, PureState};
use crate::rng::{haar_state, stream_rng};
use crate::tol;

/// A witness on `(H⊗R)^⊗2` with `dim R = dim H = dim_in`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessState {
    state: DensityMatrix,
    dim_in: usize,
}

impl WitnessState {
    pub fn new(state: DensityMatrix, dim_in: usize) -> Result<Self> {
        let expected = dim_in * dim_in * dim_in * dim_in;
        if state.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: state.dim(),
            });
        }
        Ok(Self { state, dim_in })
    }

    /// `|ψ⟩⟨ψ| ⊗ |ψ⟩⟨ψ|`
    pub fn product(psi: &PureState, dim_in: usize) -> Result<Self> {
        let expected = dim_in * dim_in;
        if psi.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: psi.dim(),
            });
        }
        let p = psi.projector();
        Self::new(p.tensor(&p), dim_in)
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }
}

/// Two copies of `|ψ⟩⟨ψ|` for `ψ` on `H ⊗ R`.
pub fn honest_witness(ch: &ChannelHandle, psi: &PureState) -> Result<WitnessState> {
    WitnessState::product(psi, ch.dim_in())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShotStats {
    pub n: u64,
    pub accepts: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolResult {
    pub p_step1_symmetric: f64,
    /// Zero when step 1 is symmetric with probability below 1e-12.
    pub p_step3_antisymmetric_given_step1: f64,
    pub p_accept: f64,
    pub shots: Option<ShotStats>,
}

impl ProtocolResult {
    pub fn accept_frequency(&self) -> Option<f64> {
        self.shots.map(|s| s.accepts as f64 / s.n as f64)
    }
}

fn check_witness(ch: &ChannelHandle, w: &WitnessState) -> Result<()> {
    if w.dim_in != ch.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_in(),
            found: w.dim_in,
        });
    }
    let (d_in, d_out) = (ch.dim_in(), ch.dim_out());
    let first = ch.extended_peak_dim() * d_in * d_in;
    let second = ch.extended_peak_dim() * d_out * d_in;
    ch.check_cap(first.max(second))
}

/// `(Φ⊗1_R)^⊗2` on an operator over `H⊗R⊗H⊗R`.
fn apply_twice(ch: &ChannelHandle, x: ComplexMatrix) -> ComplexMatrix {
    let (d_in, d_out) = (ch.dim_in(), ch.dim_out());
    let c = ch.circuit();
    let x = c.run(x, 1, d_in * d_in * d_in);
    c.run(x, d_out * d_in, d_in)
}

/// Exact outcome probabilities of the protocol.
pub fn run_protocol_exact(ch: &ChannelHandle, w: &WitnessState) -> Result<ProtocolResult> {
    check_witness(ch, w)?;
    let first = swap_test(&w.state)?;
    let p1 = first.p_symmetric;
    let p3 = match first.post_symmetric {
        None => 0.0,
        Some(post) => {
            let sigma = apply_twice(ch, post.into_matrix());
            let d = ch.dim_out() * ch.dim_in();
            ((1.0 - swap::swap_expectation(&sigma, d)) * 0.5).clamp(0.0, 1.0)
        }
    };
    Ok(ProtocolResult {
        p_step1_symmetric: p1,
        p_step3_antisymmetric_given_step1: p3,
        p_accept: p1 * p3,
        shots: None,
    })
}

/// Shots drawn from one RNG stream; stream `k` covers shots
/// `[k·SHOTS_PER_STREAM, (k+1)·SHOTS_PER_STREAM)`.
pub const SHOTS_PER_STREAM: u64 = 1 << 14;

/// Monte Carlo run of the protocol: each shot draws the step-1 outcome and,
/// if symmetric, the step-3 outcome from the exact conditional distribution.
pub fn run_protocol_sampled(
    ch: &ChannelHandle,
    w: &WitnessState,
    shots: u64,
    seed: u64,
) -> Result<ProtocolResult> {
    if shots == 0 {
        return Err(Error::OutOfRange("shots must be at least 1".into()));
    }
    let exact = run_protocol_exact(ch, w)?;
    let p1 = exact.p_step1_symmetric;
    let p3 = exact.p_step3_antisymmetric_given_step1;
    let streams = shots.div_ceil(SHOTS_PER_STREAM);
    let accepts = (0..streams)
        .map(|k| {
            let n = SHOTS_PER_STREAM.min(shots - k * SHOTS_PER_STREAM);
            let mut rng = stream_rng(seed, k);
            (0..n)
                .filter(|_| rng.random_bool(p1) && rng.random_bool(p3))
                .count() as u64
        })
        .sum();
    Ok(ProtocolResult {
        shots: Some(ShotStats {
            n: shots,
            accepts,
            seed,
        }),
        ..exact
    })
}

/// Seeded witnesses for the soundness side: `random` Haar states on
/// `(H⊗R)^⊗2` projected onto the symmetric subspace, followed by
/// `|k⟩⟨k|^⊗2` for every basis state `|k⟩` of `H⊗R`.
pub fn symmetric_witness_family(dim_in: usize, random: usize, seed: u64) -> Result<Vec<WitnessState>> {
    let d = dim_in * dim_in;
    let mut family = Vec::with_capacity(random + d);
    let mut k = 0u64;
    while family.len() < random {
        let mut rng = stream_rng(seed, k);
        k += 1;
        let psi = haar_state(d * d, &mut rng).projector();
        let sym = swap::project(psi.matrix(), d, 1.0);
        let p = sym.trace().re;
        if p < tol::NEGLIGIBLE_PROBABILITY {
            continue;
        }
        let state = DensityMatrix::new(sym.scale_real(1.0 / p))?;
        family.push(WitnessState::new(state, dim_in)?);
    }
    for b in 0..d {
        family.push(WitnessState::product(&PureState::basis(d, b), dim_in)?);
    }
    Ok(family)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundsOptions {
    /// Search used to pick the honest witness.
    pub search: SearchOptions,
    /// Number of random symmetric witnesses in the soundness family.
    pub family_random: usize,
    pub family_seed: u64,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        Self {
            search: SearchOptions::default(),
            family_random: 20,
            family_seed: 0,
        }
    }
}

/// Completeness side: the honest witness built from the search minimizer.
#[derive(Clone, Debug, PartialEq)]
pub struct YesSide {
    pub epsilon_found: f64,
    /// `epsilon_found ≤ ε`
    pub applicable: bool,
    pub p_accept: f64,
    /// `(1 − epsilon_found)/2`
    pub bound: f64,
    pub holds: bool,
    pub psi: PureState,
}

/// Soundness side, checked on a finite witness family only.
#[derive(Clone, Debug, PartialEq)]
pub struct NoSide {
    pub exact_isometry: bool,
    /// `1 −` the smallest probe opnorm; see [`probe_epsilon`].
    pub epsilon_measured: f64,
    /// `0` for exact isometries, `9·epsilon_measured` otherwise.
    pub bound: f64,
    pub p_accept: Vec<f64>,
    pub max_p_accept: f64,
    pub holds: bool,
    pub evidence: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub epsilon: f64,
    /// `ε < 1/19`, where the two acceptance bounds are separated.
    pub meaningful_gap: bool,
    pub yes: YesSide,
    pub no: NoSide,
}

/// Evaluates both acceptance bounds of the protocol on one channel.
///
/// Yes side: `p ≥ (1 − ε_found)/2 − 1e-6` for the honest witness on the
/// search minimizer. No side: `p = 0` (within 1e-9) for exact isometries,
/// otherwise `p ≤ 9·ε_measured + 1e-6` over [`symmetric_witness_family`].
pub fn protocol_bounds_check(
    ch: &ChannelHandle,
    epsilon: f64,
    opts: &BoundsOptions,
) -> Result<BoundsReport> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::OutOfRange(alloc::format!(
            "epsilon {epsilon} not in (0, 1/2)"
        )));
    }
    let kraus = ch.kraus()?;
    let search = min_output_opnorm_with(&kraus, &opts.search);
    let honest = run_protocol_exact(ch, &honest_witness(ch, &search.state)?)?;
    let bound = (1.0 - search.value) * 0.5;
    let yes = YesSide {
        epsilon_found: search.value,
        applicable: search.value <= epsilon,
        p_accept: honest.p_accept,
        bound,
        holds: honest.p_accept >= bound - 1e-6,
        psi: search.state,
    };

    let exact_isometry = exact_isometry_test(ch, tol::RANK)?.exact_isometry;
    let epsilon_measured = probe_epsilon(ch)?;
    let family = symmetric_witness_family(ch.dim_in(), opts.family_random, opts.family_seed)?;
    let p_accept = family
        .iter()
        .map(|w| run_protocol_exact(ch, w).map(|r| r.p_accept))
        .collect::<Result<Vec<f64>>>()?;
    let max_p_accept = p_accept.iter().copied().fold(0.0, f64::max);
    let (bound, slack) = if exact_isometry {
        (0.0, tol::STRUCTURAL)
    } else {
        (9.0 * epsilon_measured, 1e-6)
    };
    let no = NoSide {
        exact_isometry,
        epsilon_measured,
        bound,
        max_p_accept,
        holds: max_p_accept <= bound + slack,
        p_accept,
        evidence: "sampled evidence",
    };
    Ok(BoundsReport {
        epsilon,
        meaningful_gap: epsilon < 1.0 / 19.0,
        yes,
        no,
    })
}
