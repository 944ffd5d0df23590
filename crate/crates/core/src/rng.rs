//! Seeded random states and unitaries.
//!
//! Every randomized routine derives its generator from `(seed, stream)`, so
//! the i-th restart or sample depends only on the seed and its own index.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, DensityMatrix, PureState};

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state (normalized complex Gaussian vector).
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        if let Ok(s) = PureState::normalized(v) {
            return s;
        }
    }
}

/// Random density matrix `G G† / tr(G G†)` with `G` a `dim × rank` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, rank.max(1), |_, _| complex_gaussian(rng));
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).expect("Ginibre product is a valid state")
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let proj = crate::linalg::inner(c, &v);
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= proj * y;
                }
            }
        }
        let n = crate::linalg::vec_norm(&v);
        if n > 1e-8 {
            cols.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random isometry `C^{dim_in} → C^{dim_out}`: the first `dim_in` columns of a Haar unitary.
pub fn random_isometry<R: Rng + ?Sized>(dim_out: usize, dim_in: usize, rng: &mut R) -> ComplexMatrix {
    let u = haar_unitary(dim_out, rng);
    ComplexMatrix::from_fn(dim_out, dim_in, |i, j| u[(i, j)])
}
