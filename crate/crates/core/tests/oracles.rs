//! Library results checked against independent, deliberately naive
//! implementations.

use isolab_core::channel::{
    kraus_from_choi, min_output_opnorm, ChannelHandle, ChoiMatrix, SearchOptions,
};
use isolab_core::circuit::{depolarizing_kraus, Builtin, ChannelOp, Circuit, Gate};
use isolab_core::linalg::{
    operator_norm, partial_trace, tensor, trace_norm, ComplexMatrix, DensityMatrix, PureState,
};
use isolab_core::rng::{haar_state, haar_unitary, random_density, stream_rng};
use isolab_core::{tol, Complex64};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Partial trace by explicit multi-index summation.
fn naive_partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> ComplexMatrix {
    let n = dims.len();
    let total: usize = dims.iter().product();
    let kept: usize = keep.iter().map(|&k| dims[k]).product();
    let digits = |mut x: usize| {
        let mut d = vec![0; n];
        for f in (0..n).rev() {
            d[f] = x % dims[f];
            x /= dims[f];
        }
        d
    };
    let kept_index = |d: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
    let mut out = ComplexMatrix::zeros(kept, kept);
    for r in 0..total {
        let dr = digits(r);
        for col in 0..total {
            let dc = digits(col);
            let traced_equal = (0..n).filter(|f| !keep.contains(f)).all(|f| dr[f] == dc[f]);
            if traced_equal {
                out[(kept_index(&dr), kept_index(&dc))] += m[(r, col)];
            }
        }
    }
    out
}

/// Largest singular value by power iteration on `M†M`.
fn power_iteration_opnorm(m: &ComplexMatrix) -> f64 {
    let g = m.adjoint().matmul(m);
    let n = g.cols();
    let mut v: Vec<Complex64> = (0..n).map(|k| c(1.0 + k as f64 * 0.37, 0.1 * k as f64)).collect();
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let w = g.mul_vec(&v);
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next: Vec<Complex64> = w.iter().map(|z| z / norm).collect();
        let delta: f64 = (norm - lambda).abs();
        lambda = norm;
        v = next;
        if delta < 1e-15 * norm.max(1.0) {
            break;
        }
    }
    lambda.sqrt()
}

/// Singular values by one-sided (Hestenes) Jacobi rotations.
fn jacobi_singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column_vec(j)).collect();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = (0..rows).map(|k| a[p][k].conj() * a[q][k]).sum();
                let g = gamma.norm();
                if g <= 1e-300 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                off = off.max(g / (alpha * beta).sqrt());
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let (left, right) = a.split_at_mut(q);
                for (xp, xq) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (ap, aq) = (*xp, *xq * phase.conj());
                    *xp = ap * cs - aq * sn;
                    *xq = (ap * sn + aq * cs) * phase;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut s: Vec<f64> = a
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = stream_rng(seed, 0);
    let v = haar_state(rows * cols, &mut rng);
    ComplexMatrix::from_row_major(rows, cols, v.into_amplitudes()).unwrap()
}

fn random_hermitian(d: usize, seed: u64) -> ComplexMatrix {
    let a = random_matrix(d, d, seed);
    (&a + &a.adjoint()).scale_real(0.5)
}

#[test]
fn partial_trace_matches_nested_loops() {
    for seed in 0..6 {
        let dims = [2, 3, 2];
        let rho = random_density(12, 12, &mut stream_rng(seed, 1));
        for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
            let fast = partial_trace(rho.matrix(), &dims, &keep).unwrap();
            let slow = naive_partial_trace(rho.matrix(), &dims, &keep);
            assert!(fast.max_abs_diff(&slow) < 1e-12, "keep {keep:?}");
        }
    }
}

#[test]
fn tensor_then_trace_gives_scaled_factor() {
    let a = random_matrix(2, 2, 3);
    let b = random_matrix(2, 2, 4);
    let t = partial_trace(&tensor(&a, &b), &[2, 2], &[0]).unwrap();
    assert!(t.max_abs_diff(&a.scale(b.trace())) < 1e-12);
}

#[test]
fn operator_norm_matches_power_iteration() {
    for seed in 0..10 {
        let d = 2 + (seed as usize % 5);
        let h = random_hermitian(d, 100 + seed);
        let lib = operator_norm(&h);
        let oracle = power_iteration_opnorm(&h);
        assert!((lib - oracle).abs() < 1e-9, "{lib} vs {oracle}");
        let g = random_matrix(d, d + 1, 200 + seed);
        assert!((operator_norm(&g) - power_iteration_opnorm(&g)).abs() < 1e-9);
    }
}

#[test]
fn trace_norm_matches_jacobi_svd() {
    for seed in 0..20 {
        let d = 2 + (seed as usize % 4);
        let mut rng = stream_rng(300 + seed, 0);
        let rho = random_density(d, d, &mut rng);
        let psi = haar_state(d, &mut rng);
        let diff = rho.matrix() - psi.projector().matrix();
        let oracle: f64 = jacobi_singular_values(&diff).iter().sum();
        assert!((trace_norm(&diff) - oracle).abs() < 1e-9);
        let g = random_matrix(d, d, 400 + seed);
        let oracle: f64 = jacobi_singular_values(&g).iter().sum();
        assert!((trace_norm(&g) - oracle).abs() < 1e-9);
    }
}

fn noisy_circuit() -> Circuit {
    let mut rng = stream_rng(9, 0);
    let mut c = Circuit::new(2);
    c.push(Gate::matrix(haar_unitary(4, &mut rng), &[0, 1]))
        .push(Gate::AddAncilla)
        .push(Gate::builtin(Builtin::Cnot, &[1, 2]))
        .push(Gate::channel(ChannelOp::Dephase, &[0]))
        .push(Gate::builtin(Builtin::H, &[2]))
        .push(Gate::TraceOut(1));
    c
}

/// `Σ_ij Φ(|i⟩⟨j|) ⊗ |i⟩⟨j| / d`
fn choi_by_definition(ch: &ChannelHandle) -> ComplexMatrix {
    let d = ch.dim_in();
    let mut out = ComplexMatrix::zeros(ch.dim_out() * d, ch.dim_out() * d);
    for i in 0..d {
        for j in 0..d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(i, j)] = c(1.0, 0.0);
            let term = tensor(&ch.apply_operator(&e).unwrap(), &e).scale_real(1.0 / d as f64);
            out = &out + &term;
        }
    }
    out
}

#[test]
fn choi_matches_definition() {
    let ch = ChannelHandle::new(noisy_circuit()).unwrap();
    let choi = ChoiMatrix::of(&ch).unwrap();
    assert!(choi.matrix().matrix().max_abs_diff(&choi_by_definition(&ch)) < 1e-12);
}

#[test]
fn kraus_reconstructs_channel_on_matrix_units() {
    let ch = ChannelHandle::new(noisy_circuit()).unwrap();
    let kraus = kraus_from_choi(&ch.choi().unwrap(), tol::RANK);
    let d = ch.dim_in();
    for i in 0..d {
        for j in 0..d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(i, j)] = c(1.0, 0.0);
            let lhs = kraus.apply(&e).unwrap();
            assert!(lhs.max_abs_diff(&ch.apply_operator(&e).unwrap()) < 1e-8);
        }
    }
}

#[test]
fn omega_kraus_entries_have_magnitude_one_over_root_two() {
    let kraus = depolarizing_kraus(2);
    assert_eq!(kraus.len(), 4);
    for a in kraus.operators() {
        let nonzero: Vec<f64> = a.as_slice().iter().map(|z| z.norm()).filter(|&x| x > 1e-12).collect();
        assert_eq!(nonzero.len(), 1);
        assert!((nonzero[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }
    assert!(kraus.completeness_defect() < 1e-12);
    let from_circuit = {
        let mut c1 = Circuit::new(1);
        c1.push(Gate::channel(ChannelOp::Depolarize, &[0]));
        ChannelHandle::new(c1).unwrap().kraus().unwrap()
    };
    assert_eq!(from_circuit.len(), 4);
}

/// Smallest extended-output opnorm over Haar-random samples: an upper bound
/// on the true minimum that a working search must match or beat.
fn haar_sampling_min(ch: &ChannelHandle, samples: usize, seed: u64) -> f64 {
    let kraus = ch.kraus().unwrap();
    let d = ch.dim_in() * ch.dim_in();
    let mut rng = stream_rng(seed, 0);
    (0..samples)
        .map(|_| {
            let psi = haar_state(d, &mut rng);
            operator_norm(&isolab_core::channel::extended_output(&kraus, &psi))
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn reset_minimum_against_haar_sampling() {
    let mut c1 = Circuit::new(1);
    c1.push(Gate::AddAncilla).push(Gate::TraceOut(0));
    let ch = ChannelHandle::new(c1).unwrap();
    let brute = haar_sampling_min(&ch, 100_000, 1);
    let found = min_output_opnorm(&ch, &SearchOptions::new(8, 0)).unwrap().value;
    assert!(brute >= 0.5 - 1e-12);
    assert!(found <= brute + 1e-12);
    assert!((found - 0.5).abs() < 1e-3);
}

#[test]
fn omega_extended_output_on_bell_state() {
    let mut c1 = Circuit::new(1);
    c1.push(Gate::channel(ChannelOp::Depolarize, &[0]));
    let ch = ChannelHandle::new(c1).unwrap();
    let out = ch.apply_extended(&PureState::maximally_entangled(2)).unwrap();
    assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(4).matrix()) < 1e-12);
}
