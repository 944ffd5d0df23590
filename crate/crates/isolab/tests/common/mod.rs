#![allow(dead_code)]

use std::path::PathBuf;

use isolab_core::channel::KrausSet;
use isolab_core::circuit::{Builtin, ChannelOp, Circuit, Gate};
use isolab_core::linalg::ComplexMatrix;
use isolab_core::rng::{haar_unitary, random_isometry, stream_rng, StreamRng};
use isolab_core::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn circuits_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../circuits")
}

pub struct CircuitShape {
    pub max_in: usize,
    pub max_peak: usize,
    pub max_gates: usize,
    pub channels: bool,
}

fn distinct(rng: &mut StreamRng, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k);
    all
}

/// Amplitude damping with random strength.
fn damping(rng: &mut StreamRng) -> KrausSet {
    let g: f64 = rng.random_range(0.05..0.95);
    let c = |x: f64| Complex64::new(x, 0.0);
    let a0 = ComplexMatrix::from_row_major(2, 2, vec![c(1.0), c(0.0), c(0.0), c((1.0 - g).sqrt())]).unwrap();
    let a1 = ComplexMatrix::from_row_major(2, 2, vec![c(0.0), c(g.sqrt()), c(0.0), c(0.0)]).unwrap();
    KrausSet::new(vec![a0, a1]).unwrap()
}

pub fn random_circuit(seed: u64, shape: &CircuitShape) -> Circuit {
    let mut rng = stream_rng(seed, 7);
    let n_in = rng.random_range(1..=shape.max_in);
    let mut c = Circuit::new(n_in);
    let mut n = n_in;
    for _ in 0..rng.random_range(1..=shape.max_gates) {
        match rng.random_range(0..if shape.channels { 8 } else { 4 }) {
            0 => {
                let b = Builtin::ALL[rng.random_range(0..Builtin::ALL.len())];
                if b.arity() <= n {
                    c.push(Gate::builtin(b, &distinct(&mut rng, n, b.arity())));
                }
            }
            1 => {
                let k = rng.random_range(1..=n.min(2));
                let u = haar_unitary(1 << k, &mut rng);
                c.push(Gate::matrix(u, &distinct(&mut rng, n, k)));
            }
            2 | 3 => {
                if n < shape.max_peak {
                    c.push(Gate::AddAncilla);
                    n += 1;
                    c.push(Gate::builtin(Builtin::Cnot, &distinct(&mut rng, n, 2)));
                }
            }
            4 => {
                if n > 1 {
                    c.push(Gate::TraceOut(rng.random_range(0..n)));
                    n -= 1;
                }
            }
            5 => {
                let op = if rng.random_bool(0.5) { ChannelOp::Dephase } else { ChannelOp::Depolarize };
                c.push(Gate::channel(op, &distinct(&mut rng, n, 1)));
            }
            6 => {
                if n >= 2 {
                    let k = rng.random_range(2..=n.min(3));
                    c.push(Gate::channel(ChannelOp::ControlledDepolarize, &distinct(&mut rng, n, k)));
                }
            }
            _ => {
                let op = ChannelOp::Kraus { name: "damp".into(), kraus: damping(&mut rng) };
                c.push(Gate::channel(op, &distinct(&mut rng, n, 1)));
            }
        }
    }
    c.validate().expect("generated circuit is valid");
    c
}

/// Isometry `2^n_in → 2^n_out` as a circuit: ancillas followed by one
/// Haar unitary whose first columns are the isometry.
pub fn isometry_circuit(n_in: usize, n_out: usize, seed: u64) -> (Circuit, ComplexMatrix) {
    let mut rng = stream_rng(seed, 13);
    let iso = random_isometry(1 << n_out, 1 << n_in, &mut rng);
    // Complete to a unitary: the isometry columns sit at inputs |x⟩|0…0⟩.
    let d_out = 1 << n_out;
    let stride = 1 << (n_out - n_in);
    let filler = haar_unitary(d_out, &mut rng);
    let mut cols: Vec<Vec<Complex64>> = vec![Vec::new(); d_out];
    for x in 0..(1 << n_in) {
        cols[x * stride] = iso.column_vec(x);
    }
    let mut pool = (0..d_out).map(|j| filler.column_vec(j));
    for j in 0..d_out {
        if !cols[j].is_empty() {
            continue;
        }
        loop {
            let mut v = pool.next().expect("enough filler columns");
            for c in cols.iter().filter(|c| !c.is_empty()) {
                let o: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= o * y);
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                cols[j] = v.into_iter().map(|z| z / norm).collect();
                break;
            }
        }
    }
    let u = ComplexMatrix::from_fn(d_out, d_out, |i, j| cols[j][i]);
    let mut c = Circuit::new(n_in);
    for _ in n_in..n_out {
        c.push(Gate::AddAncilla);
    }
    c.push(Gate::matrix(u, &(0..n_out).collect::<Vec<_>>()));
    (c, iso)
}

/// Appends `X ↦ (1−δ)X + δ·tr(X)·I/d` on every output qubit.
pub fn depolarize_output(c: &Circuit, delta: f64) -> Circuit {
    let n = c.output_qubits();
    let (s, co) = (delta.sqrt(), (1.0 - delta).sqrt());
    let r = |x: f64| Complex64::new(x, 0.0);
    let ry = ComplexMatrix::from_row_major(2, 2, vec![r(co), r(-s), r(s), r(co)]).unwrap();
    let mut out = c.clone();
    let mut targets = vec![n];
    targets.extend(0..n);
    out.push(Gate::AddAncilla)
        .push(Gate::matrix(ry, &[n]))
        .push(Gate::channel(ChannelOp::ControlledDepolarize, &targets))
        .push(Gate::TraceOut(n));
    out
}
