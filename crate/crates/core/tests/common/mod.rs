#![allow(dead_code)]

use isolab_core::circuit::{Builtin, ChannelOp, Circuit, Gate};
use isolab_core::reduction::VerifierSpec;
use isolab_core::rng::{haar_unitary, stream_rng, StreamRng};
use rand::seq::SliceRandom;
use rand::Rng;

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

pub fn random_circuit(seed: u64, shape: &CircuitShape) -> Circuit {
    let mut rng = stream_rng(seed, 7);
    let n_in = rng.random_range(1..=shape.max_in);
    let mut c = Circuit::new(n_in);
    let mut n = n_in;
    let gates = rng.random_range(1..=shape.max_gates);
    for _ in 0..gates {
        let kind = rng.random_range(0..if shape.channels { 7 } else { 4 });
        match kind {
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
                    let b = if n >= 2 { Builtin::Cnot } else { Builtin::H };
                    c.push(Gate::builtin(b, &distinct(&mut rng, n, b.arity())));
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
            _ => {
                if n >= 2 {
                    c.push(Gate::channel(ChannelOp::ControlledDepolarize, &distinct(&mut rng, n, 2)));
                }
            }
        }
    }
    c.validate().expect("generated circuit is valid");
    c
}

/// Random unitary-only verifier: at most `max_in` input qubits and one
/// optional extra ancilla gate.
pub fn random_verifier(seed: u64, max_in: usize) -> VerifierSpec {
    let mut rng = stream_rng(seed, 11);
    let n_in = rng.random_range(1..=max_in);
    let mut c = Circuit::new(n_in);
    let mut n = n_in;
    if rng.random_bool(0.3) {
        c.push(Gate::AddAncilla);
        n += 1;
    }
    for _ in 0..rng.random_range(1..=5) {
        let k = rng.random_range(1..=n.min(2));
        let u = haar_unitary(1 << k, &mut rng);
        c.push(Gate::matrix(u, &distinct(&mut rng, n, k)));
    }
    let n_w = rng.random_range(1..=n_in);
    let mut inputs = distinct(&mut rng, n_in, n_in);
    let ancilla = inputs.split_off(n_w);
    let mut witness = inputs;
    witness.sort();
    let mut ancilla = ancilla;
    ancilla.sort();
    let measured = rng.random_range(0..n);
    let garbage: Vec<usize> = (0..n).filter(|&q| q != measured).collect();
    VerifierSpec::new(c, witness, ancilla, measured, garbage).expect("generated verifier is valid")
}
