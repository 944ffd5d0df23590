mod common;

use common::{random_circuit, CircuitShape};
use isolab::{parse_circuit, parse_verifier, serialize_circuit, serialize_verifier};
use isolab_core::reduction::build_instance;
use proptest::prelude::*;

const SHAPE: CircuitShape = CircuitShape { max_in: 4, max_peak: 6, max_gates: 10, channels: true };

#[test]
fn hundred_random_circuits_round_trip() {
    for seed in 0..120 {
        let c = random_circuit(seed, &SHAPE);
        let text = serialize_circuit(&c);
        let back = parse_circuit(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        assert_eq!(back, c, "seed {seed}");
        assert_eq!(serialize_circuit(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_is_a_fixed_point(seed in any::<u64>()) {
        let c = random_circuit(seed, &SHAPE);
        let text = serialize_circuit(&c);
        prop_assert_eq!(serialize_circuit(&parse_circuit(&text).unwrap()), text);
    }
}

#[test]
fn reduction_output_round_trips() {
    for name in ["accept_one", "always_reject", "coin_flip"] {
        let src = std::fs::read_to_string(common::circuits_dir().join(format!("{name}.verifier"))).unwrap();
        let v = parse_verifier(&src).unwrap();
        assert_eq!(parse_verifier(&serialize_verifier(&v)).unwrap(), v);
        for eps in [0.05, 0.3] {
            let inst = build_instance(&v, eps).unwrap();
            let back = parse_circuit(&serialize_circuit(&inst.channel_circuit)).unwrap();
            assert_eq!(back, inst.channel_circuit, "{name} at {eps}");
        }
    }
}

#[test]
fn sample_circuits_parse() {
    for entry in std::fs::read_dir(common::circuits_dir()).unwrap() {
        let path = entry.unwrap().path();
        let src = std::fs::read_to_string(&path).unwrap();
        match path.extension().and_then(|e| e.to_str()) {
            Some("circ") => {
                parse_circuit(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            }
            Some("verifier") => {
                parse_verifier(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            }
            _ => {}
        }
    }
}

#[test]
fn parse_errors_carry_lines() {
    let cases = [
        ("", 1, "missing qubits header"),
        ("qubits 1\ngate FOO 0\n", 2, "unknown gate 'FOO'"),
        ("qubits 1\n\n# note\ngate X 3\n", 4, "out of range"),
        ("qubits 2\ngate CNOT 0 0\n", 2, ""),
        ("qubits 1\numatrix 0 : 1 1 1 1\n", 2, ""),
    ];
    for (src, line, needle) in cases {
        let e = parse_circuit(src).unwrap_err();
        assert_eq!(e.line, line, "{src:?}: {e}");
        assert!(e.message.contains(needle), "{src:?}: {e}");
    }
}
