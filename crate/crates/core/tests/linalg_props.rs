use isolab_core::linalg::{
    fidelity, purity_metrics, top_eigenpair, trace_norm, DensityMatrix, PureState,
};
use isolab_core::rng::{haar_state, random_density, stream_rng};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 3, 4, 8])
}

fn state(d: usize, seed: u64) -> DensityMatrix {
    let mut rng = stream_rng(seed, 0);
    let rank = 1 + (seed as usize % d);
    random_density(d, rank, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn purity_sandwich(d in dims(), seed in any::<u64>()) {
        let m = purity_metrics(&state(d, seed));
        prop_assert!(m.opnorm * m.opnorm <= m.purity + 1e-12);
        prop_assert!(m.purity <= m.opnorm + 1e-12);
    }

    #[test]
    fn top_eigenvector_attains_trace_distance(d in dims(), seed in any::<u64>()) {
        let rho = state(d, seed);
        let m = purity_metrics(&rho);
        let (_, top) = top_eigenpair(&rho);
        let attained = trace_norm(&(rho.matrix() - top.projector().matrix()));
        prop_assert!((attained - m.tdist_to_pure).abs() < 1e-10);
        let mut rng = stream_rng(seed, 1);
        for _ in 0..5 {
            let psi = haar_state(d, &mut rng);
            let dist = trace_norm(&(rho.matrix() - psi.projector().matrix()));
            prop_assert!(dist >= m.tdist_to_pure - 1e-10);
        }
    }

    #[test]
    fn fidelity_lower_bounds_trace_distance(d in dims(), seed in any::<u64>(), mix in 0.0f64..1.0) {
        let rho = state(d, seed);
        let mut rng = stream_rng(seed, 2);
        let (_, top) = top_eigenpair(&rho);
        // Blend toward the top eigenvector so near-tight pairs are covered.
        let r = haar_state(d, &mut rng);
        let amps: Vec<_> = top.amplitudes().iter().zip(r.amplitudes())
            .map(|(a, b)| a * (1.0 - mix) + b * mix).collect();
        let psi = PureState::normalized(amps).unwrap();
        let f = fidelity(&rho, &psi.projector()).unwrap();
        let dist = trace_norm(&(rho.matrix() - psi.projector().matrix()));
        prop_assert!(2.0 - 2.0 * f * f <= dist + 1e-10);
    }

    #[test]
    fn fidelity_symmetric(d in dims(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (state(d, s1), state(d, s2));
        let fab = fidelity(&a, &b).unwrap();
        let fba = fidelity(&b, &a).unwrap();
        prop_assert!((fab - fba).abs() < 1e-8);
        prop_assert!((0.0..=1.0).contains(&fab));
    }
}

#[test]
fn pure_states_have_unit_metrics() {
    let psi = haar_state(4, &mut stream_rng(5, 0));
    let m = purity_metrics(&psi.projector());
    assert!((m.purity - 1.0).abs() < 1e-12 && (m.opnorm - 1.0).abs() < 1e-12);
    assert!(m.tdist_to_pure.abs() < 1e-12);
}
