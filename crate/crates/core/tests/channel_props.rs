mod common;

use common::{random_circuit, CircuitShape};
use isolab_core::channel::{exact_isometry_test, min_output_opnorm, ChannelHandle, SearchOptions};
use isolab_core::linalg::ComplexMatrix;
use isolab_core::tol;
use proptest::prelude::*;

const SHAPE: CircuitShape = CircuitShape { max_in: 2, max_peak: 4, max_gates: 5, channels: true };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn isometry_criteria_agree(seed in any::<u64>()) {
        let ch = ChannelHandle::new(random_circuit(seed, &SHAPE)).unwrap();
        let rank_one = ch.choi().unwrap().rank(tol::RANK) == 1;
        let kraus = ch.kraus().unwrap();
        let a = &kraus.operators()[0];
        let ata = a.adjoint().matmul(a);
        let isometric = kraus.len() == 1 && ata.max_abs_diff(&ComplexMatrix::identity(ch.dim_in())) < 1e-8;
        let found = min_output_opnorm(&ch, &SearchOptions::new(6, seed)).unwrap().value;
        prop_assert_eq!(rank_one, isometric);
        prop_assert_eq!(rank_one, found >= 1.0 - 1e-6, "min {}", found);
        prop_assert_eq!(rank_one, exact_isometry_test(&ch, tol::RANK).unwrap().exact_isometry);
    }

    #[test]
    fn search_is_deterministic(seed in any::<u64>()) {
        let ch = ChannelHandle::new(random_circuit(seed, &SHAPE)).unwrap();
        let opts = SearchOptions::new(3, seed);
        let a = min_output_opnorm(&ch, &opts).unwrap();
        let b = min_output_opnorm(&ch, &opts).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn more_restarts_never_worse(seed in any::<u64>()) {
        let ch = ChannelHandle::new(random_circuit(seed, &SHAPE)).unwrap();
        let few = min_output_opnorm(&ch, &SearchOptions::new(2, seed)).unwrap();
        let many = min_output_opnorm(&ch, &SearchOptions::new(5, seed)).unwrap();
        prop_assert!(many.value <= few.value);
        prop_assert_eq!(&many.per_restart[..2], &few.per_restart[..]);
    }

    #[test]
    fn choi_marginal_is_maximally_mixed(seed in any::<u64>()) {
        let ch = ChannelHandle::new(random_circuit(seed, &SHAPE)).unwrap();
        prop_assert!(ch.choi().unwrap().marginal_defect() < 1e-9);
    }
}
