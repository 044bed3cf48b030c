mod common;

use cutpaste_core::channels::{choi_from_superop, verdicts_consistent};
use cutpaste_core::entanglement::min_partial_transpose_eigenvalue;
use cutpaste_core::qmath::hermitian_eig;
use cutpaste_core::{
    ad_channel, choi_state, compose, concurrence, cut_and_paste_pair, is_eb, pd_channel, superop_distance,
    unitary_channel, DensityMatrix, QuantumChannel,
};
use proptest::prelude::*;

fn assert_cptp(c: &QuantumChannel) {
    let choi = choi_from_superop(c.superop(), c.in_dim(), c.out_dim());
    assert!(hermitian_eig(&choi).unwrap().eigenvalues[0] > -1e-9);
    assert!(c.is_trace_preserving());
}

#[test]
fn damping_semigroups_on_grid() {
    let grid: Vec<f64> = (0..10).map(|k| k as f64 / 9.0).collect();
    for &a in &grid {
        for &b in &grid {
            let ab = compose(&ad_channel(a).unwrap(), &ad_channel(b).unwrap()).unwrap();
            assert!(superop_distance(&ab, &ad_channel(a * b).unwrap()) < 1e-12);
            let ab = compose(&pd_channel(a).unwrap(), &pd_channel(b).unwrap()).unwrap();
            assert!(superop_distance(&ab, &pd_channel(a * b).unwrap()) < 1e-12);
            assert_cptp(&ab);
        }
    }
}

proptest! {
    #[test]
    fn damping_semigroups(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let ab = compose(&ad_channel(a).unwrap(), &ad_channel(b).unwrap()).unwrap();
        prop_assert!(superop_distance(&ab, &ad_channel(a * b).unwrap()) < 1e-12);
        let ba = compose(&ad_channel(b).unwrap(), &ad_channel(a).unwrap()).unwrap();
        prop_assert!(superop_distance(&ab, &ba) < 1e-12);
    }

    /// Ψ then Φ cancels the unitaries for any U: U†U sits between the two dampings.
    #[test]
    fn cut_and_paste_cancels_any_unitary(eta in 0.0..=1.0f64, u in common::unitary(2)) {
        let a = ad_channel(eta).unwrap();
        let (phi, psi) = cut_and_paste_pair(&a, &u).unwrap();
        let pair = compose(&psi, &phi).unwrap();
        prop_assert!(superop_distance(&pair, &ad_channel(eta * eta).unwrap()) < 1e-12);
        assert_cptp(&phi);
        assert_cptp(&psi);
    }

    #[test]
    fn kraus_and_superop_agree(c in common::channel(3), rho in common::state(2, 2)) {
        let a = c.apply(rho.matrix()).unwrap();
        let b = c.apply_kraus(rho.matrix()).unwrap();
        prop_assert!(a.distance(&b) < 1e-13);
        assert_cptp(&c);
    }

    #[test]
    fn superop_round_trip(c in common::channel(4)) {
        let back = QuantumChannel::from_superop(c.superop().clone(), 2, 2).unwrap();
        prop_assert!(superop_distance(&back, &c) < 1e-12);
        prop_assert!(back.kraus().len() <= 4);
        let json = QuantumChannel::from_json(&c.to_json().unwrap()).unwrap();
        prop_assert!(superop_distance(&json, &c) < 1e-15);
    }

    #[test]
    fn unitary_conjugation_preserves_choi_entanglement(u in common::unitary(2)) {
        let c = unitary_channel(&u).unwrap();
        prop_assert!((concurrence(&choi_state(&c).unwrap()).unwrap().value - 1.0).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// EB channels stay EB when composed with anything on either side.
    #[test]
    fn eb_is_an_ideal(u in common::unitary(2), other in common::channel(2)) {
        let rot = unitary_channel(&u).unwrap();
        for base in [ad_channel(0.0).unwrap(), pd_channel(0.0).unwrap()] {
            let eb = compose(&rot, &base).unwrap();
            prop_assert!(is_eb(&eb).unwrap().is_eb);
            prop_assert!(is_eb(&compose(&eb, &other).unwrap()).unwrap().is_eb);
            prop_assert!(is_eb(&compose(&other, &eb).unwrap()).unwrap().is_eb);
        }
    }

    #[test]
    fn verdict_bounds_hold_for_random_channels(c in common::channel(2)) {
        let choi = choi_state(&c).unwrap();
        let conc = concurrence(&choi).unwrap();
        let min_pt = min_partial_transpose_eigenvalue(&choi).unwrap();
        prop_assert!(verdicts_consistent(conc.pre_clamp, min_pt));
        prop_assert!(is_eb(&c).is_ok());
    }
}

#[test]
fn choi_state_is_omega_for_identity() {
    let c = choi_state(&QuantumChannel::identity(2)).unwrap();
    assert!(c.matrix().distance(DensityMatrix::omega().matrix()) < 1e-15);
}
