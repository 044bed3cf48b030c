use std::f64::consts::FRAC_PI_2;

use cutpaste_core::optics::{alpha_for_eta, dif_map, setup_map, sweep, DifElements, ElementPreset, OpticalSetup, SweepAngle};
use cutpaste_core::qmath::hermitian_eig;
use cutpaste_core::{ad_channel, compose_all, superop_distance, unitary_channel, QuantumChannel};
use proptest::prelude::*;

fn preset() -> impl Strategy<Value = ElementPreset> {
    prop_oneof![Just(ElementPreset::Ideal), Just(ElementPreset::Measured)]
}

fn angle() -> impl Strategy<Value = f64> {
    -FRAC_PI_2..FRAC_PI_2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Σ K†K ≤ I for every DIF and every full setup.
    #[test]
    fn postselection_never_amplifies(
        a1 in 0.0..3.2f64, a21 in 0.0..3.2f64, a2 in 0.0..3.2f64,
        theta in proptest::option::of(angle()), phi in proptest::option::of(angle()),
        p in preset(),
    ) {
        let els = p.resolve().unwrap();
        let g = dif_map(a1, &els[0]).unwrap().kraus_gram();
        prop_assert!(hermitian_eig(&g).unwrap().eigenvalues[1] <= 1.0 + 1e-9);
        let mut s = OpticalSetup::identity().with_elements(p);
        s.alpha1 = a1;
        s.alpha21 = a21;
        s.alpha2 = a2;
        s.theta = theta;
        s.phi = phi;
        let g = setup_map(&s).unwrap().kraus_gram();
        prop_assert!(hermitian_eig(&g).unwrap().eigenvalues[1] <= 1.0 + 1e-9);
    }

    /// The ideal optical chain equals the channel-algebra composition.
    #[test]
    fn ideal_chain_matches_channel_algebra(eta1 in 0.0..=1.0f64, eta2 in 0.0..=1.0f64, theta in angle(), phi in angle()) {
        let s = OpticalSetup::m_prime(eta1, eta2, theta, phi).unwrap();
        let optical = setup_map(&s).unwrap().scaled(8.0).unwrap();
        let u_theta = unitary_channel(&cutpaste_core::optics::hwp(theta)).unwrap();
        let u_phi = unitary_channel(&cutpaste_core::optics::hwp(phi)).unwrap();
        let a1 = ad_channel(eta1).unwrap();
        let a12 = ad_channel(eta1 * eta2).unwrap();
        let a2 = ad_channel(eta2).unwrap();
        let algebra = compose_all([&a1, &u_phi, &u_theta, &a12, &u_phi, &u_theta, &a2]).unwrap();
        prop_assert!(superop_distance(&optical, &algebra) < 1e-9);
    }

    #[test]
    fn ideal_dif_realizes_damping(eta in 0.0..=1.0f64) {
        let m = dif_map(alpha_for_eta(eta).unwrap(), &DifElements::IDEAL).unwrap().scaled(2.0).unwrap();
        prop_assert!(superop_distance(&m, &ad_channel(eta).unwrap()) < 1e-10);
    }
}

/// θ plates at 0 are σz on both passes, a local unitary on the signal.
#[test]
fn theta_plates_at_zero_are_invisible_for_ideal_elements() {
    let base = OpticalSetup::m2(0.3, 0.0).unwrap();
    let removed = sweep(&base, SweepAngle::Phi, -1.5, 1.5, 31).unwrap();
    let mut with = base.clone();
    with.theta = Some(0.0);
    let present = sweep(&with, SweepAngle::Phi, -1.5, 1.5, 31).unwrap();
    for (a, b) in removed.iter().zip(&present) {
        assert!((a.result.concurrence - b.result.concurrence).abs() < 1e-10);
    }
}

#[test]
fn identity_configuration_is_identity() {
    let m = setup_map(&OpticalSetup::identity()).unwrap().scaled(8.0).unwrap();
    assert!(superop_distance(&m, &QuantumChannel::identity(2)) < 1e-12);
}
