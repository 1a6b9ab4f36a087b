//! Invariants of the Gaussian-potential scattering solver.

use mbtrap::scatter::{
    default_k_grid, fit_effective_range, phase_shift, tune_depth, zero_energy_a, zero_energy_a_with_step,
    GaussianPotential,
};
use mbtrap::Error;
use proptest::prelude::*;

const THRESHOLD: f64 = -1.342_002_3;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn step_halving_is_converged(s in -1.2f64..20.0, r0 in 0.01f64..2.0) {
        let pot = GaussianPotential::new(s / (r0 * r0), r0).unwrap();
        let h = pot.step();
        let a1 = zero_energy_a_with_step(&pot, h).unwrap();
        let a2 = zero_energy_a_with_step(&pot, h / 2.0).unwrap();
        prop_assert!((a1 - a2).abs() <= 1e-10 * a1.abs().max(r0), "{} vs {}", a1, a2);
    }

    #[test]
    fn scattering_length_increases_with_depth(s1 in -1.3f64..5.0, s2 in -1.3f64..5.0, r0 in 0.05f64..1.0) {
        prop_assume!((s1 - s2).abs() > 1e-3);
        let a = |s: f64| zero_energy_a(&GaussianPotential::new(s / (r0 * r0), r0).unwrap()).unwrap();
        prop_assert_eq!(a(s1) < a(s2), s1 < s2);
    }

    #[test]
    fn phase_shift_decreases_with_strength(s1 in -1.3f64..5.0, s2 in -1.3f64..5.0, kr in 0.05f64..0.5) {
        prop_assume!((s1 - s2).abs() > 1e-3);
        let r0 = 0.1;
        let d = |s: f64| phase_shift(&GaussianPotential::new(s / (r0 * r0), r0).unwrap(), kr / r0).unwrap().delta;
        prop_assert_eq!(d(s1) > d(s2), s1 < s2);
    }

    #[test]
    fn effective_range_expansion_reproduces_phase_shifts(s in -1.2f64..5.0, r0 in 0.01f64..1.0) {
        let pot = GaussianPotential::new(s / (r0 * r0), r0).unwrap();
        let a = zero_energy_a(&pot).unwrap();
        let e = fit_effective_range(&pot, &default_k_grid(r0, a)).unwrap();
        prop_assert!((e.a0 - a).abs() <= 1e-4 * a.abs());
        let k = 0.1 / r0.max(a.abs());
        let delta = phase_shift(&pot, k).unwrap().delta;
        let kcot = k / delta.tan();
        let ere = -1.0 / e.a0 + 0.5 * e.r_eff * k * k;
        prop_assert!((kcot - ere).abs() <= 5e-3 * kcot.abs(), "k cot = {}, ERE = {}", kcot, ere);
    }

    #[test]
    fn tuned_depth_round_trips(ratio in -2.0f64..2.0, r0 in 0.001f64..1.0) {
        let a = ratio * r0;
        let pot = tune_depth(a, r0).unwrap();
        let back = zero_energy_a(&pot).unwrap();
        prop_assert!((back - a).abs() <= 1e-9 * a.abs().max(r0));
        prop_assert_eq!(pot.v0 < 0.0, a < 0.0);
        prop_assert!(pot.v0 * r0 * r0 > THRESHOLD);
    }
}

#[test]
fn zero_depth_has_zero_length() {
    let pot = GaussianPotential::new(0.0, 0.3).unwrap();
    assert_eq!(zero_energy_a(&pot).unwrap(), 0.0);
    assert_eq!(tune_depth(0.0, 0.3).unwrap().v0, 0.0);
}

#[test]
fn bound_potential_is_reported() {
    let pot = GaussianPotential::new(-2.0, 1.0).unwrap();
    assert!(matches!(zero_energy_a(&pot), Err(Error::BoundState(_))));
}

#[test]
fn bad_steps_are_rejected() {
    let pot = GaussianPotential::new(1.0, 1.0).unwrap();
    assert!(zero_energy_a_with_step(&pot, 0.0).is_err());
    assert!(zero_energy_a_with_step(&pot, 2.0).is_err());
}
