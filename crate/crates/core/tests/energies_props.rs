//! Structural properties of the N-boson energies.

use mbtrap::coeffs::{ConvergentSet, RegulatorSpec};
use mbtrap::energies::{
    coefficient_table, exact_two_body_energy, interaction_energies, rescaled_u, total_energy, TrapContext,
};
use proptest::prelude::*;

fn ctx(omega_ratio: f64, xi: f64, reff: f64) -> TrapContext {
    let reg = RegulatorSpec::exponential(200.0).unwrap();
    TrapContext::dimensionless(omega_ratio, xi, reff, reg, ConvergentSet::reference().unwrap()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn no_interaction_gives_oscillator_energy(ratio in 0.1f64..10.0, reff in -0.1f64..0.1, n in 0u64..50) {
        let e = total_energy(&ctx(ratio, 0.0, reff), n).unwrap();
        prop_assert_eq!(e, 1.5 * n as f64);
    }

    #[test]
    fn energy_is_binomial_series_in_u(ratio in 0.2f64..5.0, xi in -0.1f64..0.1, n in 0u64..40) {
        let c = ctx(ratio, xi, 0.0);
        let u = interaction_energies(&c).unwrap();
        let nf = n as f64;
        let binom = |m: u32| (0..m).fold(1.0, |acc, k| acc * (nf - k as f64) / (k + 1) as f64);
        let want = 1.5 * nf + binom(2) * u.u2.total() + binom(3) * u.u3.total() + binom(4) * u.u4.total();
        prop_assert!(close(total_energy(&c, n).unwrap(), want, 1e-13));
    }

    #[test]
    fn two_body_energy_is_first_order_at_reference_frequency(xi in -0.2f64..0.2, reff in -0.1f64..0.1) {
        let c = ctx(1.0, xi, reff);
        let u = interaction_energies(&c).unwrap();
        let c21 = coefficient_table(1.0, 1.0, &c.coefficients).unwrap().c2_1;
        prop_assert!(close(u.u2.total(), c21 * xi, 1e-15));
    }

    #[test]
    fn free_space_rescaled_curves_are_power_laws(w in 1e-6f64..0.05) {
        let c = ctx(f64::INFINITY, 0.05, 0.0);
        let t = coefficient_table(1.0, 0.0, &c.coefficients).unwrap();
        let p = rescaled_u(&c).unwrap().at(w).unwrap();
        prop_assert!(close(p.u2t_1, t.c2_1 * w.powf(1.5), 1e-12));
        prop_assert!(close(p.u3t_2, t.c3_2 * w * w, 1e-12));
        prop_assert!(close(p.u4t_3, t.c4_3 * w.powf(2.5), 1e-12));
        prop_assert!(close(p.u3t_23 - p.u3t_2, t.c3_3 * w.powf(2.5), 1e-10));
    }

    #[test]
    fn exact_column_is_the_two_body_root(w in 1e-6f64..0.05) {
        let p = rescaled_u(&ctx(f64::INFINITY, 0.05, 0.0)).unwrap().at(w).unwrap();
        let exact = (exact_two_body_energy(w.sqrt()).unwrap() - 1.5) * w;
        prop_assert!((p.u2exact_minus_u2t1 + p.u2t_1 - exact).abs() <= 1e-10 * exact.abs());
    }

    #[test]
    fn energies_are_odd_in_xi_at_first_order(xi in 1e-4f64..0.1) {
        let plus = interaction_energies(&ctx(2.0, xi, 0.0)).unwrap();
        let minus = interaction_energies(&ctx(2.0, -xi, 0.0)).unwrap();
        prop_assert_eq!(plus.u2.first, -minus.u2.first);
        prop_assert_eq!(plus.u2.second, minus.u2.second);
        prop_assert_eq!(plus.u3.third, -minus.u3.third);
    }
}

#[test]
fn rescaled_curves_vanish_at_zero() {
    let p = rescaled_u(&ctx(f64::INFINITY, 0.05, 0.0)).unwrap().at(0.0).unwrap();
    assert_eq!([p.u2t_1, p.u2t_23, p.u3t_2, p.u3t_23, p.u4t_3, p.u2exact_minus_u2t1], [0.0; 6]);
}

#[test]
fn large_xi_warns() {
    assert!(interaction_energies(&ctx(1.0, 0.1, 0.0)).unwrap().warnings.is_empty());
    assert_eq!(interaction_energies(&ctx(1.0, 0.3, 0.0)).unwrap().warnings.len(), 1);
}
