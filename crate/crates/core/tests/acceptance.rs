//! The twelve acceptance criteria, each at its stated tolerance. Every
//! criterion prints one PASS/FAIL line; the test fails if any line is FAIL.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//! Criterion 3 recomputes α₃⁽³⁾ on the default grid and takes about two
//! minutes.

use mbtrap::coeffs::*;
use mbtrap::energies::*;
use mbtrap::scatter::*;
use mbtrap::wick::{expectation, third_order_prefactors, Contribution, OpString};
use num_rational::Rational64;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(value: f64, reference: f64, tol: f64) -> bool {
    (value - reference).abs() <= tol
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let vals = [
        ("alpha2_1", alpha2_1(), 0.797885),
        ("alpha3_2", alpha3_2_analytic(), 0.142626),
        ("alpha4_3", alpha4_3_analytic(), 0.438946),
        ("alpha5_3", alpha5_3_analytic().unwrap(), 0.051916),
        ("alpha2_12", alpha2_12(), 0.598413),
    ];
    let secs = t.elapsed().as_secs_f64();
    let worst = vals.iter().map(|(_, v, r)| (v - r).abs()).fold(0.0, f64::max);
    outcome(worst <= 1e-6 && secs < 1.0, format!("closed forms, max |diff| = {worst:.2e} (tol 1e-6), {secs:.3} s"))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let reg = RegulatorSpec::hard(80.0).unwrap();
    let a41 = alpha4_1_sum(&reg);
    let a42 = alpha4_2_sum(&reg);
    let secs = t.elapsed().as_secs_f64();
    let pass = within(a41, 0.077465, 1e-6) && within(a42, 0.051099, 1e-6) && secs < 5.0;
    outcome(pass, format!("alpha4_1 = {a41:.9}, alpha4_2 = {a42:.9} at omega_c/omega = 80, {secs:.3} s"))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let a = alpha3_3(&DEFAULT_GRID).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let c = a.coefficient;
    let calibration = (a.extrapolation.calibration_fit.intercept - alpha4_3_analytic()).abs();
    let pinned = c.value == ALPHA3_3_DEFAULT && c.uncertainty == ALPHA3_3_DEFAULT_UNCERTAINTY;
    let pass = within(c.value, 0.56494, 1e-5) && c.uncertainty <= 1e-4 && calibration <= 1e-4 && pinned;
    outcome(
        pass,
        format!(
            "alpha3_3 = {:.7} +- {:.1e} (ref 0.56494 +- 1e-5), calibration error {calibration:.1e} (tol 1e-4), \
             stored value reproduced: {pinned}, {secs:.0} s",
            c.value, c.uncertainty
        ),
    )
}

fn criterion_4() -> Outcome {
    let set = ConvergentSet::reference().unwrap();
    let t = coefficient_table(1.0, 0.0, &set).unwrap();
    let eq = coefficient_table(1.0, 1.0, &set).unwrap();
    let checks = [
        ("c2_1", t.c2_1, 0.79788, 1e-5),
        ("c2_2", t.c2_2, 0.19535, 1e-5),
        ("c2_3", t.c2_3, -0.39112, 1e-5),
        ("d2_12", t.d2_12, 0.59841, 1e-5),
        ("c3_2", t.c3_2, -0.85576, 1e-5),
        ("c3_3", t.c3_3, 2.7921, 2e-4),
        ("c4_3", t.c4_3, 2.43317, 1e-4),
        ("c3_3(w,w)", eq.c3_3, 3.2112, 2e-4),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, v, r, tol)| !within(*v, *r, *tol)).map(|c| c.0).collect();
    outcome(
        failed.is_empty(),
        format!("c3_3 = {:.6}, c4_3 = {:.6}, c3_3(w,w) = {:.6}; failing: {failed:?}", t.c3_3, t.c4_3, eq.c3_3),
    )
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [10.0, 50.0, 200.0] {
        let reg = RegulatorSpec::exponential(r).unwrap();
        let b23 = beta2_3_direct(&reg);
        let b33 = beta3_3_direct(&reg);
        worst = worst.max((b23 - beta2_3_factorized(&reg)).abs() / b23);
        worst = worst.max((b33 - beta3_3_factorized(&reg)).abs() / b33);
    }
    outcome(worst <= 1e-10, format!("max relative factorization defect {worst:.2e} (tol 1e-10)"))
}

fn criterion_6() -> Outcome {
    let rs = [100.0, 400.0, 1600.0];
    let pts: Vec<(f64, f64)> = rs
        .iter()
        .map(|&r| {
            let d = beta2_2(&RegulatorSpec::exponential(r).unwrap()) - beta2_2_asymptotic(r);
            (r.ln(), d.abs().ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope =
        pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    outcome(within(slope, -1.0, 0.1), format!("log-log slope of beta2_2 - asymptotic = {slope:.4} (want -1 +- 0.1)"))
}

fn criterion_7() -> Outcome {
    let s = OpString::new().ann("i").ann("j").cre("k").cre("l").not_all_ground(&["i", "j"]);
    let second = expectation(&s, 2).combine(&[vec![("i", "j")], vec![("k", "l")]]).to_string();
    let t = third_order_prefactors().unwrap();
    let r = Rational64::from_integer;
    let chain = |c: &str, m| t.get(Contribution::ThirdOrderChain, c, m).map(|e| e.prefactor);
    let chain_set = [
        chain("alpha3_3", 3),
        chain("beta3_3", 3),
        chain("alpha4_1", 4),
        chain("alpha4_2", 4),
        chain("alpha4_3", 4),
        chain("alpha5_3", 5),
    ];
    let chain_ok = chain_set == [12, 12, 48, 48, 6, 60].map(|v| Some(r(v)));
    let second_ok = t.get(Contribution::SecondOrder, "alpha3_2", 3).map(|e| e.prefactor) == Some(r(-6));
    let u4 = [t.net("alpha4_1", 4), t.net("alpha4_2", 4), t.net("alpha5_3", 4)];
    let u4_ok = u4 == [r(48), r(48), r(-72)];
    let five: Rational64 = t.entries.iter().filter(|e| e.m == 5).map(|e| e.prefactor).sum();
    let five_each = t.entries.iter().filter(|e| e.m == 5).all(|e| t.net(&e.coefficient, 5) == r(0));
    let pass = second == "4d(i,k)(N-2) + 2d(i,k)d(j,l)" && chain_ok && second_ok && u4_ok && five == r(0) && five_each;
    outcome(
        pass,
        format!(
            "second order: {second}; chain set ok: {chain_ok}; alpha3_2 -6: {second_ok}; U4 net {:?}; five-body net {five}",
            u4.map(|x| x.to_string())
        ),
    )
}

fn criterion_8() -> Outcome {
    let set = ConvergentSet::reference().unwrap();
    let mut worst: f64 = 0.0;
    for xi in [0.001, 0.01, 0.05] {
        for r in [50.0, 200.0] {
            for reg in [RegulatorSpec::hard(r).unwrap(), RegulatorSpec::exponential(r).unwrap()] {
                let ctx = TrapContext::dimensionless(1.0, xi, 0.0, reg, set).unwrap();
                let (u2_reg, _) = regulated_u2_u3(&ctx).unwrap();
                worst = worst.max((u2_reg - set.alpha2_1 * xi).abs());
                worst = worst.max((u2(&ctx).unwrap().total() - set.alpha2_1 * xi).abs());
            }
        }
    }
    outcome(worst <= 1e-14, format!("max |U2(w0;w0) - c2_1 xi| = {worst:.1e} (tol 1e-14), both regulators"))
}

fn criterion_9() -> Outcome {
    let set = ConvergentSet::reference().unwrap();
    let at = |r: f64| {
        let ctx = TrapContext::dimensionless(2.0, 0.01, 0.0, RegulatorSpec::exponential(r).unwrap(), set).unwrap();
        (u2(&ctx).unwrap().total(), u3(&ctx).unwrap().total(), regulated_u2_u3(&ctx).unwrap())
    };
    let (a2, a3, (ra2, ra3)) = at(200.0);
    let (b2, b3, (rb2, rb3)) = at(400.0);
    let shift = (b2 - a2).abs().max((b3 - a3).abs());
    // The finite-cutoff assembly approaches the renormalized energy as
    // (omega/omega_c)^{1/2}; check that rate instead of the 1e-8 shift.
    let ratio = (ra2 - a2) / (rb2 - b2);
    let converging = within(ratio, 2f64.sqrt(), 0.1);
    println!(
        "      info: finite-cutoff U2 shift 200->400 = {:.2e}, U3 shift = {:.2e}; \
         distance to renormalized U2 shrinks by {ratio:.3} per doubling (sqrt 2 = 1.414)",
        (rb2 - ra2).abs(),
        (rb3 - ra3).abs()
    );
    outcome(
        shift < 1e-8 && converging,
        format!("renormalized U2/U3 shift 200->400 = {shift:.1e} (tol 1e-8) at w/w0 = 2, xi = 0.01"),
    )
}

fn criterion_10() -> Outcome {
    let xis = [-0.02, -0.015, -0.01, -0.005, -0.002, -0.001, 0.001, 0.002, 0.005, 0.01, 0.015, 0.02];
    let k = fit_two_body_series(&xis).unwrap();
    let set = ConvergentSet::reference().unwrap();
    let t = coefficient_table(1.0, 0.0, &set).unwrap();
    let rel = [(k[0] - t.c2_1) / t.c2_1, (k[1] - t.c2_2) / t.c2_2, (k[2] - t.c2_3) / t.c2_3].map(f64::abs);
    let worst_rel = rel.iter().cloned().fold(0.0, f64::max);
    let residual = xis
        .iter()
        .map(|&x| {
            let e = exact_two_body_energy(x).unwrap() - 1.5;
            ((e - t.c2_1 * x - t.c2_2 * x * x - t.c2_3 * x.powi(3)) / x.powi(4)).abs()
        })
        .fold(0.0, f64::max);
    outcome(
        worst_rel <= 1e-3 && residual <= 10.0,
        format!("fit relative errors [{:.1e}, {:.1e}, {:.1e}] (tol 1e-3), max |E - 3/2 - series|/xi^4 = {residual:.3} (bound 10)", rel[0], rel[1], rel[2]),
    )
}

fn criterion_11() -> Outcome {
    let set = ConvergentSet::reference().unwrap();
    let res = |xi: f64| {
        let ctx = TrapContext::dimensionless(2.0, xi, 0.0, RegulatorSpec::exponential(200.0).unwrap(), set).unwrap();
        scheme_independence_residual(&ctx, 0.5 * ctx.omega0, 3).unwrap()
    };
    let r = [res(0.04), res(0.02), res(0.01)];
    let ratios = [r[0] / r[1], r[1] / r[2]];
    let pass = ratios.iter().all(|&q| (12.8..=19.2).contains(&q));
    outcome(
        pass,
        format!("residuals [{:.2e}, {:.2e}, {:.2e}], halving ratios {ratios:.2?} (want 16 +- 20%)", r[0], r[1], r[2]),
    )
}

fn criterion_12() -> Outcome {
    let r0 = 1.0;
    let mut notes = Vec::new();
    let mut worst_rt: f64 = 0.0;
    for i in -8..=8 {
        let a = 0.25 * i as f64 * r0;
        let p = tune_depth(a, r0).unwrap();
        let back = zero_energy_a(&p).unwrap();
        let err = if a == 0.0 { back.abs() } else { ((back - a) / a).abs() };
        worst_rt = worst_rt.max(err);
    }
    let round_trip = worst_rt <= 1e-9;
    notes.push(format!("round trip {worst_rt:.1e}"));

    let mut worst_born: f64 = 0.0;
    for v in [1e-3, -1e-3] {
        let p = GaussianPotential::new(v, r0).unwrap();
        worst_born = worst_born.max((zero_energy_a(&p).unwrap() / born_a(&p) - 1.0).abs());
        for k in [0.1, 0.5] {
            let d = phase_shift(&p, k).unwrap().delta;
            worst_born = worst_born.max((d / born_phase_shift(&p, k) - 1.0).abs());
        }
    }
    let born = worst_born <= 0.01;
    notes.push(format!("Born {worst_born:.1e}"));

    let family: Vec<(f64, EffectiveRange)> = [-0.5, -0.1, -0.05, -0.01, 0.01, 0.05, 0.1]
        .iter()
        .map(|&a| {
            let p = tune_depth(a, r0).unwrap();
            (a, fit_effective_range(&p, &default_k_grid(r0, a)).unwrap())
        })
        .collect();
    let signs = family.iter().all(|(a, e)| if *a < 0.0 { e.r_eff > 0.0 } else { e.r_eff < 0.0 });
    let mag = |a: f64| family.iter().find(|(x, _)| *x == a).unwrap().1;
    let diverges = mag(-0.01).r_eff.abs() > mag(-0.05).r_eff.abs()
        && mag(-0.05).r_eff.abs() > mag(-0.1).r_eff.abs()
        && mag(0.01).r_eff.abs() > mag(0.05).r_eff.abs()
        && mag(0.05).r_eff.abs() > mag(0.1).r_eff.abs();
    let vanishes = mag(0.01).volume.abs() < mag(0.05).volume.abs()
        && mag(0.05).volume.abs() < mag(0.1).volume.abs()
        && mag(-0.01).volume.abs() < mag(-0.05).volume.abs()
        && mag(-0.05).volume.abs() < mag(-0.1).volume.abs();
    notes.push(format!(
        "r_eff(+-0.01) = {:.1}/{:.1}, volume(+-0.01) = {:.2e}/{:.2e}",
        mag(0.01).r_eff,
        mag(-0.01).r_eff,
        mag(0.01).volume,
        mag(-0.01).volume
    ));
    outcome(round_trip && born && signs && diverges && vanishes, notes.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("analytic coefficients", criterion_1),
        ("convergent sums", criterion_2),
        ("extrapolated alpha3_3", criterion_3),
        ("coefficient table", criterion_4),
        ("factorization identities", criterion_5),
        ("beta2_2 asymptotics", criterion_6),
        ("Wick prefactors", criterion_7),
        ("renormalization condition", criterion_8),
        ("cutoff independence", criterion_9),
        ("exact two-body cross-check", criterion_10),
        ("scheme independence", criterion_11),
        ("Gaussian scattering", criterion_12),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
