//! Special functions needed by the closed-form coefficients.

use crate::error::{domain, Error, Result};
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// ln Γ(x) for x > 0.
///
/// Arguments below 15 are shifted upward with the recurrence, then the
/// Stirling series is summed.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(log_gamma_pos(x))
}

pub(crate) fn log_gamma_pos(x: f64) -> f64 {
    let mut z = x;
    let mut prod = 1.0;
    while z < 15.0 {
        prod *= z;
        z += 1.0;
    }
    let r = 1.0 / z;
    let r2 = r * r;
    let series = r
        * (1.0 / 12.0
            + r2 * (-1.0 / 360.0
                + r2 * (1.0 / 1260.0
                    + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0 + r2 / 156.0))))));
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - prod.ln()
}

/// sin(πx) with exact argument reduction.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r < 0.5 {
        (PI * r).sin()
    } else if r < 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

/// Γ(x) on the real line, excluding the poles at non-positive integers.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || (x <= 0.0 && x == x.floor()) {
        return Err(domain(format!("gamma has a pole at {x}")));
    }
    if x >= 0.5 {
        Ok(log_gamma_pos(x).exp())
    } else {
        Ok(PI / (sin_pi(x) * log_gamma_pos(1.0 - x).exp()))
    }
}

/// 1/Γ(x), entire: zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if x >= 0.5 {
        (-log_gamma_pos(x)).exp()
    } else {
        sin_pi(x) * log_gamma_pos(1.0 - x).exp() / PI
    }
}

fn dilog_series(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut p = z;
    for k in 1..200 {
        let t = p / (k * k) as f64;
        sum += t;
        if t.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        p *= z;
    }
    sum
}

/// Real dilogarithm Li₂(z) for z ≤ 1.
pub fn dilog(z: f64) -> Result<f64> {
    if !z.is_finite() || z > 1.0 {
        return Err(domain(format!("dilog is real only for z <= 1, got {z}")));
    }
    let pi2_6 = PI * PI / 6.0;
    Ok(if z == 1.0 {
        pi2_6
    } else if z > 0.5 {
        pi2_6 - z.ln() * (1.0 - z).ln() - dilog_series(1.0 - z)
    } else if z >= -0.5 {
        dilog_series(z)
    } else if z >= -1.0 {
        // Landen: z/(z-1) lands in (1/3, 1/2].
        -dilog_series(z / (z - 1.0)) - 0.5 * (1.0 - z).ln().powi(2)
    } else {
        -pi2_6 - 0.5 * (-z).ln().powi(2) - dilog(1.0 / z)?
    })
}

/// Generalized hypergeometric series pFq(a; b; z) for z in [0, 1) and
/// p ≤ q + 1, summed until the terms stop mattering.
pub fn hyp_pfq(a: &[f64], b: &[f64], z: f64) -> Result<f64> {
    if a.len() > b.len() + 1 {
        return Err(domain("hyp_pfq: divergent series for p > q + 1"));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(domain(format!("hyp_pfq: z must lie in [0, 1), got {z}")));
    }
    if b.iter().any(|&x| x <= 0.0 && x == x.floor()) {
        return Err(domain("hyp_pfq: non-positive integer lower parameter"));
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..100_000u32 {
        let kf = k as f64;
        let num: f64 = a.iter().map(|&x| x + kf).product();
        let den: f64 = b.iter().map(|&x| x + kf).product();
        term *= num / den * z / (kf + 1.0);
        sum += term;
        if term == 0.0 || (term.abs() < 1e-17 * sum.abs() && k > 2) {
            return Ok(sum);
        }
    }
    Err(Error::Convergence("hyp_pfq: series did not settle".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_known_values() {
        assert!((log_gamma(1.0).unwrap()).abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
        // ln(10!) = ln 3628800
        assert!((log_gamma(11.0).unwrap() - 3_628_800f64.ln()).abs() < 1e-14);
        assert!((log_gamma(1e-3).unwrap() - 6.907_178_885_383_853).abs() < 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn gamma_reflection_and_poles() {
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-1.5).unwrap() - 4.0 * PI.sqrt() / 3.0).abs() < 1e-14);
        assert!(gamma(-2.0).is_err());
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
    }

    #[test]
    fn dilog_known_values() {
        let ln2 = 2f64.ln();
        assert!((dilog(0.5).unwrap() - (PI * PI / 12.0 - 0.5 * ln2 * ln2)).abs() < 1e-15);
        assert!((dilog(-1.0).unwrap() + PI * PI / 12.0).abs() < 1e-15);
        assert!((dilog(1.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        // Li2(-2) from the inversion formula against the series of Li2(-1/2).
        assert!((dilog(-2.0).unwrap() + 1.436_746_366_883_681_6).abs() < 1e-14);
        assert!(dilog(1.5).is_err());
    }

    #[test]
    fn dilog_euler_reflection() {
        for &z in &[0.1, 0.3, 0.45, 0.7] {
            let lhs = dilog(z).unwrap() + dilog(1.0 - z).unwrap();
            let rhs = PI * PI / 6.0 - z.ln() * (1.0 - z).ln();
            assert!((lhs - rhs).abs() < 1e-15);
        }
    }

    #[test]
    fn hyp_pfq_reduces_to_elementary() {
        // 1F0(a;;z) = (1-z)^-a, 2F1(1,1;2;z) = -ln(1-z)/z
        assert!((hyp_pfq(&[2.5], &[], 0.3).unwrap() - 0.7f64.powf(-2.5)).abs() < 1e-14);
        let z = 0.6;
        assert!((hyp_pfq(&[1.0, 1.0], &[2.0], z).unwrap() + (1.0 - z).ln() / z).abs() < 1e-14);
        assert!(hyp_pfq(&[1.0, 1.0], &[2.0], 1.0).is_err());
    }
}
