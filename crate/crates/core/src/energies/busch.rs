//! Exact relative-motion energy of two bosons with a regularized contact
//! interaction in an isotropic trap.

use crate::coeffs::special::{gamma, recip_gamma};
use crate::error::{domain, Error, Result};
use crate::extrapolate::lstsq;
use crate::numeric::brent;

/// Γ(1/4 − E/2) / (√2 Γ(3/4 − E/2)), which equals a/σ on an eigenstate.
fn busch_ratio(e: f64) -> f64 {
    match gamma(0.25 - 0.5 * e) {
        Ok(g) => g * recip_gamma(0.75 - 0.5 * e) / std::f64::consts::SQRT_2,
        Err(_) => f64::NAN,
    }
}

/// Relative energy E_rel (units ħω) of the branch that starts at 3/2 for
/// xi = a/σ = 0.
///
/// On (1/2, 5/2) the ratio rises monotonically from −∞ to +∞ and passes
/// through 0 at 3/2, so the root is bracketed there for any xi.
pub fn exact_two_body_energy(xi: f64) -> Result<f64> {
    if !(xi.abs() < 1.0) {
        return Err(domain(format!("exact two-body energy needs |a/sigma| < 1, got {xi}")));
    }
    if xi == 0.0 {
        return Ok(1.5);
    }
    let (lo, hi) = if xi > 0.0 { (1.5, 2.5 - 1e-12) } else { (0.5 + 1e-12, 1.5) };
    let e = brent(|e| busch_ratio(e) - xi, lo, hi, 1e-15, 200)?;
    if !(e > 0.5 && e < 2.5) {
        return Err(Error::Bracket(format!("root {e} left the ground-state branch")));
    }
    Ok(e)
}

/// Least-squares coefficients (k₁, k₂, k₃) of E_rel − 3/2 ≈ k₁ξ + k₂ξ² + k₃ξ³
/// over `xis`.
pub fn fit_two_body_series(xis: &[f64]) -> Result<[f64; 3]> {
    let mut rows = Vec::with_capacity(xis.len());
    let mut y = Vec::with_capacity(xis.len());
    for &x in xis {
        rows.push(vec![x, x * x, x * x * x]);
        y.push(exact_two_body_energy(x)? - 1.5);
    }
    let c = lstsq(&rows, &y)?;
    Ok([c[0], c[1], c[2]])
}
