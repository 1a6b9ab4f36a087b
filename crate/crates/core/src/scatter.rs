//! s-wave scattering of two bosons by the Gaussian model potential
//! V(r) = V₀ exp(-r²/(2r₀²)).
//!
//! Lengths are in an arbitrary common unit. The depth is carried as
//! `v0` = m·V₀/ħ² (inverse length squared, m the particle mass), so the
//! relative radial equation with reduced mass m/2 reads
//! u″ = (v0·exp(-r²/(2r₀²)) − k²) u.

use crate::error::{domain, Error, Result};
use crate::extrapolate::lstsq;
use crate::numeric::brent;
use serde::Serialize;

/// Beyond this many widths the potential is below 1e-31 of its peak.
const OUTER: f64 = 12.0;
/// Base steps per width.
const STEPS_PER_WIDTH: f64 = 200.0;
/// Largest |v0|·r0² handled; beyond it the solution under a barrier grows
/// past the range of f64.
const MAX_STRENGTH: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianPotential {
    /// m·V₀/ħ²; positive is repulsive.
    pub v0: f64,
    /// Width r₀.
    pub r0: f64,
}

impl GaussianPotential {
    pub fn new(v0: f64, r0: f64) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(domain(format!("Gaussian width must be positive, got {r0}")));
        }
        if !v0.is_finite() || v0.abs() * r0 * r0 > MAX_STRENGTH {
            return Err(domain(format!("|v0|·r0² must be finite and at most {MAX_STRENGTH}")));
        }
        Ok(Self { v0, r0 })
    }

    pub fn at(&self, r: f64) -> f64 {
        self.v0 * (-0.5 * (r / self.r0).powi(2)).exp()
    }

    /// Default integration step: r0/200, shortened inside a strong barrier
    /// or well.
    pub fn step(&self) -> f64 {
        let h = self.r0 / STEPS_PER_WIDTH;
        if self.v0 == 0.0 {
            h
        } else {
            h.min(0.05 / self.v0.abs().sqrt())
        }
    }
}

/// Numerov march of u″ = f(r)u from u(0) = 0 with the series start
/// u(h) = h + c₃h³ + c₅h⁵. Returns u at every grid point up to `n` steps.
///
/// Uses the summed form: with y = (1 − h²f/12)u, the increments
/// y_{i+1} − y_i are accumulated instead of applying the three-term
/// recurrence, which keeps rounding error linear in the number of steps.
fn numerov(pot: &GaussianPotential, k2: f64, h: f64, n: usize) -> Vec<f64> {
    let f = |r: f64| pot.at(r) - k2;
    let f0 = pot.v0 - k2;
    let f2 = -pot.v0 / (2.0 * pot.r0 * pot.r0);
    let c3 = f0 / 6.0;
    let c5 = (f0 * c3 + f2) / 20.0;
    let mut u = Vec::with_capacity(n + 1);
    u.push(0.0);
    u.push(h + c3 * h.powi(3) + c5 * h.powi(5));
    let w = h * h / 12.0;
    let h2 = h * h;
    let mut fc = f(h);
    let mut y = (1.0 - w * fc) * u[1];
    let mut dy = y;
    for i in 1..n {
        dy += h2 * fc * u[i];
        y += dy;
        fc = f((i + 1) as f64 * h);
        u.push(y / (1.0 - w * fc));
    }
    u
}

/// Nodes of the zero-energy solution, counting the one beyond the last
/// point when u is heading towards zero there. Equals the number of bound
/// states.
fn count_nodes(u: &[f64]) -> usize {
    let inner = u[1..].windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    let n = u.len();
    let tail = (u[n - 1] * (u[n - 1] - u[n - 2]) < 0.0) as usize;
    inner + tail
}

/// a₀ at one step size, and the node count.
fn zero_energy_at(pot: &GaussianPotential, h: f64) -> (f64, usize) {
    let r_end = OUTER * pot.r0;
    let n = (r_end / h).ceil() as usize;
    let h = r_end / n as f64;
    let u = numerov(pot, 0.0, h, n);
    let (u1, u2) = (u[n - 1], u[n]);
    // Outside the potential u is linear, u ∝ r − a₀.
    (r_end - u2 * h / (u2 - u1), count_nodes(&u))
}

/// Zero-energy scattering length at the default step.
pub fn zero_energy_a(pot: &GaussianPotential) -> Result<f64> {
    zero_energy_a_with_step(pot, pot.step())
}

/// Zero-energy scattering length from Numerov runs at steps `h` and `h`/2,
/// Richardson-combined (Numerov's error is O(h⁴)).
pub fn zero_energy_a_with_step(pot: &GaussianPotential, h: f64) -> Result<f64> {
    if !(h > 0.0) || h > pot.r0 {
        return Err(domain(format!("step must lie in (0, r0], got {h}")));
    }
    if pot.v0 == 0.0 {
        return Ok(0.0);
    }
    let (a1, nodes) = zero_energy_at(pot, h);
    if nodes > 0 {
        return Err(Error::BoundState(format!("v0 = {} supports {nodes} bound state(s)", pot.v0)));
    }
    let (a2, nodes) = zero_energy_at(pot, h / 2.0);
    if nodes > 0 {
        return Err(Error::BoundState(format!("v0 = {} is at the bound-state threshold", pot.v0)));
    }
    let a = (16.0 * a2 - a1) / 15.0;
    if !a.is_finite() {
        return Err(Error::Convergence("zero-energy solution has no linear asymptote".into()));
    }
    Ok(a)
}

/// Number of s-wave bound states.
pub fn bound_states(pot: &GaussianPotential) -> usize {
    zero_energy_at(pot, pot.step()).1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub k: f64,
    /// Phase shift in (−π/2, π/2].
    pub delta: f64,
    /// a_f = −tan δ / k.
    pub a_f: f64,
}

fn tan_delta_at(pot: &GaussianPotential, k: f64, h: f64, r1: f64, d: f64) -> f64 {
    let n1 = (r1 / h).ceil() as usize;
    let h = r1 / n1 as f64;
    let n2 = n1 + (d / h).round().max(1.0) as usize;
    let u = numerov(pot, k * k, h, n2);
    let (ra, rb) = (n1 as f64 * h, n2 as f64 * h);
    let (u1, u2) = (u[n1], u[n2]);
    let (s1, c1) = (k * ra).sin_cos();
    let (s2, c2) = (k * rb).sin_cos();
    (u2 * s1 - u1 * s2) / (u1 * c2 - u2 * c1)
}

/// s-wave phase shift at wavenumber `k`, matching u = sin(kr + δ) at two
/// radii outside the potential about a quarter wavelength apart.
pub fn phase_shift(pot: &GaussianPotential, k: f64) -> Result<ScatteringResult> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(domain(format!("wavenumber must be positive, got {k}")));
    }
    let r1 = OUTER * pot.r0;
    let d = (0.5 * std::f64::consts::PI / k).min(200.0 * pot.r0);
    if k * d < 1e-3 {
        return Err(domain(format!("k·r0 = {} is too small to match to free waves", k * pot.r0)));
    }
    let h = pot.step();
    let t1 = tan_delta_at(pot, k, h, r1, d);
    let t2 = tan_delta_at(pot, k, h / 2.0, r1, d);
    let t = (16.0 * t2 - t1) / 15.0;
    Ok(ScatteringResult { k, delta: t.atan(), a_f: -t / k })
}

/// a₀ and r_eff from a_f(k) = a₀ + ½ r_eff a₀² k² + c k⁴.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveRange {
    pub a0: f64,
    /// NaN when a₀ = 0, where it is undefined.
    pub r_eff: f64,
    /// r_eff·a₀², finite for every potential.
    pub volume: f64,
    /// Largest relative misfit of the fitted a_f on the grid.
    pub max_rel_misfit: f64,
}

/// Eight wavenumbers with k·L = 0.025, 0.05, …, 0.2 where L = max(r0, |a|),
/// so that both k·r0 and k·a stay small.
pub fn default_k_grid(r0: f64, a: f64) -> Vec<f64> {
    let l = r0.max(a.abs());
    (1..=8).map(|j| 0.025 * j as f64 / l).collect()
}

pub fn fit_effective_range(pot: &GaussianPotential, ks: &[f64]) -> Result<EffectiveRange> {
    if ks.len() < 5 {
        return Err(domain("effective-range fit needs at least 5 wavenumbers"));
    }
    if ks.iter().any(|&k| !(k > 0.0) || k * pot.r0 > 0.2 + 1e-12) {
        return Err(domain("wavenumbers must satisfy 0 < k·r0 <= 0.2"));
    }
    let kmin = ks.iter().cloned().fold(f64::INFINITY, f64::min);
    let kmax = ks.iter().cloned().fold(0.0, f64::max);
    if kmax * kmax < 2.0 * kmin * kmin {
        return Err(Error::RankDeficient("k grid too narrow: need max k² >= 2 min k²".into()));
    }
    if pot.v0 == 0.0 {
        return Ok(EffectiveRange { a0: 0.0, r_eff: f64::NAN, volume: 0.0, max_rel_misfit: 0.0 });
    }
    let samples: Vec<ScatteringResult> = ks.iter().map(|&k| phase_shift(pot, k)).collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = ks.iter().map(|&k| vec![1.0, k * k, k.powi(4)]).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.a_f).collect();
    let c = lstsq(&rows, &y)?;
    let a0 = c[0];
    let volume = 2.0 * c[1];
    let max_rel_misfit = ks
        .iter()
        .zip(&y)
        .map(|(&k, &a)| ((c[0] + c[1] * k * k + c[2] * k.powi(4)) - a).abs() / a.abs())
        .fold(0.0, f64::max);
    Ok(EffectiveRange { a0, r_eff: volume / (a0 * a0), volume, max_rel_misfit })
}

/// First-order Born scattering length, (m/(4πħ²))∫V d³r = v0 r0³ √(π/2).
pub fn born_a(pot: &GaussianPotential) -> f64 {
    pot.v0 * pot.r0.powi(3) * (0.5 * std::f64::consts::PI).sqrt()
}

/// First-order Born phase shift, −(1/k)∫ U(r) sin²(kr) dr.
pub fn born_phase_shift(pot: &GaussianPotential, k: f64) -> f64 {
    -pot.v0 * (0.5 * std::f64::consts::PI).sqrt() * pot.r0 * (1.0 - (-2.0 * (k * pot.r0).powi(2)).exp()) / (2.0 * k)
}

/// The most attractive v0 (in units of 1/r0²) without a bound state, found
/// by bisection on the appearance of a node.
pub fn bound_state_threshold(r0: f64) -> Result<f64> {
    let pot = |s: f64| GaussianPotential::new(s / (r0 * r0), r0);
    let (mut lo, mut hi) = (-4.0, 0.0); // strengths s = v0·r0²
    if bound_states(&pot(lo)?) == 0 {
        return Err(Error::Convergence("no bound state found down to v0·r0² = -4".into()));
    }
    while hi - lo > 1e-12 * lo.abs() {
        let mid = 0.5 * (lo + hi);
        if bound_states(&pot(mid)?) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi / (r0 * r0))
}

/// Depth producing scattering length `a_target` with no bound state;
/// repulsive for a > 0, attractive for a < 0.
pub fn tune_depth(a_target: f64, r0: f64) -> Result<GaussianPotential> {
    if !(r0 > 0.0) || !r0.is_finite() || !a_target.is_finite() {
        return Err(domain("tune_depth needs finite a and positive r0"));
    }
    if a_target == 0.0 {
        return GaussianPotential::new(0.0, r0);
    }
    let a_of = |v: f64| GaussianPotential::new(v, r0).and_then(|p| zero_energy_a(&p));
    let (lo, hi) = if a_target > 0.0 {
        let mut hi = 1.0 / (r0 * r0);
        while a_of(hi)? < a_target {
            hi *= 2.0;
            if hi * r0 * r0 > MAX_STRENGTH {
                return Err(Error::Unreachable(format!(
                    "a = {a_target} needs a barrier stronger than v0·r0² = {MAX_STRENGTH}"
                )));
            }
        }
        (0.0, hi)
    } else {
        let edge = bound_state_threshold(r0)? * (1.0 - 1e-9);
        if a_of(edge)? > a_target {
            return Err(Error::Unreachable(format!(
                "a = {a_target} lies beyond the first bound-state threshold for r0 = {r0}"
            )));
        }
        (edge, 0.0)
    };
    let mut failure = None;
    let v = brent(
        |v| match a_of(v) {
            Ok(a) => a - a_target,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-16 * (hi - lo).abs(),
        300,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let pot = GaussianPotential::new(v, r0)?;
    let err = (zero_energy_a(&pot)? - a_target).abs();
    if err > 1e-10 * a_target.abs().max(r0) {
        return Err(Error::Convergence(format!("tuned depth misses a by {err:e}")));
    }
    Ok(pot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_particle() {
        let p = GaussianPotential::new(0.0, 1.0).unwrap();
        assert_eq!(zero_energy_a(&p).unwrap(), 0.0);
        assert!(phase_shift(&p, 0.1).unwrap().delta.abs() < 1e-14);
        assert_eq!(tune_depth(0.0, 1.0).unwrap().v0, 0.0);
    }

    #[test]
    fn weak_potential_matches_born() {
        for v in [1e-3, -1e-3] {
            let p = GaussianPotential::new(v, 2.0).unwrap();
            let a = zero_energy_a(&p).unwrap();
            assert!((a / born_a(&p) - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn threshold_is_about_minus_1_342() {
        let s = bound_state_threshold(1.0).unwrap();
        assert!((s + 1.342).abs() < 0.001, "{s}");
        let p = GaussianPotential::new(1.01 * s, 1.0).unwrap();
        assert!(matches!(zero_energy_a(&p), Err(Error::BoundState(_))));
    }

    #[test]
    fn near_threshold_scattering_length_is_large_and_negative() {
        let s = bound_state_threshold(1.0).unwrap();
        let a = zero_energy_a(&GaussianPotential::new(0.9 * s, 1.0).unwrap()).unwrap();
        assert!(a < -3.0, "{a}");
    }

    #[test]
    fn small_k_reproduces_zero_energy_length() {
        let p = tune_depth(-0.7, 1.0).unwrap();
        let r = phase_shift(&p, 2e-3).unwrap();
        assert!((r.a_f / -0.7 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn too_small_k_is_rejected() {
        let p = GaussianPotential::new(0.1, 1.0).unwrap();
        assert!(phase_shift(&p, 1e-6).is_err());
        assert!(phase_shift(&p, 0.0).is_err());
    }

    #[test]
    fn narrow_grid_rejected() {
        let p = GaussianPotential::new(0.1, 1.0).unwrap();
        assert!(fit_effective_range(&p, &[0.1, 0.101, 0.102, 0.103, 0.104]).is_err());
        assert!(fit_effective_range(&p, &[0.05, 0.1, 0.15]).is_err());
    }
}
