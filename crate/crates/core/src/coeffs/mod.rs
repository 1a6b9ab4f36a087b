//! The coefficients α and β of the effective interactions: closed forms,
//! regulated direct sums over oscillator states, and the extrapolated
//! three-body coefficient α₃⁽³⁾.

mod alpha33;
pub mod special;

pub use alpha33::{
    alpha3_3, alpha3_3_partial_sums, alpha3_3_sum, calibration_error, grid_with_max, Alpha33, DEFAULT_GRID,
};

use crate::error::{domain, Result};
use crate::hobasis::{k_mixed, k_rel, k_rel0, k_sp};
use crate::numeric::{GaussLegendre, NeumaierSum};
use serde::{Deserialize, Serialize};
use special::{dilog, hyp_pfq, log_gamma_pos};
use std::f64::consts::{LN_2, PI};

/// How excitations above the cutoff are suppressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Keep states with excitation energy Δε < ω_c/ω.
    HardCutoff,
    /// Weight every energy denominator by exp(-Δε·ω/ω_c).
    Exponential,
}

/// Regulator scheme plus the cutoff ratio ω_c/ω of the frame it acts in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegulatorSpec {
    pub scheme: Scheme,
    pub cutoff_ratio: f64,
}

impl RegulatorSpec {
    pub fn new(scheme: Scheme, cutoff_ratio: f64) -> Result<Self> {
        if !(cutoff_ratio >= 2.0) || !cutoff_ratio.is_finite() {
            return Err(domain(format!("cutoff ratio must be finite and >= 2, got {cutoff_ratio}")));
        }
        Ok(Self { scheme, cutoff_ratio })
    }

    pub fn hard(cutoff_ratio: f64) -> Result<Self> {
        Self::new(Scheme::HardCutoff, cutoff_ratio)
    }

    pub fn exponential(cutoff_ratio: f64) -> Result<Self> {
        Self::new(Scheme::Exponential, cutoff_ratio)
    }

    /// The same physical cutoff seen from a trap of frequency ω' = ω·factor.
    pub fn rescaled(&self, omega_factor: f64) -> Result<Self> {
        Self::new(self.scheme, self.cutoff_ratio / omega_factor)
    }

    /// Weight attached to one energy denominator Δε.
    #[inline]
    pub fn weight(&self, de: f64) -> f64 {
        match self.scheme {
            Scheme::HardCutoff => {
                if de < self.cutoff_ratio {
                    1.0
                } else {
                    0.0
                }
            }
            Scheme::Exponential => (-de / self.cutoff_ratio).exp(),
        }
    }

    /// Largest k with weight(2k) non-negligible.
    pub fn max_index(&self) -> u32 {
        let lim = match self.scheme {
            Scheme::HardCutoff => (self.cutoff_ratio / 2.0).ceil() - 1.0,
            Scheme::Exponential => (20.0 * self.cutoff_ratio).ceil(),
        };
        lim.max(0.0) as u32
    }
}

/// How a coefficient value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    DirectSum,
    Extrapolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientValue {
    pub value: f64,
    pub uncertainty: f64,
    pub method: Method,
    pub regulator: Option<RegulatorSpec>,
}

impl CoefficientValue {
    pub fn analytic(value: f64) -> Self {
        Self { value, uncertainty: 0.0, method: Method::Analytic, regulator: None }
    }

    pub fn direct(value: f64, reg: RegulatorSpec) -> Self {
        Self { value, uncertainty: 0.0, method: Method::DirectSum, regulator: Some(reg) }
    }
}

// ---------------------------------------------------------------------------
// Closed forms

/// α₂⁽¹⁾ = sqrt(2/π).
pub fn alpha2_1() -> f64 {
    (2.0 / PI).sqrt()
}

/// α₂⁽¹,²⁾ = (3/4)·sqrt(2/π), the effective-range coefficient.
pub fn alpha2_12() -> f64 {
    0.75 * alpha2_1()
}

pub fn alpha3_2_analytic() -> f64 {
    let s3 = 3f64.sqrt();
    (2.0 / PI) * (2.0 * s3 / 3.0 + (8.0 - 4.0 * s3).ln() - 1.0)
}

pub fn alpha4_3_analytic() -> f64 {
    (2.0 / PI).powf(1.5) * (PI * PI / 24.0 + LN_2 - 0.5 * LN_2 * LN_2)
}

/// α₅⁽³⁾ through the dilogarithm.
pub fn alpha5_3_analytic() -> Result<f64> {
    let s3 = 3f64.sqrt();
    let l = (1.0 + s3 / 2.0).ln();
    Ok((2.0 / PI).powf(1.5) * (0.5 * dilog(0.5 - s3 / 4.0)? - l - 0.25 * (l - LN_2).powi(2) + LN_2))
}

/// α₅⁽³⁾ through ₄F₃(1,1,1,5/2; 2,2,2; 1/4).
pub fn alpha5_3_hypergeometric() -> Result<f64> {
    Ok(3.0 / (4.0 * (2.0 * PI).powf(1.5)) * hyp_pfq(&[1.0, 1.0, 1.0, 2.5], &[2.0, 2.0, 2.0], 0.25)?)
}

/// Large-cutoff form of β₂⁽²⁾ with the exponential regulator.
pub fn beta2_2_asymptotic(cutoff_ratio: f64) -> f64 {
    (2.0 / PI) * ((cutoff_ratio / 2.0).sqrt() - (1.0 - LN_2) - 1.5 * (1.0 / (2.0 * cutoff_ratio)).sqrt())
}

// ---------------------------------------------------------------------------
// Direct sums

/// Single-particle summands fall off like 2^{-n}; beyond this index they are
/// below 1e-60 and are skipped even when the regulator would keep them.
const CONVERGENT_CAP: u32 = 200;

fn sum_range<F: Fn(u32) -> f64>(lo: u32, hi: u32, f: F) -> f64 {
    let mut s = NeumaierSum::new();
    for n in lo..=hi {
        s.add(f(n));
    }
    s.value()
}

/// α₃⁽²⁾ = Σ_{n≥1} K_sp(n,0,0)²/(2n).
pub fn alpha3_2_sum(reg: &RegulatorSpec) -> f64 {
    sum_range(1, reg.max_index().min(CONVERGENT_CAP), |n| {
        let de = 2.0 * n as f64;
        k_sp(n, 0, 0).powi(2) / de * reg.weight(de)
    })
}

/// α₄,₁⁽³⁾ = Σ_{n1≥1, n2≥0} K(n1,0,0) K(n2,0,0) K(n1,n2,0) / (4 n1 (n1+n2)).
pub fn alpha4_1_sum(reg: &RegulatorSpec) -> f64 {
    let nmax = reg.max_index().min(CONVERGENT_CAP);
    let mut s = NeumaierSum::new();
    for n1 in 1..=nmax {
        let d1 = 2.0 * n1 as f64;
        let w1 = reg.weight(d1);
        if w1 == 0.0 {
            continue;
        }
        let k1 = k_sp(n1, 0, 0);
        for n2 in 0..=nmax - n1 {
            let d12 = 2.0 * (n1 + n2) as f64;
            let w = w1 * reg.weight(d12);
            if w == 0.0 {
                break;
            }
            s.add(k1 * k_sp(n2, 0, 0) * k_sp(n1, n2, 0) / (d1 * d12) * w);
        }
    }
    s.value()
}

/// α₄,₂⁽³⁾ = Σ_{n1,n2≥1} K(n1,0,0) K(n1,n2,0) K(n2,0,0) / (4 n1 n2).
pub fn alpha4_2_sum(reg: &RegulatorSpec) -> f64 {
    let nmax = reg.max_index().min(CONVERGENT_CAP);
    let mut s = NeumaierSum::new();
    for n1 in 1..=nmax {
        let d1 = 2.0 * n1 as f64;
        let k1 = k_sp(n1, 0, 0) / d1 * reg.weight(d1);
        for n2 in 1..=nmax {
            let d2 = 2.0 * n2 as f64;
            s.add(k1 * k_sp(n1, n2, 0) * k_sp(n2, 0, 0) / d2 * reg.weight(d2));
        }
    }
    s.value()
}

/// Summand of α₄,₃⁽³⁾ in the relative basis, sqrt(2/π) K_rel(n,0)²/(4n²).
fn alpha4_3_term(n: f64) -> f64 {
    // K_rel(n,0)² = (4/π^{3/2}) Γ(n+3/2)/Γ(n+1), written for real n so the
    // tail integral can use it.
    let k2 = 4.0 / PI.powf(1.5) * (log_gamma_pos(n + 1.5) - log_gamma_pos(n + 1.0)).exp();
    alpha2_1() * k2 / (4.0 * n * n)
}

/// Regulated partial sum of α₄,₃⁽³⁾; converges as (ω/ω_c)^{1/2}.
pub fn alpha4_3_sum(reg: &RegulatorSpec) -> f64 {
    sum_range(1, reg.max_index(), |n| {
        let de = 2.0 * n as f64;
        alpha4_3_term(n as f64) * reg.weight(de) * reg.weight(de)
    })
}

/// Σ_{n=1}^{∞} of the α₄,₃⁽³⁾ summand: explicit terms up to `nmax`, then the
/// Euler–Maclaurin remainder with the tail integral done by quadrature.
pub fn alpha4_3_sum_with_tail(nmax: u32) -> Result<f64> {
    if nmax < 10 {
        return Err(domain("alpha4_3_sum_with_tail needs nmax >= 10"));
    }
    let head = sum_range(1, nmax, |n| alpha4_3_term(n as f64));
    let m = nmax as f64;
    // ∫_M^∞ f(x) dx with x = M/u², which makes the integrand smooth at u = 0.
    let gl = GaussLegendre::new(24);
    let integrand = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let x = m / (u * u);
        alpha4_3_term(x) * 2.0 * m / (u * u * u)
    };
    let integral = gl.integrate_adaptive(&integrand, 0.0, 1.0, 1e-16)?;
    let h = 0.5;
    let d1 = (alpha4_3_term(m + h) - alpha4_3_term(m - h)) / (2.0 * h);
    let tail = integral - 0.5 * alpha4_3_term(m) - d1 / 12.0;
    Ok(head + tail)
}

/// α₅⁽³⁾ as the direct sum sqrt(2/π) Σ K_sp(n,0,0)²/(4n²). The summand
/// falls off like 4^{-n}, so the regulator only matters at small cutoffs.
pub fn alpha5_3_sum(reg: &RegulatorSpec) -> f64 {
    alpha2_1()
        * sum_range(1, reg.max_index().min(CONVERGENT_CAP), |n| {
            let de = 2.0 * n as f64;
            k_sp(n, 0, 0).powi(2) / (de * de) * reg.weight(de) * reg.weight(de)
        })
}

/// β₂⁽²⁾ = Σ_{n≥1} K_rel(n,0)²/(2n); diverges as (ω_c/ω)^{1/2}.
pub fn beta2_2(reg: &RegulatorSpec) -> f64 {
    sum_range(1, reg.max_index(), |n| {
        let de = 2.0 * n as f64;
        k_rel0(n).powi(2) / de * reg.weight(de)
    })
}

/// β₂⁽³⁾ as the double sum over intermediate relative states.
pub fn beta2_3_direct(reg: &RegulatorSpec) -> f64 {
    let nmax = reg.max_index() as usize;
    let a: Vec<f64> = (0..=nmax)
        .map(|n| {
            let dn = 2.0 * n as f64;
            if n == 0 {
                0.0
            } else {
                k_rel0(n as u32) / dn * reg.weight(dn)
            }
        })
        .collect();
    let mut s = NeumaierSum::new();
    for n in 1..=nmax {
        for np in 1..=nmax {
            s.add(a[n] * k_rel(n as u32, np as u32) * a[np]);
        }
    }
    s.value()
}

/// β₂⁽³⁾ = (β₂⁽²⁾)²/α₂⁽¹⁾.
pub fn beta2_3_factorized(reg: &RegulatorSpec) -> f64 {
    beta2_2(reg).powi(2) / alpha2_1()
}

/// β₃⁽³⁾ as the double sum through one relative and one single-particle
/// intermediate state.
pub fn beta3_3_direct(reg: &RegulatorSpec) -> f64 {
    let nmax = reg.max_index();
    let n1max = nmax.min(CONVERGENT_CAP);
    let b: Vec<f64> = (1..=n1max)
        .map(|n1| {
            let d1 = 2.0 * n1 as f64;
            k_sp(n1, 0, 0) / d1 * reg.weight(d1)
        })
        .collect();
    let mut s = NeumaierSum::new();
    for n in 1..=nmax {
        let dn = 2.0 * n as f64;
        let a = k_rel0(n) / dn * reg.weight(dn);
        for n1 in 1..=n1max {
            s.add(a * k_mixed(n, n1) * b[n1 as usize - 1]);
        }
    }
    s.value()
}

/// β₃⁽³⁾ = α₃⁽²⁾ β₂⁽²⁾ / α₂⁽¹⁾.
pub fn beta3_3_factorized(reg: &RegulatorSpec) -> f64 {
    alpha3_2_sum(reg) * beta2_2(reg) / alpha2_1()
}

/// α₃⁽³⁾ from `alpha3_3(&DEFAULT_GRID)`, stored so that callers needing only
/// the energies do not pay for the triple sum. A test recomputes it.
pub const ALPHA3_3_DEFAULT: f64 = 0.5649339190305367;

/// Calibrated uncertainty belonging to [`ALPHA3_3_DEFAULT`].
pub const ALPHA3_3_DEFAULT_UNCERTAINTY: f64 = 2.35331670223049e-6;

/// The convergent coefficients, by name, evaluated once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergentSet {
    pub alpha2_1: f64,
    pub alpha2_12: f64,
    pub alpha3_2: f64,
    pub alpha3_3: f64,
    pub alpha3_3_uncertainty: f64,
    pub alpha4_1: f64,
    pub alpha4_2: f64,
    pub alpha4_3: f64,
    pub alpha5_3: f64,
}

impl ConvergentSet {
    /// Closed forms where they exist, direct sums at a converged hard cutoff
    /// for α₄,₁ and α₄,₂, and the given α₃⁽³⁾.
    pub fn evaluate(a33: &CoefficientValue) -> Result<Self> {
        let reg = RegulatorSpec::hard(200.0)?;
        Ok(Self {
            alpha2_1: alpha2_1(),
            alpha2_12: alpha2_12(),
            alpha3_2: alpha3_2_analytic(),
            alpha3_3: a33.value,
            alpha3_3_uncertainty: a33.uncertainty,
            alpha4_1: alpha4_1_sum(&reg),
            alpha4_2: alpha4_2_sum(&reg),
            alpha4_3: alpha4_3_analytic(),
            alpha5_3: alpha5_3_analytic()?,
        })
    }

    /// [`ConvergentSet::evaluate`] with the stored default α₃⁽³⁾.
    pub fn reference() -> Result<Self> {
        Self::evaluate(&CoefficientValue {
            value: ALPHA3_3_DEFAULT,
            uncertainty: ALPHA3_3_DEFAULT_UNCERTAINTY,
            method: Method::Extrapolated,
            regulator: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regulator_validation() {
        assert!(RegulatorSpec::hard(1.0).is_err());
        assert!(RegulatorSpec::exponential(f64::NAN).is_err());
        let r = RegulatorSpec::hard(10.0).unwrap();
        assert_eq!(r.max_index(), 4);
        assert_eq!(r.weight(8.0), 1.0);
        assert_eq!(r.weight(10.0), 0.0);
        let r = RegulatorSpec::hard(11.0).unwrap();
        assert_eq!(r.max_index(), 5);
    }

    #[test]
    fn closed_forms() {
        assert!((alpha2_1() - 0.797_885).abs() < 1e-6);
        assert!((alpha2_12() - 0.598_413).abs() < 1e-6);
        assert!((alpha3_2_analytic() - 0.142_626).abs() < 1e-6);
        assert!((alpha4_3_analytic() - 0.438_946).abs() < 1e-6);
        assert!((alpha5_3_analytic().unwrap() - 0.051_916).abs() < 1e-6);
    }

    #[test]
    fn beta22_grows_like_sqrt_cutoff() {
        let b1 = beta2_2(&RegulatorSpec::exponential(100.0).unwrap());
        let b4 = beta2_2(&RegulatorSpec::exponential(400.0).unwrap());
        assert!(b4 > b1);
        assert!(((b4 - b1) / (2.0 / PI * (200f64.sqrt() - 50f64.sqrt())) - 1.0).abs() < 0.01);
    }
}
