//! Renormalized effective m-body interaction energies U₂, U₃, U₄ of trapped
//! bosons, the counterterm that produces them, and the N-boson energy.
//!
//! Internally lengths are in σ(ω) and energies in ħω; [`TrapContext`] holds
//! the physical inputs and converts once.

mod busch;

pub use busch::{exact_two_body_energy, fit_two_body_series};

use crate::coeffs::{beta2_2, beta3_3_direct, ConvergentSet, RegulatorSpec};
use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Unified atomic mass unit (kg).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Above this |a_t/σ(ω)| the series is not trusted.
pub const XI_WARN: f64 = 0.2;

/// Physical description of one trap and the interaction in it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapContext {
    /// Trap angular frequency ω (rad/s).
    pub omega: f64,
    /// Frequency ω₀ at which `a_t` is defined (rad/s); 0 means free space.
    pub omega0: f64,
    /// Trap scattering length a_t(ω₀) (m).
    pub a_t: f64,
    /// Effective range (m).
    pub r_eff: f64,
    /// Particle mass (kg).
    pub mass: f64,
    /// Regulator for the cutoff-dependent pieces, with ω_c/ω in the frame ω.
    pub regulator: RegulatorSpec,
    pub coefficients: ConvergentSet,
}

impl TrapContext {
    pub fn new(
        omega: f64,
        omega0: f64,
        a_t: f64,
        r_eff: f64,
        mass: f64,
        regulator: RegulatorSpec,
        coefficients: ConvergentSet,
    ) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(domain(format!("trap frequency must be positive, got {omega}")));
        }
        if !(omega0 >= 0.0) || !omega0.is_finite() {
            return Err(domain(format!("reference frequency must be >= 0, got {omega0}")));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(domain(format!("mass must be positive, got {mass}")));
        }
        if !a_t.is_finite() || !r_eff.is_finite() {
            return Err(domain("scattering length and effective range must be finite"));
        }
        Ok(Self { omega, omega0, a_t, r_eff, mass, regulator, coefficients })
    }

    /// A context in oscillator units: ω = 1, σ(ω) = 1, so `xi` = a_t/σ(ω)
    /// and `reff_ratio` = r_eff/σ(ω). `omega_ratio` is ω/ω₀ and may be
    /// infinite (ω₀ = 0).
    pub fn dimensionless(
        omega_ratio: f64,
        xi: f64,
        reff_ratio: f64,
        regulator: RegulatorSpec,
        coefficients: ConvergentSet,
    ) -> Result<Self> {
        if !(omega_ratio > 0.0) {
            return Err(domain(format!("omega/omega0 must be positive, got {omega_ratio}")));
        }
        Self::new(1.0, 1.0 / omega_ratio, xi, reff_ratio, HBAR, regulator, coefficients)
    }

    /// Oscillator length at frequency `w`.
    pub fn sigma_at(&self, w: f64) -> f64 {
        (HBAR / (self.mass * w)).sqrt()
    }

    /// σ(ω).
    pub fn sigma(&self) -> f64 {
        self.sigma_at(self.omega)
    }

    /// ξ_t = a_t(ω₀)/σ(ω).
    pub fn xi(&self) -> f64 {
        self.a_t / self.sigma()
    }

    /// r_eff/σ(ω).
    pub fn reff_ratio(&self) -> f64 {
        self.r_eff / self.sigma()
    }

    /// ω₀/ω.
    pub fn omega0_ratio(&self) -> f64 {
        self.omega0 / self.omega
    }

    /// The same interaction in a trap of frequency `omega`.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(omega, self.omega0, self.a_t, self.r_eff, self.mass, self.regulator, self.coefficients)
    }

    /// Message when ξ_t is outside the range where the expansion is trusted.
    pub fn validity_warning(&self) -> Option<String> {
        let xi = self.xi();
        (xi.abs() > XI_WARN)
            .then(|| format!("|a_t/sigma| = {:.3} exceeds {XI_WARN}; perturbative results are unreliable", xi.abs()))
    }

    /// Characteristic scattering frequency ω_s = ħ/(m a_t²).
    pub fn omega_s(&self) -> Result<f64> {
        if self.a_t == 0.0 {
            return Err(domain("omega_s is undefined for a_t = 0"));
        }
        Ok(HBAR / (self.mass * self.a_t * self.a_t))
    }

    /// Contact coupling g₂ = 4πħ² a_t/m (J·m³).
    pub fn g2(&self) -> f64 {
        4.0 * PI * HBAR * HBAR / self.mass * self.a_t
    }

    /// Derivative coupling g₂′ = (4πħ²/m)(r_eff a_t²/2) (J·m⁵).
    pub fn g2_prime(&self) -> f64 {
        4.0 * PI * HBAR * HBAR / self.mass * 0.5 * self.r_eff * self.a_t * self.a_t
    }
}

// ---------------------------------------------------------------------------
// Coefficient functions

/// c_m⁽ⁿ⁾(ω,ω₀) and d₂⁽¹,²⁾(ω,ω₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub c2_1: f64,
    pub c2_2: f64,
    pub c2_3: f64,
    pub d2_12: f64,
    pub c3_2: f64,
    pub c3_3: f64,
    /// One standard deviation, all of it from α₃⁽³⁾.
    pub c3_3_uncertainty: f64,
    pub c4_3: f64,
}

/// The frequency-dependent coefficients for a trap at ω with a_t fixed at
/// ω₀; only the ratio ω₀/ω matters.
pub fn coefficient_table(omega: f64, omega0: f64, set: &ConvergentSet) -> Result<CoefficientTable> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(domain(format!("trap frequency must be positive, got {omega}")));
    }
    if !(omega0 >= 0.0) || !omega0.is_finite() {
        return Err(domain(format!("reference frequency must be >= 0, got {omega0}")));
    }
    let r = omega0 / omega;
    let s = 1.0 - r.sqrt();
    let tp = 2.0 / PI;
    let c2_2 = tp * (1.0 - LN_2) * s;
    let c2_3 = tp.powf(1.5) * (1.0 - LN_2).powi(2) * s * s
        - tp.powf(1.5) * (PI * PI / 24.0 + LN_2 - 0.5 * LN_2 * LN_2) * (1.0 - r);
    let c3_3 =
        -12.0 * set.alpha3_2 * c2_2 / set.alpha2_1 + 12.0 * set.alpha3_3 - 6.0 * set.alpha4_3 - 18.0 * set.alpha5_3;
    Ok(CoefficientTable {
        c2_1: tp.sqrt(),
        c2_2,
        c2_3,
        d2_12: 0.75 * tp.sqrt() * (1.0 - r),
        c3_2: -6.0 * set.alpha3_2,
        c3_3,
        c3_3_uncertainty: 12.0 * set.alpha3_3_uncertainty,
        c4_3: 48.0 * set.alpha4_1 + 48.0 * set.alpha4_2 - 72.0 * set.alpha5_3,
    })
}

// ---------------------------------------------------------------------------
// Counterterm

/// a_ct(ω₀)/σ(ω₀) through `order`, and the bare length it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Counterterm {
    pub order: u8,
    pub regulator: RegulatorSpec,
    /// a_ct/σ(ω₀).
    pub value: f64,
    /// The second-order part of `value` alone.
    pub second_order: f64,
    /// a_bare/σ(ω₀) = (a_t + a_ct)/σ(ω₀).
    pub a_bare: f64,
}

/// Counterterm fixed by the renormalization condition at ω₀. `xi0` is
/// a_t/σ(ω₀), `reff0` is r_eff/σ(ω₀) and `reg` carries ω_c/ω₀.
pub fn counterterm(xi0: f64, reff0: f64, order: u8, reg: &RegulatorSpec, set: &ConvergentSet) -> Result<Counterterm> {
    if order != 2 && order != 3 {
        return Err(domain(format!("counterterm order must be 2 or 3, got {order}")));
    }
    let a21 = set.alpha2_1;
    let b22 = beta2_2(reg);
    let second_order = b22 / a21 * xi0 * xi0;
    let mut value = second_order;
    if order == 3 {
        let b23 = b22 * b22 / a21;
        value +=
            -(b23 - 2.0 * b22 * b22 / a21 - set.alpha4_3) * xi0.powi(3) / a21 - set.alpha2_12 / a21 * reff0 * xi0 * xi0;
    }
    Ok(Counterterm { order, regulator: *reg, value, second_order, a_bare: xi0 + value })
}

// ---------------------------------------------------------------------------
// Interaction energies

/// One U_m split by order in a_t; `effective_range` is the r_eff·a_t² term.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct OrderBreakdown {
    pub first: f64,
    pub second: f64,
    pub third: f64,
    pub effective_range: f64,
}

impl OrderBreakdown {
    pub fn total(&self) -> f64 {
        self.first + self.second + self.third + self.effective_range
    }
}

/// U₂, U₃, U₄ in units of ħω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionEnergies {
    pub u2: OrderBreakdown,
    pub u3: OrderBreakdown,
    pub u4: OrderBreakdown,
    pub warnings: Vec<String>,
}

fn table_for(ctx: &TrapContext) -> Result<CoefficientTable> {
    coefficient_table(ctx.omega, ctx.omega0, &ctx.coefficients)
}

pub fn u2(ctx: &TrapContext) -> Result<OrderBreakdown> {
    let t = table_for(ctx)?;
    let x = ctx.xi();
    Ok(OrderBreakdown {
        first: t.c2_1 * x,
        second: t.c2_2 * x * x,
        third: t.c2_3 * x.powi(3),
        effective_range: t.d2_12 * ctx.reff_ratio() * x * x,
    })
}

pub fn u3(ctx: &TrapContext) -> Result<OrderBreakdown> {
    let t = table_for(ctx)?;
    let x = ctx.xi();
    Ok(OrderBreakdown { second: t.c3_2 * x * x, third: t.c3_3 * x.powi(3), ..Default::default() })
}

pub fn u4(ctx: &TrapContext) -> Result<OrderBreakdown> {
    let t = table_for(ctx)?;
    Ok(OrderBreakdown { third: t.c4_3 * ctx.xi().powi(3), ..Default::default() })
}

/// U₂, U₃ and U₄ together, with the validity warning if any.
pub fn interaction_energies(ctx: &TrapContext) -> Result<InteractionEnergies> {
    Ok(InteractionEnergies {
        u2: u2(ctx)?,
        u3: u3(ctx)?,
        u4: u4(ctx)?,
        warnings: ctx.validity_warning().into_iter().collect(),
    })
}

/// U₂ and U₃ assembled at finite cutoff from the regulated β sums and the
/// counterterm, before the cutoff is taken to infinity. The counterterm is
/// third order in U₂ and second order in U₃, and the product of counterterm
/// and a_t keeps only the second-order counterterm, so every term is
/// consistently truncated at a_t³.
///
/// Needs ω₀ > 0. Differs from [`u2`]/[`u3`] by terms of order
/// (ω/ω_c)^{1/2}.
pub fn regulated_u2_u3(ctx: &TrapContext) -> Result<(f64, f64)> {
    if !(ctx.omega0 > 0.0) {
        return Err(domain("the regulated assembly needs omega0 > 0"));
    }
    let set = &ctx.coefficients;
    let a21 = set.alpha2_1;
    let reg = ctx.regulator;
    let reg0 = reg.rescaled(ctx.omega0_ratio())?;
    let scale = (ctx.omega / ctx.omega0).sqrt(); // σ(ω₀)/σ(ω)
    let x = ctx.xi();
    let rho = ctx.reff_ratio();
    let ct = counterterm(x / scale, rho / scale, 3, &reg0, set)?;
    let act = ct.value * scale;
    let act2 = ct.second_order * scale;

    let b22 = beta2_2(&reg);
    let b23 = b22 * b22 / a21;
    let u2 = a21 * x - b22 * x * x + a21 * act - set.alpha4_3 * x.powi(3) + b23 * x.powi(3) - 2.0 * b22 * act2 * x
        + set.alpha2_12 * rho * x * x;

    let b33 = beta3_3_direct(&reg);
    let u3 = -6.0 * set.alpha3_2 * x * x + 12.0 * set.alpha3_3 * x.powi(3) + 12.0 * b33 * x.powi(3)
        - 12.0 * set.alpha3_2 * act2 * x
        - 6.0 * set.alpha4_3 * x.powi(3)
        - 18.0 * set.alpha5_3 * x.powi(3);
    Ok((u2, u3))
}

/// N-boson ground-state energy in ħω:
/// 3N/2 + U₂ N(N-1)/2! + U₃ N(N-1)(N-2)/3! + U₄ N(N-1)(N-2)(N-3)/4!.
pub fn total_energy(ctx: &TrapContext, n: u64) -> Result<f64> {
    let e = interaction_energies(ctx)?;
    Ok(energy_from_u(n, e.u2.total(), e.u3.total(), e.u4.total()))
}

pub(crate) fn energy_from_u(n: u64, u2: f64, u3: f64, u4: f64) -> f64 {
    let nf = n as f64;
    let ff = |m: u64| -> f64 { (0..m).map(|k| nf - k as f64).product() };
    1.5 * nf + u2 * ff(2) / 2.0 + u3 * ff(3) / 6.0 + u4 * ff(4) / 24.0
}

// ---------------------------------------------------------------------------
// Rescaled energies

/// Ũ_m = U_m·ω/ω_s at one ω/ω_s, split into leading and higher orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaledPoint {
    pub omega_over_omegas: f64,
    pub u2t_1: f64,
    pub u2t_23: f64,
    pub u3t_2: f64,
    pub u3t_23: f64,
    pub u4t_3: f64,
    /// Ũ₂ from the exact two-body energy minus Ũ₂⁽¹⁾; NaN when the exact
    /// root is not available (|ξ| ≥ 1 or ω₀ ≠ 0).
    pub u2exact_minus_u2t1: f64,
}

/// Ũ₂, Ũ₃, Ũ₄ as functions of ω/ω_s for the interaction in `ctx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledU {
    ctx: TrapContext,
    omega_s: f64,
}

/// Ties the rescaled curves to the scattering length and mass in `ctx`.
pub fn rescaled_u(ctx: &TrapContext) -> Result<RescaledU> {
    Ok(RescaledU { ctx: *ctx, omega_s: ctx.omega_s()? })
}

impl RescaledU {
    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }

    /// Values at ω/ω_s = `w`. With ω₀ = 0 these are the power series
    /// c·(ω/ω_s)^{k/2}; with ω₀ > 0 the coefficients depend on ω.
    /// At `w` = 0 every entry is zero.
    pub fn at(&self, w: f64) -> Result<RescaledPoint> {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(domain(format!("omega/omega_s must be >= 0, got {w}")));
        }
        if w == 0.0 {
            return Ok(RescaledPoint {
                omega_over_omegas: 0.0,
                u2t_1: 0.0,
                u2t_23: 0.0,
                u3t_2: 0.0,
                u3t_23: 0.0,
                u4t_3: 0.0,
                u2exact_minus_u2t1: 0.0,
            });
        }
        let c = self.ctx.with_omega(w * self.omega_s)?;
        let (e2, e3, e4) = (u2(&c)?, u3(&c)?, u4(&c)?);
        let exact = if self.ctx.omega0 == 0.0 && self.ctx.r_eff == 0.0 {
            exact_two_body_energy(c.xi()).map(|e| (e - 1.5) * w - e2.first * w).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        Ok(RescaledPoint {
            omega_over_omegas: w,
            u2t_1: e2.first * w,
            u2t_23: (e2.second + e2.third + e2.effective_range) * w,
            u3t_2: e3.second * w,
            u3t_23: (e3.second + e3.third) * w,
            u4t_3: e4.third * w,
            u2exact_minus_u2t1: exact,
        })
    }

    /// [`RescaledU::at`] over `n` points spaced evenly in (0, `w_max`].
    pub fn scan(&self, w_max: f64, n: usize) -> Result<Vec<RescaledPoint>> {
        if n == 0 {
            return Err(domain("scan needs at least one point"));
        }
        (1..=n).map(|k| self.at(w_max * k as f64 / n as f64)).collect()
    }
}

// ---------------------------------------------------------------------------
// Scheme independence

/// |E(ω;ω₀) − E(ω;ω₀′)| for `n` bosons, where a_t(ω₀′) is obtained from
/// U₂(ω₀′;ω₀) through the renormalization condition. Of order ξ⁴.
pub fn scheme_independence_residual(ctx: &TrapContext, omega0_prime: f64, n: u64) -> Result<f64> {
    if !(omega0_prime > 0.0) || !omega0_prime.is_finite() {
        return Err(domain(format!("omega0' must be positive, got {omega0_prime}")));
    }
    let at_prime_trap = ctx.with_omega(omega0_prime)?;
    let u2_prime = u2(&at_prime_trap)?.total();
    let a_t_prime = u2_prime * ctx.sigma_at(omega0_prime) / ctx.coefficients.alpha2_1;
    let other = TrapContext { omega0: omega0_prime, a_t: a_t_prime, ..*ctx };
    Ok((total_energy(ctx, n)? - total_energy(&other, n)?).abs())
}

/// ω_s for ⁸⁷Rb with a_t = 5.3 nm, as 2π·frequency (rad/s).
pub fn rubidium87_omega_s() -> f64 {
    HBAR / (86.909_180_5 * ATOMIC_MASS_UNIT * 5.3e-9f64.powi(2))
}
