//! Harmonic-oscillator orbitals and the contact-interaction matrix
//! elements between them.
//!
//! Orbitals are φ_{nlm}(r) = N_nl r^l e^{-r²/2} L_n^{(l+1/2)}(r²) Y_lm with
//! energy 2n + l + 3/2, lengths in σ.

use crate::coeffs::special::log_gamma_pos;
use crate::error::{domain, Result};
use crate::numeric::GaussLegendre;
use std::f64::consts::{LN_2, PI};

/// One single-particle orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Orbital {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl Orbital {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(domain(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        Ok(Self { n, l, m })
    }

    pub fn ground() -> Self {
        Self { n: 0, l: 0, m: 0 }
    }

    /// Energy 2n + l + 3/2 in ħω.
    pub fn energy(&self) -> f64 {
        (2 * self.n + self.l) as f64 + 1.5
    }
}

/// Excitation energy of the pair (n1 l)(n2 l) above two ground orbitals.
pub fn delta_eps_sp(n1: u32, l1: u32, n2: u32, l2: u32) -> f64 {
    (2 * n1 + 2 * n2 + l1 + l2) as f64
}

/// Contact element between the ground pair and the pair (n1 l m)(n2 l -m),
/// normalized so that K_sp(0,0,0) = sqrt(2/π).
pub fn k_sp(n1: u32, n2: u32, l: u32) -> f64 {
    let (n1f, n2f, lf) = (n1 as f64, n2 as f64, l as f64);
    let ln = 0.5 * (2.0 / PI).ln() - (n1f + n2f + lf) * LN_2 + log_gamma_pos(n1f + n2f + lf + 1.5)
        - 0.5
            * (log_gamma_pos(n1f + 1.0)
                + log_gamma_pos(n2f + 1.0)
                + log_gamma_pos(n1f + lf + 1.5)
                + log_gamma_pos(n2f + lf + 1.5));
    ln.exp()
}

/// Matrix element between the ground pair and a pair with relative
/// excitation n and centre of mass in its ground state.
pub fn k_rel0(n: u32) -> f64 {
    let nf = n as f64;
    (2.0f64.ln() - 0.75 * PI.ln() + 0.5 * (log_gamma_pos(nf + 1.5) - log_gamma_pos(nf + 1.0))).exp()
}

/// Relative-basis element between relative states n and n', both with
/// the centre of mass in its ground state.
pub fn k_rel(n: u32, np: u32) -> f64 {
    if np == 0 {
        return k_rel0(n);
    }
    (PI / 2.0).sqrt() * k_rel0(n) * k_rel0(np)
}

/// Element connecting relative state n (centre of mass at rest) with the
/// single-particle pair (n1 0)(0 0).
pub fn k_mixed(n: u32, n1: u32) -> f64 {
    (PI / 2.0).sqrt() * k_rel0(n) * k_sp(n1, 0, 0)
}

/// ln Γ(k+1) and ln Γ(k+3/2) for k < len, shared by table builders.
#[derive(Debug, Clone)]
pub struct LogGammaCache {
    int: Vec<f64>,
    half: Vec<f64>,
}

impl LogGammaCache {
    pub fn new(len: usize) -> Self {
        Self {
            int: (0..len).map(|k| log_gamma_pos(k as f64 + 1.0)).collect(),
            half: (0..len).map(|k| log_gamma_pos(k as f64 + 1.5)).collect(),
        }
    }

    /// Square block K_sp(n1, n2, l) for n1, n2 < m, row-major.
    ///
    /// The first column comes from log-gammas; each row then follows from
    /// K(n1, n2+1, l) / K(n1, n2, l) = (n1+n2+l+3/2) / (2 sqrt((n2+1)(n2+l+3/2))),
    /// which keeps the relative error near m·ε.
    pub fn ksp_block(&self, l: usize, m: usize) -> Vec<f64> {
        assert!(2 * m + l <= self.int.len() + 1, "LogGammaCache too short");
        let c0 = 0.5 * (2.0 / PI).ln();
        let lf = l as f64;
        let step: Vec<f64> = (0..m).map(|n| 0.5 / ((n as f64 + 1.0) * (n as f64 + lf + 1.5)).sqrt()).collect();
        let mut out = Vec::with_capacity(m * m);
        for n1 in 0..m {
            let s = n1 + l;
            let mut k =
                (c0 - s as f64 * LN_2 + self.half[s] - 0.5 * (self.int[n1] + self.half[n1 + l] + self.half[l])).exp();
            for (n2, st) in step.iter().enumerate() {
                out.push(k);
                k *= ((n1 + n2 + l) as f64 + 1.5) * st;
            }
        }
        out
    }
}

/// Precomputed K_sp(n1, n2, l) for n1 + l < shells and n2 + l < shells.
#[derive(Debug, Clone)]
pub struct KspTable {
    shells: usize,
    offsets: Vec<usize>,
    data: Vec<f64>,
}

impl KspTable {
    pub fn new(shells: usize) -> Self {
        let cache = LogGammaCache::new(2 * shells + 2);
        let mut offsets = Vec::with_capacity(shells + 1);
        let mut data = Vec::new();
        for l in 0..shells {
            offsets.push(data.len());
            data.extend(cache.ksp_block(l, shells - l));
        }
        offsets.push(data.len());
        Self { shells, offsets, data }
    }

    pub fn shells(&self) -> usize {
        self.shells
    }

    /// Row of K_sp(n1, ·, l), valid for n1 + l < shells.
    #[inline]
    pub fn row(&self, l: usize, n1: usize) -> &[f64] {
        let m = self.shells - l;
        let start = self.offsets[l] + n1 * m;
        &self.data[start..start + m]
    }

    #[inline]
    pub fn get(&self, n1: usize, n2: usize, l: usize) -> f64 {
        self.row(l, n1)[n2]
    }
}

/// Normalized radial function N_nl r^l e^{-r²/2} L_n^{(l+1/2)}(r²).
pub fn radial_wavefunction(n: u32, l: u32, r: f64) -> f64 {
    let alpha = l as f64 + 0.5;
    let x = r * r;
    let (mut lm1, mut lcur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * lcur - (kf + alpha) * lm1) / (kf + 1.0);
        lm1 = lcur;
        lcur = next;
    }
    let ln_norm = 0.5 * (2.0f64.ln() + log_gamma_pos(n as f64 + 1.0) - log_gamma_pos(n as f64 + l as f64 + 1.5));
    let prefactor = if l == 0 { 1.0 } else { r.powi(l as i32) };
    ln_norm.exp() * prefactor * (-0.5 * x).exp() * lcur
}

/// K_sp by direct radial quadrature, (4/√π) ∫ R_{n1 l} R_{n2 l} e^{-r²} r² dr.
/// Independent of the Gamma-function closed form; used as its oracle.
pub fn k_sp_quadrature(n1: u32, n2: u32, l: u32) -> Result<f64> {
    let gl = GaussLegendre::new(20);
    let f = |r: f64| radial_wavefunction(n1, l, r) * radial_wavefunction(n2, l, r) * (-r * r).exp() * r * r;
    let v = gl.integrate_adaptive(&f, 0.0, 9.0, 1e-15)?;
    Ok(4.0 / PI.sqrt() * v)
}
