//! The three-body third-order coefficient α₃⁽³⁾: a triple sum over
//! single-particle pairs whose partial sums converge only as (ω/ω_c)^{1/2},
//! so the value is obtained by extrapolating partial sums in the cutoff.

use super::{alpha4_3_analytic, alpha4_3_sum, CoefficientValue, Method, RegulatorSpec, Scheme};
use crate::error::{domain, Result};
use crate::extrapolate::{extrapolate_calibrated, fit_cutoff_series, CalibratedExtrapolation};
use crate::hobasis::LogGammaCache;
use crate::numeric::NeumaierSum;
use rayon::prelude::*;

/// Hard cutoffs ω_c/ω used for the extrapolation unless the caller asks
/// otherwise.
///
/// A hard-cutoff partial sum is a step function of ω_c/ω, constant on
/// (2M-2, 2M]. The grid sits on the odd midpoints of those steps; placing it
/// on the even edges adds a spurious (ω/ω_c)^{3/2} term that the
/// three-parameter fit cannot absorb.
pub const DEFAULT_GRID: [f64; 6] = [559.0, 799.0, 1119.0, 1599.0, 2239.0, 3199.0];

/// The default grid's shape rescaled so its largest cutoff is near `rmax`,
/// each point moved down to an odd integer.
pub fn grid_with_max(rmax: f64) -> Result<Vec<f64>> {
    if !(rmax >= 40.0) || !rmax.is_finite() {
        return Err(domain(format!("largest cutoff must be at least 40, got {rmax}")));
    }
    let top = DEFAULT_GRID[DEFAULT_GRID.len() - 1];
    let mut grid: Vec<f64> = DEFAULT_GRID
        .iter()
        .map(|&r| {
            let x = r / top * rmax;
            2.0 * ((x - 1.0 + 1e-9) / 2.0).floor() + 1.0
        })
        .collect();
    grid.dedup();
    Ok(grid)
}

/// |extrapolated - exact| for α₄,₃⁽³⁾ on `grid`: the calibration error that
/// becomes the uncertainty of α₃⁽³⁾.
pub fn calibration_error(grid: &[f64]) -> Result<f64> {
    let cal: Vec<(f64, f64)> =
        grid.iter().map(|&r| RegulatorSpec::hard(r).map(|reg| (r, alpha4_3_sum(&reg)))).collect::<Result<_>>()?;
    Ok((fit_cutoff_series(&cal)?.intercept - alpha4_3_analytic()).abs())
}

/// Pair-energy shells beyond this are refused; the sum costs O(S⁴).
const MAX_SHELLS: usize = 2400;

const BATCH: usize = 8;

/// acc[b] = Σ_small k[small]·vt[small·BATCH + b], accumulated in four
/// interleaved streams that are combined in a fixed order. All terms are
/// non-negative, so no compensation is needed.
#[inline(always)]
fn batch_dot_generic(k: &[f64], vt: &[f64]) -> [f64; BATCH] {
    const STREAMS: usize = 4;
    let mut acc = [[0.0f64; BATCH]; STREAMS];
    let kc = k.chunks_exact(STREAMS);
    let rem = kc.remainder();
    let mut vchunks = vt.chunks_exact(BATCH * STREAMS);
    for (ks, vs) in kc.zip(&mut vchunks) {
        for s in 0..STREAMS {
            for b in 0..BATCH {
                acc[s][b] += ks[s] * vs[s * BATCH + b];
            }
        }
    }
    let base = k.len() - rem.len();
    for (i, &ks) in rem.iter().enumerate() {
        let off = (base + i) * BATCH;
        for b in 0..BATCH {
            acc[i][b] += ks * vt[off + b];
        }
    }
    let mut out = [0.0f64; BATCH];
    for b in 0..BATCH {
        out[b] = (acc[0][b] + acc[1][b]) + (acc[2][b] + acc[3][b]);
    }
    out
}

// Same operations in the same order (no fused multiply-add), so the result
// is bit-identical to the baseline path; only the vector width differs.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn batch_dot_avx2(k: &[f64], vt: &[f64]) -> [f64; BATCH] {
    batch_dot_generic(k, vt)
}

#[inline]
fn batch_dot(k: &[f64], vt: &[f64]) -> [f64; BATCH] {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2, checked just above.
            return unsafe { batch_dot_avx2(k, vt) };
        }
    }
    batch_dot_generic(k, vt)
}

/// Shell contributions for one angular momentum l.
///
/// A term (n1, n2, n3) has intermediate pair energies 2(n1+n2+l) and
/// 2(n1+n3+l); it is filed under shell n1 + l + max(n2, n3), so a hard
/// cutoff R keeps exactly the shells s with 2s < R. Eight values of n1 are
/// processed together so each row of the K block is read once per batch.
fn shells_for_l(cache: &LogGammaCache, s_max: usize, l: usize, weight: &dyn Fn(f64) -> f64) -> Vec<NeumaierSum> {
    let mut bins = vec![NeumaierSum::new(); s_max];
    let deg = (2 * l + 1) as f64;
    let m_l = s_max - l;
    let block = cache.ksp_block(l, m_l);
    let row = |n: usize| &block[n * m_l..(n + 1) * m_l];
    // vt[n2 * BATCH + b] = v for n1 = start + b; zero outside its range.
    let mut vt = vec![0.0; m_l * BATCH];
    let mut start = 0;
    while start < m_l {
        let width = BATCH.min(m_l - start);
        vt.iter_mut().for_each(|x| *x = 0.0);
        for b in 0..width {
            let n1 = start + b;
            let r1 = row(n1);
            for n2 in 0..m_l - n1 {
                let e = (n1 + n2 + l) as f64;
                vt[n2 * BATCH + b] = if e == 0.0 { 0.0 } else { r1[n2] / (2.0 * e) * weight(2.0 * e) };
            }
        }
        for big in 0..m_l - start {
            let krow = row(big);
            let acc = batch_dot(&krow[..big], &vt);
            let vb = &vt[big * BATCH..big * BATCH + BATCH];
            for b in 0..width {
                if vb[b] != 0.0 {
                    bins[start + b + l + big].add(deg * vb[b] * (krow[big] * vb[b] + 2.0 * acc[b]));
                }
            }
        }
        start += width;
    }
    bins
}

/// Shell-resolved α₃⁽³⁾ contributions for shells 0..shells, reduced over l
/// in a fixed order so the result does not depend on thread scheduling.
fn shell_contributions(shells: usize, weight: &(dyn Fn(f64) -> f64 + Sync)) -> Vec<f64> {
    let cache = LogGammaCache::new(2 * shells + 2);
    let per_l: Vec<Vec<NeumaierSum>> =
        (0..shells).into_par_iter().map(|l| shells_for_l(&cache, shells, l, weight)).collect();
    (0..shells)
        .map(|s| {
            let mut acc = NeumaierSum::new();
            for bins in &per_l {
                acc.add(bins[s].value());
            }
            acc.value()
        })
        .collect()
}

fn shells_for_cutoff(cutoff_ratio: f64) -> usize {
    (cutoff_ratio / 2.0).ceil() as usize
}

/// Hard-cutoff partial sums of α₃⁽³⁾ at each requested ω_c/ω, from one
/// pass over the largest cutoff.
pub fn alpha3_3_partial_sums(cutoffs: &[f64]) -> Result<Vec<f64>> {
    for &r in cutoffs {
        RegulatorSpec::hard(r)?;
    }
    let rmax = cutoffs.iter().copied().fold(0.0, f64::max);
    let shells = shells_for_cutoff(rmax);
    if shells > MAX_SHELLS {
        return Err(domain(format!("cutoff {rmax} needs {shells} shells, limit is {MAX_SHELLS}")));
    }
    let contrib = shell_contributions(shells, &|_| 1.0);
    Ok(cutoffs
        .iter()
        .map(|&r| {
            let keep = shells_for_cutoff(r);
            let mut acc = NeumaierSum::new();
            for c in &contrib[..keep] {
                acc.add(*c);
            }
            acc.value()
        })
        .collect())
}

/// α₃⁽³⁾ at one regulator setting.
pub fn alpha3_3_sum(reg: &RegulatorSpec) -> Result<f64> {
    match reg.scheme {
        Scheme::HardCutoff => Ok(alpha3_3_partial_sums(&[reg.cutoff_ratio])?[0]),
        Scheme::Exponential => {
            let shells = (reg.max_index() as usize + 1).min(MAX_SHELLS + 1);
            if shells > MAX_SHELLS {
                return Err(domain(format!(
                    "exponential regulator at {} needs more than {MAX_SHELLS} shells",
                    reg.cutoff_ratio
                )));
            }
            let r = *reg;
            Ok(crate::numeric::ksum(shell_contributions(shells, &move |de| r.weight(de))))
        }
    }
}

/// Extrapolated α₃⁽³⁾ together with the fits behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct Alpha33 {
    pub coefficient: CoefficientValue,
    pub grid: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub calibration_sums: Vec<f64>,
    pub extrapolation: CalibratedExtrapolation,
}

/// α₃⁽³⁾ from hard-cutoff partial sums on `grid`, fitted to
/// a + b (ω/ω_c)^{1/2} + c ω/ω_c. The uncertainty is the error the same
/// procedure makes on α₄,₃⁽³⁾, whose exact value is known.
pub fn alpha3_3(grid: &[f64]) -> Result<Alpha33> {
    let partial_sums = alpha3_3_partial_sums(grid)?;
    let calibration_sums: Vec<f64> =
        grid.iter().map(|&r| RegulatorSpec::hard(r).map(|reg| alpha4_3_sum(&reg))).collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> = grid.iter().copied().zip(partial_sums.iter().copied()).collect();
    let cal: Vec<(f64, f64)> = grid.iter().copied().zip(calibration_sums.iter().copied()).collect();
    let extrapolation = extrapolate_calibrated(&pts, &cal, alpha4_3_analytic())?;
    Ok(Alpha33 {
        coefficient: CoefficientValue {
            value: extrapolation.value,
            uncertainty: extrapolation.uncertainty,
            method: Method::Extrapolated,
            regulator: None,
        },
        grid: grid.to_vec(),
        partial_sums,
        calibration_sums,
        extrapolation,
    })
}
