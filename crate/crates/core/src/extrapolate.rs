//! Removing the cutoff from partial sums.
//!
//! Partial sums S(ω_c/ω) of the divergent-tail coefficients behave as
//! a + b·x^{1/2} + c·x + … with x = ω/ω_c. The intercept a is the
//! cutoff-free value.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Unweighted linear least squares via SVD; errors on rank deficiency.
pub fn lstsq(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if m != y.len() || n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("lstsq: inconsistent dimensions".into()));
    }
    if m < n {
        return Err(Error::RankDeficient(format!("{m} equations for {n} unknowns")));
    }
    let a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(y);
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Invalid("lstsq: non-finite input".into()));
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-13 * smax) {
        return Err(Error::RankDeficient(format!("condition estimate {smax:e}/{smin:e}")));
    }
    let sol = svd.solve(&b, 0.0).map_err(|e| Error::RankDeficient(e.to_string()))?;
    Ok(sol.iter().copied().collect())
}

/// Result of fitting y = a + b·x^{1/2} + c·x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffFit {
    pub intercept: f64,
    pub sqrt_coeff: f64,
    pub linear_coeff: f64,
    /// Root-mean-square residual of the fit.
    pub rms_residual: f64,
}

impl CutoffFit {
    pub fn eval(&self, cutoff_ratio: f64) -> f64 {
        let x = 1.0 / cutoff_ratio;
        self.intercept + self.sqrt_coeff * x.sqrt() + self.linear_coeff * x
    }
}

/// Fit partial sums given as (ω_c/ω, S) pairs. Needs at least four
/// distinct cutoffs.
pub fn fit_cutoff_series(points: &[(f64, f64)]) -> Result<CutoffFit> {
    let mut ratios: Vec<f64> = points.iter().map(|p| p.0).collect();
    ratios.sort_by(f64::total_cmp);
    ratios.dedup();
    if ratios.len() < 4 {
        return Err(Error::RankDeficient(format!("need at least 4 distinct cutoffs, got {}", ratios.len())));
    }
    if ratios.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::Invalid("cutoff ratios must be positive and finite".into()));
    }
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|&(r, _)| {
            let x = 1.0 / r;
            vec![1.0, x.sqrt(), x]
        })
        .collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let c = lstsq(&rows, &y)?;
    let fit = CutoffFit { intercept: c[0], sqrt_coeff: c[1], linear_coeff: c[2], rms_residual: 0.0 };
    let ss: f64 = points.iter().map(|&(r, v)| (fit.eval(r) - v).powi(2)).sum();
    Ok(CutoffFit { rms_residual: (ss / points.len() as f64).sqrt(), ..fit })
}

/// Extrapolated value with an uncertainty calibrated on a coefficient whose
/// exact value is known and whose partial sums were taken on the same grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibratedExtrapolation {
    pub value: f64,
    pub uncertainty: f64,
    pub fit: CutoffFit,
    pub calibration_fit: CutoffFit,
}

pub fn extrapolate_calibrated(
    target: &[(f64, f64)],
    calibration: &[(f64, f64)],
    calibration_exact: f64,
) -> Result<CalibratedExtrapolation> {
    let fit = fit_cutoff_series(target)?;
    let calibration_fit = fit_cutoff_series(calibration)?;
    Ok(CalibratedExtrapolation {
        value: fit.intercept,
        uncertainty: (calibration_fit.intercept - calibration_exact).abs(),
        fit,
        calibration_fit,
    })
}
