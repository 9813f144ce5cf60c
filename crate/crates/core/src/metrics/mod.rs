//! Masked error metrics, log-log slope fits and difficulty tiers.

mod plot;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError};

pub use plot::{loglog_svg, Series};

/// Band that counts a fitted slope as matching the `1/B` rate.
pub const SLOPE_BAND: (f64, f64) = (-1.05, -0.95);

/// Reported for identical fields.
pub const PSNR_CAP_DB: f64 = 300.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub mse: f64,
    pub psnr_db: f64,
    pub snr_db: f64,
    pub n_pixels: usize,
    /// Dynamic range of the clean field over the mask (1 if flat).
    pub peak: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("slope fit needs at least 3 budgets, got {0}")]
    TooFewPoints(usize),
    #[error("slope fit needs positive budgets and MSEs")]
    DegenerateFit,
}

fn capped_db(ratio: f64) -> f64 {
    if ratio.is_nan() {
        return f64::NAN;
    }
    (10.0 * ratio.log10()).min(PSNR_CAP_DB)
}

/// MSE, PSNR and SNR of `pred` against `clean` over `mask`.
pub fn masked_metrics(pred: &Field, clean: &Field, mask: &Field) -> Result<MetricReport, MetricsError> {
    pred.check_shape(clean)?;
    pred.check_shape(mask)?;
    let mut n = 0usize;
    let mut sq_err = 0.0;
    let mut power = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..mask.len() {
        if !mask.inside(k) {
            continue;
        }
        let c = f64::from(clean.data()[k]);
        let d = f64::from(pred.data()[k]) - c;
        n += 1;
        sq_err += d * d;
        power += c * c;
        lo = lo.min(c);
        hi = hi.max(c);
    }
    if n == 0 {
        return Err(FieldError::EmptyMask.into());
    }
    let mse = sq_err / n as f64;
    let range = hi - lo;
    let peak = if range > 0.0 { range } else { 1.0 };
    let (psnr_db, snr_db) = if sq_err == 0.0 {
        (PSNR_CAP_DB, PSNR_CAP_DB)
    } else {
        (capped_db(peak * peak / mse), capped_db(power / sq_err))
    };
    Ok(MetricReport { mse, psnr_db, snr_db, n_pixels: n, peak })
}

/// Least-squares slope of `log2(mse)` against `log2(budget)`.
pub fn convergence_slope(points: &[(f64, f64)]) -> Result<f64, MetricsError> {
    if points.len() < 3 {
        return Err(MetricsError::TooFewPoints(points.len()));
    }
    if points.iter().any(|&(b, m)| !(b > 0.0) || !(m > 0.0) || !m.is_finite()) {
        return Err(MetricsError::DegenerateFit);
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log2()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(MetricsError::DegenerateFit);
    }
    Ok(sxy / sxx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DifficultyTier {
    Easy,
    Medium,
    Hard,
    VeryHard,
}

impl DifficultyTier {
    pub const ALL: [DifficultyTier; 4] = [
        DifficultyTier::Easy,
        DifficultyTier::Medium,
        DifficultyTier::Hard,
        DifficultyTier::VeryHard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DifficultyTier::Easy => "easy",
            DifficultyTier::Medium => "medium",
            DifficultyTier::Hard => "hard",
            DifficultyTier::VeryHard => "very_hard",
        }
    }
}

/// Tier from the masked MSE of the `B = 32` estimate; intervals are
/// left-closed at 1e-2, 1 and 1e2.
pub fn difficulty_tier(mse_at_32: f64) -> DifficultyTier {
    if mse_at_32 < 1e-2 {
        DifficultyTier::Easy
    } else if mse_at_32 < 1.0 {
        DifficultyTier::Medium
    } else if mse_at_32 < 1e2 {
        DifficultyTier::Hard
    } else {
        DifficultyTier::VeryHard
    }
}

/// Mean and population standard deviation.
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    (m, var.sqrt())
}

pub fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Distribution of fitted slopes within one group of cases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeSummary {
    pub n: usize,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    /// Percentage of slopes inside [`SLOPE_BAND`].
    pub pct_in_band: f64,
}

impl SlopeSummary {
    pub fn new(slopes: &[f64]) -> Self {
        let inside = slopes.iter().filter(|s| (SLOPE_BAND.0..=SLOPE_BAND.1).contains(*s)).count();
        SlopeSummary {
            n: slopes.len(),
            median: median(slopes),
            min: slopes.iter().copied().fold(f64::INFINITY, f64::min),
            max: slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            pct_in_band: if slopes.is_empty() { 0.0 } else { 100.0 * inside as f64 / slopes.len() as f64 },
        }
    }
}
