//! Aggregation and scaling-law checks.

use std::fmt;

use thiserror::Error;

use crate::growth::Growth;

/// Ratio series counts as consistent with a bound when its top three sizes
/// differ by less than this fraction of the smallest of them.
pub const CONSISTENCY_TOLERANCE: f64 = 0.30;

const Z95: f64 = 1.959_963_984_540_054;

/// One trial reduced to what scaling needs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    /// Sweep value.
    pub n: usize,
    /// Argument passed to the bound (differs from `n` for MAX).
    pub scale: f64,
    pub iterations: f64,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SizeSummary {
    pub n: usize,
    pub scale: f64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// 95% Wilson score interval for the success rate.
    pub success_interval: (f64, f64),
    /// Statistics over successful trials.
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    /// `mean / bound(scale)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub bound: String,
    pub sizes: Vec<SizeSummary>,
    /// Least-squares fit of `ln mean` against `ln scale`.
    pub slope: f64,
    pub intercept: f64,
    /// `(max - min) / min` of the ratio over the three largest sizes.
    pub ratio_variation: f64,
    pub consistent: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("need at least 3 sizes with a successful trial, found {0}")]
    InsufficientData(usize),
}

pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation; zero for fewer than two values.
pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let mx = mean(xs);
    let my = mean(ys);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Per-size summaries of every size in the data, in increasing order.
pub fn summarize(observations: &[Observation], bound: &Growth) -> Vec<SizeSummary> {
    let mut sizes: Vec<usize> = observations.iter().map(|o| o.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| {
            let at: Vec<&Observation> = observations.iter().filter(|o| o.n == n).collect();
            let scale = at[0].scale;
            let mut its: Vec<f64> = at.iter().filter(|o| o.success).map(|o| o.iterations).collect();
            let successes = its.len();
            let m = if its.is_empty() { f64::NAN } else { mean(&its) };
            let sd = std_dev(&its);
            SizeSummary {
                n,
                scale,
                trials: at.len(),
                successes,
                success_rate: successes as f64 / at.len() as f64,
                success_interval: wilson_interval(successes, at.len()),
                mean: m,
                median: median(&mut its),
                std_dev: sd,
                ratio: m / bound.eval(scale),
            }
        })
        .collect()
}

/// Confronts mean iterations with a candidate bound.
pub fn fit_scaling(observations: &[Observation], bound: &Growth) -> Result<ScalingFit, StatsError> {
    let sizes = summarize(observations, bound);
    let usable: Vec<&SizeSummary> = sizes.iter().filter(|s| s.successes > 0).collect();
    if usable.len() < 3 {
        return Err(StatsError::InsufficientData(usable.len()));
    }
    let xs: Vec<f64> = usable.iter().map(|s| s.scale.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|s| s.mean.max(f64::MIN_POSITIVE).ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let top: Vec<f64> = usable[usable.len() - 3..].iter().map(|s| s.ratio).collect();
    let lo = top.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = top.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ratio_variation = (hi - lo) / lo;
    Ok(ScalingFit {
        bound: bound.text().to_string(),
        sizes,
        slope,
        intercept,
        ratio_variation,
        consistent: ratio_variation < CONSISTENCY_TOLERANCE,
    })
}

impl fmt::Display for ScalingFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>8} {:>7} {:>9} {:>17} {:>12} {:>12} {:>12} {:>12}",
            "n", "trials", "success", "95% interval", "mean", "median", "std", "mean/bound"
        )?;
        for s in &self.sizes {
            writeln!(
                f,
                "{:>8} {:>7} {:>9.3} {:>8.3}-{:<8.3} {:>12.1} {:>12.1} {:>12.1} {:>12.4}",
                s.n, s.trials, s.success_rate, s.success_interval.0, s.success_interval.1, s.mean, s.median, s.std_dev, s.ratio
            )?;
        }
        writeln!(f, "log-log slope {:.3}, intercept {:.3}", self.slope, self.intercept)?;
        write!(
            f,
            "bound {}: ratio varies {:.1}% over the top three sizes -> {}",
            self.bound,
            100.0 * self.ratio_variation,
            if self.consistent { "consistent" } else { "inconsistent" }
        )
    }
}
