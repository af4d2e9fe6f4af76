//! Estimators and comparison machinery connecting discrete samples to the
//! limit objects: tail-index estimation, Kolmogorov-Smirnov tests, total
//! variation between probability tables, and the walk-vs-limit scaling
//! experiment.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::levy::{assemble_pair, sample_jump_ppp, truncation_variance_rate, LevyError};
use crate::moves::LatticePath;
use crate::rng::Stream;
use crate::stepdist::StepDistribution;
use crate::walks::sample_unconditioned;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("k_fraction must lie in (0, 0.2], got {got}")]
    BadFraction { got: f64 },
    #[error("samples must be positive and non-constant for tail estimation")]
    DegenerateSample,
    #[error("empty sample")]
    EmptySample,
    #[error("table mass {total} is not 1 within 1e-9")]
    NotNormalized { total: f64 },
    #[error("scaling experiment requires the power-law step family")]
    NeedsPowerLaw,
    #[error(transparent)]
    Levy(#[from] LevyError),
}

/// Walk rescaled toward its limit: t maps to n^{-1/alpha} (X_{floor(nt)},
/// Y_{floor(nt)}), piecewise constant and right-continuous.
#[derive(Clone, Debug)]
pub struct RescaledPath {
    pub n: usize,
    pub alpha: f64,
    positions: Vec<(i64, i64)>,
}

impl RescaledPath {
    pub fn new(path: &LatticePath, alpha: f64) -> Self {
        RescaledPath {
            n: path.moves.len(),
            alpha,
            positions: path.positions(),
        }
    }

    /// Evaluate at t in [0, 1].
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let idx = ((self.n as f64 * t).floor() as usize).min(self.n);
        let scale = (self.n as f64).powf(-1.0 / self.alpha);
        let (x, y) = self.positions[idx];
        (x as f64 * scale, y as f64 * scale)
    }
}

/// Hill estimator over the top ceil(k_fraction * N) order statistics,
/// returned with its 1/sqrt(k) standard error.
pub fn hill_tail_index(samples: &[f64], k_fraction: f64) -> Result<(f64, f64), StatsError> {
    if samples.len() < 100 {
        return Err(StatsError::TooFewSamples { min: 100, got: samples.len() });
    }
    if !(k_fraction > 0.0 && k_fraction <= 0.2) {
        return Err(StatsError::BadFraction { got: k_fraction });
    }
    let mut sorted: Vec<f64> = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let k = ((k_fraction * n as f64).ceil() as usize).max(1);
    let threshold = sorted[n - 1 - k];
    if !threshold.is_finite() || threshold <= 0.0 || sorted[n - 1] <= threshold {
        return Err(StatsError::DegenerateSample);
    }
    let mean_log: f64 = sorted[n - k..]
        .iter()
        .map(|&x| (x / threshold).ln())
        .sum::<f64>()
        / k as f64;
    if !mean_log.is_finite() || mean_log <= 0.0 {
        return Err(StatsError::DegenerateSample);
    }
    let est = 1.0 / mean_log;
    Ok((est, est / (k as f64).sqrt()))
}

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1}
/// exp(-2 k^2 lambda^2).
fn ks_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut total = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = sign * (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        total += term;
        if term.abs() < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * total).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64), StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = xs[i].min(ys[j]);
        while i < n && xs[i] == v {
            i += 1;
        }
        while j < m && ys[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n as f64 * m as f64) / (n as f64 + m as f64);
    let sqrt_ne = ne.sqrt();
    let lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
    Ok((d, ks_survival(lambda)))
}

/// Total variation (1/2) sum |a - b| between two probability tables over a
/// shared countable index set; missing keys read as 0. Each table must sum
/// to 1 within 1e-9.
pub fn empirical_tv<K: Ord + Clone>(
    a: &BTreeMap<K, f64>,
    b: &BTreeMap<K, f64>,
) -> Result<f64, StatsError> {
    for t in [a, b] {
        let total: f64 = t.values().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(StatsError::NotNormalized { total });
        }
    }
    let mut keys: Vec<&K> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    let sum: f64 = keys
        .iter()
        .map(|k| {
            let pa = a.get(k).copied().unwrap_or(0.0);
            let pb = b.get(k).copied().unwrap_or(0.0);
            (pa - pb).abs()
        })
        .sum();
    Ok(0.5 * sum)
}

/// One marginal comparison inside a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TestResult {
    pub name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub n_a: usize,
    pub n_b: usize,
    pub passed: bool,
}

/// Outcome of the walk-vs-limit scaling experiment. The tests are
/// statistical: with the 1% level used here a correct implementation fails
/// a fixed-seed run with probability about 0.01 per marginal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingReport {
    pub n: usize,
    pub replicas: usize,
    pub alpha: f64,
    pub seed: u64,
    pub delta: f64,
    pub truncation_std_bound: f64,
    pub level: f64,
    pub ks_x_vs_w1: TestResult,
    pub ks_y_vs_w2: TestResult,
    pub ks_antisymmetry: TestResult,
    pub walk_x_quantiles: Vec<f64>,
    pub walk_y_quantiles: Vec<f64>,
    pub limit_w1_quantiles: Vec<f64>,
    pub limit_w2_quantiles: Vec<f64>,
}

impl ScalingReport {
    pub fn all_passed(&self) -> bool {
        self.ks_x_vs_w1.passed && self.ks_y_vs_w2.passed && self.ks_antisymmetry.passed
    }
}

fn quantiles(sorted: &[f64]) -> Vec<f64> {
    [0.05, 0.25, 0.5, 0.75, 0.95]
        .iter()
        .map(|&q| sorted[((q * (sorted.len() - 1) as f64).round() as usize).min(sorted.len() - 1)])
        .collect()
}

fn test_at_level(name: &str, a: &[f64], b: &[f64], level: f64) -> Result<TestResult, StatsError> {
    let (stat, p) = ks_two_sample(a, b)?;
    Ok(TestResult {
        name: name.to_string(),
        statistic: stat,
        p_value: p,
        n_a: a.len(),
        n_b: b.len(),
        passed: p > level,
    })
}

/// Compare the rescaled walk endpoint (n^{-1/alpha} X_n, n^{-1/alpha} Y_n)
/// against the simulated limit pair at time 1, by two-sample KS at the 1%
/// level, plus the exact X/Y antisymmetry of the walk itself. The jump
/// truncation is delta = n^{-1/alpha}: the walk itself cannot resolve
/// finer jumps, and the residual bias is far below the KS resolution at
/// these sample sizes (the discarded-variance budget is reported).
pub fn scaling_experiment(
    n: usize,
    replicas: usize,
    dist: &StepDistribution,
    seed: u64,
    delta_override: Option<f64>,
) -> Result<ScalingReport, StatsError> {
    let a = dist.alpha().ok_or(StatsError::NeedsPowerLaw)?;
    let alpha = a.get();
    let c1 = dist.constants().ok_or(StatsError::NeedsPowerLaw)?.c1;
    let scale = (n as f64).powf(-1.0 / alpha);
    let delta = delta_override.unwrap_or(scale).clamp(1e-9, 0.999);
    let level = 0.01;

    let walk: Vec<(f64, f64)> = (0..replicas as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = Stream::substream(seed, 2 * k);
            let path = sample_unconditioned(n, dist, &mut rng);
            let (x, y) = path.end();
            (x as f64 * scale, y as f64 * scale)
        })
        .collect();
    let limit: Vec<(f64, f64)> = (0..replicas as u64)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64), StatsError> {
            let mut rng = Stream::substream(seed, 2 * k + 1);
            let jumps = sample_jump_ppp(1.0, delta, a, c1, &mut rng)?;
            let p = assemble_pair(jumps, delta, 1.0, a, c1);
            Ok((p.w1(1.0), p.w2(1.0)))
        })
        .collect::<Result<_, _>>()?;

    let xs: Vec<f64> = walk.iter().map(|w| w.0).collect();
    let ys: Vec<f64> = walk.iter().map(|w| w.1).collect();
    let w1: Vec<f64> = limit.iter().map(|w| w.0).collect();
    let w2: Vec<f64> = limit.iter().map(|w| w.1).collect();
    let neg_y: Vec<f64> = ys.iter().map(|&y| -y).collect();

    let mut sx = xs.clone();
    let mut sy = ys.clone();
    let mut s1 = w1.clone();
    let mut s2 = w2.clone();
    for v in [&mut sx, &mut sy, &mut s1, &mut s2] {
        v.sort_by(f64::total_cmp);
    }

    Ok(ScalingReport {
        n,
        replicas,
        alpha,
        seed,
        delta,
        truncation_std_bound: truncation_variance_rate(delta, a, c1).sqrt(),
        level,
        ks_x_vs_w1: test_at_level("x_vs_w1", &xs, &w1, level)?,
        ks_y_vs_w2: test_at_level("y_vs_w2", &ys, &w2, level)?,
        ks_antisymmetry: test_at_level("x_vs_negated_y", &xs, &neg_y, level)?,
        walk_x_quantiles: quantiles(&sx),
        walk_y_quantiles: quantiles(&sy),
        limit_w1_quantiles: quantiles(&s1),
        limit_w2_quantiles: quantiles(&s2),
    })
}
