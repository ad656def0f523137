use std::sync::OnceLock;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::walks::RngStream;

/// Environment variable holding the worker count for replicate loops.
pub const THREADS_ENV: &str = "USTLAB_THREADS";

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateResult {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(replicates)`.
    pub stderr: f64,
    /// Replicates that entered the mean.
    pub replicates: u64,
    /// Fraction of attempted replicates dropped for hitting a cutoff.
    pub censored: f64,
    pub seed: u64,
}

impl EstimateResult {
    /// Mean and standard error of `values`; `censored` counts replicates that were dropped.
    /// With no surviving values the mean is reported as 0 with `replicates = 0`.
    pub fn from_samples(values: &[f64], censored: u64, seed: u64) -> Self {
        let n = values.len() as u64;
        let total = n + censored;
        let censored = if total == 0 { 0.0 } else { censored as f64 / total as f64 };
        if n == 0 {
            return EstimateResult { mean: 0.0, stderr: 0.0, replicates: 0, censored, seed };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        EstimateResult { mean, stderr, replicates: n, censored, seed }
    }

    /// A deterministic value, reported with zero error.
    pub fn exact(value: f64, seed: u64) -> Self {
        EstimateResult { mean: value, stderr: 0.0, replicates: 1, censored: 0.0, seed }
    }

    /// `(self - other) / sqrt(se1² + se2²)`.
    pub fn separation(&self, other: &EstimateResult) -> f64 {
        (self.mean - other.mean) / (self.stderr.powi(2) + other.stderr.powi(2)).sqrt()
    }
}

/// Least-squares line through `(log r, log p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the supplied point errors (0 for exact data).
    pub slope_stderr: f64,
    /// Weighted root-mean-square residual in log space.
    pub residual: f64,
    /// `(log r, log p)` pairs.
    pub points: Vec<(f64, f64)>,
}

/// Fits `log p = a + b log r` to `(r, p, stderr)` triples, weighting each point by the inverse
/// variance of `log p` (≈ `(p / stderr)²`). If any stderr is zero the fit is unweighted.
pub fn fit_power_law(points: &[(f64, f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    for &(r, p, _) in points {
        if !(r > 0.0) || !(p > 0.0) {
            return Err(Error::Fit(format!("cannot take the log of a nonpositive point ({r}, {p})")));
        }
    }
    let weighted = points.iter().all(|&(_, _, s)| s > 0.0);
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let ws: Vec<f64> = points
        .iter()
        .map(|&(_, p, s)| if weighted { (p / s).powi(2) } else { 1.0 })
        .collect();
    let sw: f64 = ws.iter().sum();
    let mx = xs.iter().zip(&ws).map(|(x, w)| x * w).sum::<f64>() / sw;
    let my = ys.iter().zip(&ws).map(|(y, w)| y * w).sum::<f64>() / sw;
    let sxx: f64 = xs.iter().zip(&ws).map(|(x, w)| w * (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::Fit("all points share one abscissa".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).zip(&ws).map(|((x, y), w)| w * (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .zip(&ws)
        .map(|((x, y), w)| w * (y - intercept - slope * x).powi(2))
        .sum();
    Ok(SlopeFit {
        slope,
        intercept,
        slope_stderr: if weighted { (1.0 / sxx).sqrt() } else { 0.0 },
        residual: (rss / sw).sqrt(),
        points: xs.into_iter().zip(ys).collect(),
    })
}

fn pool() -> Option<&'static ThreadPool> {
    static POOL: OnceLock<Option<ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let n: usize = std::env::var(THREADS_ENV).ok()?.parse().ok()?;
        ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
    })
    .as_ref()
}

/// Runs `f(i, stream)` for replicates `0..reps`, replicate `i` drawing from stream `(seed, i)`.
/// Results come back in replicate order whatever the scheduling.
pub fn run_replicates<T, F>(reps: u64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut RngStream) -> T + Sync + Send,
{
    let job = || {
        (0..reps)
            .into_par_iter()
            .map(|i| f(i, &mut RngStream::new(seed, i)))
            .collect()
    };
    match pool() {
        Some(p) => p.install(job),
        None => job(),
    }
}

/// Like [`run_replicates`] but each worker carries a scratch value built by `init`.
pub fn run_replicates_with<T, S, I, F>(reps: u64, seed: u64, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64, &mut RngStream) -> T + Sync + Send,
{
    let job = || {
        (0..reps)
            .into_par_iter()
            .map_init(&init, |s, i| f(s, i, &mut RngStream::new(seed, i)))
            .collect()
    };
    match pool() {
        Some(p) => p.install(job),
        None => job(),
    }
}

/// Splits per-replicate outcomes into kept values and a censored count.
pub(crate) fn collect_censored(outcomes: &[Option<f64>]) -> (Vec<f64>, u64) {
    let kept: Vec<f64> = outcomes.iter().flatten().copied().collect();
    let censored = (outcomes.len() - kept.len()) as u64;
    (kept, censored)
}

/// Seed for the `tag`-th point of an experiment, derived by two rounds of splitmix64.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(tag))
}
