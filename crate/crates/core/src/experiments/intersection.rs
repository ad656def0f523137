use serde::{Deserialize, Serialize};

use super::estimate::{run_replicates, EstimateResult};
use crate::error::{Error, Result};
use crate::walks::zd::Packer;
use crate::walks::{LoopEraser, RngStream};

/// Longest walk horizon accepted by the intersection experiments.
pub const MAX_HORIZON: u64 = 100_000_000;

fn check(d: usize, r: u32, horizon: u64) -> Result<Packer> {
    if d < 3 {
        return Err(Error::invalid("d must be ≥ 3 for infinite-context LERW"));
    }
    if horizon > MAX_HORIZON {
        return Err(Error::ResourceLimit { what: "walk horizon", requested: horizon, limit: MAX_HORIZON });
    }
    let p = Packer::new(d)?;
    p.check_horizon(&[r as i64], horizon)?;
    Ok(p)
}

fn erased_from_origin(p: &Packer, horizon: u64, rng: &mut RngStream) -> LoopEraser<u128> {
    let mut key = p.pack(&vec![0; p.dim()]).expect("origin packs");
    let mut eraser = LoopEraser::new();
    eraser.push(key);
    for _ in 0..horizon {
        key = p.step(key, rng);
        eraser.push(key);
    }
    eraser
}

fn start_at(p: &Packer, r: u32) -> u128 {
    let mut c = vec![0i64; p.dim()];
    c[0] = r as i64;
    p.pack(&c).expect("start packs")
}

/// First `M` at which the length-`M` prefixes of the erased walk from the origin and of an
/// independent walk from `r·e1` meet, or `None` within the horizon. Both paths are run to the
/// horizon, so every `M ≤ horizon` is answered by one replicate and the event is monotone in `M`.
/// When `r = 0` the shared origin does not count as a meeting.
fn first_meeting(p: &Packer, r: u32, horizon: u64, rng: &mut RngStream) -> Option<u64> {
    let mut walk_rng = rng.substream(1);
    let eraser = erased_from_origin(p, horizon, rng);
    let origin = start_at(p, 0);
    let mut key = start_at(p, r);
    let mut best = u64::MAX;
    let mut j = 0u64;
    loop {
        if !(r == 0 && key == origin) {
            if let Some(i) = eraser.position(&key) {
                best = best.min(j.max(i as u64));
            }
        }
        if j >= best || j == horizon {
            break;
        }
        key = p.step(key, &mut walk_rng);
        j += 1;
    }
    (best <= horizon).then_some(best)
}

/// Probability that the erased walk from the origin and a walk from `r·e1` meet within their
/// first `m` steps each. Estimates at several cutoffs from the same replicates are monotone.
pub fn intersection_probability(d: usize, r: u32, m: u64, reps: u64, seed: u64) -> Result<EstimateResult> {
    Ok(intersection_sweep(d, r, &[m], reps, seed)?.remove(0))
}

/// [`intersection_probability`] at each cutoff in `ms`, sharing replicates across cutoffs.
pub fn intersection_sweep(d: usize, r: u32, ms: &[u64], reps: u64, seed: u64) -> Result<Vec<EstimateResult>> {
    let horizon = ms.iter().copied().max().ok_or_else(|| Error::invalid("no cutoffs given"))?;
    let p = check(d, r, horizon)?;
    let meets = run_replicates(reps, seed, |_, rng| first_meeting(&p, r, horizon, rng));
    Ok(ms
        .iter()
        .map(|&m| {
            let hits: Vec<f64> = meets.iter().map(|t| matches!(t, Some(t) if *t <= m) as u8 as f64).collect();
            EstimateResult::from_samples(&hits, 0, seed)
        })
        .collect())
}

/// Moments of the intersection count `X`: the number of times `j ≤ m` at which a walk from
/// `r·e1` stands on the erasure of an `m`-step walk from the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentEstimates {
    pub ex: EstimateResult,
    pub ex2: EstimateResult,
    pub p_positive: EstimateResult,
    /// `(EX)² / EX²`.
    pub pz_bound: f64,
    /// Delta-method standard error of `pz_bound`.
    pub pz_stderr: f64,
}

impl MomentEstimates {
    /// `P(X > 0) ≥ (EX)²/EX² - k σ`, with `σ` combining both standard errors.
    pub fn paley_zygmund_holds(&self, k: f64) -> bool {
        let sigma = (self.p_positive.stderr.powi(2) + self.pz_stderr.powi(2)).sqrt();
        self.p_positive.mean >= self.pz_bound - k * sigma
    }
}

fn count_hits(p: &Packer, r: u32, m: u64, rng: &mut RngStream) -> u64 {
    let mut walk_rng = rng.substream(1);
    let eraser = erased_from_origin(p, m, rng);
    let origin = start_at(p, 0);
    let mut key = start_at(p, r);
    let mut x = 0u64;
    for j in 0..=m {
        if j > 0 {
            key = p.step(key, &mut walk_rng);
        }
        if !(r == 0 && key == origin) && eraser.contains(&key) {
            x += 1;
        }
    }
    x
}

pub fn intersection_moments(d: usize, r: u32, m: u64, reps: u64, seed: u64) -> Result<MomentEstimates> {
    if d < 5 {
        return Err(Error::invalid("intersection moments need d ≥ 5"));
    }
    let p = check(d, r, m)?;
    let xs: Vec<f64> = run_replicates(reps, seed, |_, rng| count_hits(&p, r, m, rng) as f64);
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let pos: Vec<f64> = xs.iter().map(|x| (*x > 0.0) as u8 as f64).collect();
    let ex = EstimateResult::from_samples(&xs, 0, seed);
    let ex2 = EstimateResult::from_samples(&sq, 0, seed);
    let p_positive = EstimateResult::from_samples(&pos, 0, seed);
    let (pz_bound, pz_stderr) = if ex2.mean > 0.0 {
        let n = xs.len() as f64;
        let cov = xs.iter().zip(&sq).map(|(a, b)| (a - ex.mean) * (b - ex2.mean)).sum::<f64>() / (n - 1.0);
        let var1 = (ex.stderr.powi(2)) * n;
        let var2 = (ex2.stderr.powi(2)) * n;
        let g1 = 2.0 * ex.mean / ex2.mean;
        let g2 = -(ex.mean / ex2.mean).powi(2);
        let var = (g1 * g1 * var1 + 2.0 * g1 * g2 * cov + g2 * g2 * var2) / n;
        (ex.mean.powi(2) / ex2.mean, var.max(0.0).sqrt())
    } else {
        (0.0, 0.0)
    };
    Ok(MomentEstimates { ex, ex2, p_positive, pz_bound, pz_stderr })
}
