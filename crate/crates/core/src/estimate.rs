//! Monte Carlo estimators.
//!
//! Trial `k` always draws from `RngStream::new(seed, k)`, and results are
//! aggregated in trial-index order, so an estimate does not depend on which
//! [`TrialRunner`] executed it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Executes independent trials `0..trials` and returns their outputs in
/// trial-index order.
pub trait TrialRunner {
    fn run<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync;
}

/// Runs trials one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl TrialRunner for Sequential {
    fn run<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync,
    {
        (0..trials).map(f).collect()
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityEstimate {
    pub mean: f64,
    /// `sample_std / √trials`, zero for a single trial.
    pub std_error: f64,
    pub trials: u64,
}

impl CapacityEstimate {
    /// Two-pass mean and unbiased variance, summed in slice order.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let std_error = if samples.len() < 2 {
            0.0
        } else {
            let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
            libm::sqrt(ss / (n - 1.0)) / libm::sqrt(n)
        };
        Ok(Self { mean, std_error, trials: samples.len() as u64 })
    }
}

/// Sorted capacity samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    pub fn merge(&self, other: &Self) -> Self {
        let mut samples = Vec::with_capacity(self.count() + other.count());
        samples.extend_from_slice(&self.samples);
        samples.extend_from_slice(&other.samples);
        samples.sort_by(f64::total_cmp);
        Self { samples }
    }
}

/// Runs `trials` draws, returning the raw evaluator outputs in trial order.
/// The first failing trial (by index) is reported.
pub fn collect_samples<R, S, D, E>(
    runner: &R,
    trials: u64,
    seed: u64,
    sampler: D,
    evaluator: E,
) -> Result<Vec<f64>>
where
    R: TrialRunner,
    D: Fn(&mut RngStream) -> S + Sync,
    E: Fn(&S) -> Result<f64> + Sync,
{
    runner
        .run(trials, |k| {
            let mut stream = RngStream::new(seed, k);
            evaluator(&sampler(&mut stream))
        })
        .into_iter()
        .collect()
}

/// Monte Carlo estimate of `E[evaluator(sampler(stream))]`.
pub fn ergodic_estimate<R, S, D, E>(
    runner: &R,
    trials: u64,
    seed: u64,
    sampler: D,
    evaluator: E,
) -> Result<CapacityEstimate>
where
    R: TrialRunner,
    D: Fn(&mut RngStream) -> S + Sync,
    E: Fn(&S) -> Result<f64> + Sync,
{
    CapacityEstimate::from_samples(&collect_samples(runner, trials, seed, sampler, evaluator)?)
}

/// Empirical distribution of the evaluator over `trials` draws.
pub fn collect_distribution<R, S, D, E>(
    runner: &R,
    trials: u64,
    seed: u64,
    sampler: D,
    evaluator: E,
) -> Result<EmpiricalDistribution>
where
    R: TrialRunner,
    D: Fn(&mut RngStream) -> S + Sync,
    E: Fn(&S) -> Result<f64> + Sync,
{
    EmpiricalDistribution::new(collect_samples(runner, trials, seed, sampler, evaluator)?)
}

/// `x %` outage capacity: the `k`-th smallest sample with
/// `k = ⌈x/100 · count⌉`, no interpolation.
pub fn outage_capacity(dist: &EmpiricalDistribution, x_percent: f64) -> Result<f64> {
    if !(x_percent > 0.0 && x_percent < 100.0) {
        return Err(Error::InvalidPercent(x_percent));
    }
    let count = dist.count();
    if count == 0 {
        return Err(Error::EmptyDistribution);
    }
    let k = libm::ceil(x_percent * count as f64 / 100.0) as usize;
    Ok(dist.samples[k.clamp(1, count) - 1])
}
