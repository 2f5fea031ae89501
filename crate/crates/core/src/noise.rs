//! Relative phase-control errors and their random streams.
//!
//! Every Monte Carlo run `i` draws from its own ChaCha8 stream: the generator
//! is keyed by the master seed (expanded with `SeedableRng::seed_from_u64`)
//! and the stream id is set to `i`. Runs are therefore independent of the
//! order or thread they execute on, and the first `k` runs of a larger batch
//! are identical to a batch of `k` runs.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{arg_err, Result};

/// Relative control error `ε`, master seed and Monte Carlo run count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    epsilon: f64,
    seed: u64,
    runs: usize,
}

impl NoiseSpec {
    pub fn new(epsilon: f64, seed: u64, runs: usize) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return arg_err(format!("control error must be >= 0, got {epsilon}"));
        }
        if runs == 0 {
            return arg_err("at least one Monte Carlo run is required");
        }
        Ok(Self {
            epsilon,
            seed,
            runs,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    /// Error source for run `run`.
    pub fn run_source(&self, run: usize) -> ErrorSource {
        ErrorSource::new(self.epsilon, self.seed, run)
    }
}

/// Produces scale factors `1 + εξ` with `ξ ~ U[−1, 1]`.
#[derive(Debug, Clone)]
pub struct ErrorSource {
    epsilon: f64,
    rng: ChaCha8Rng,
    dist: Uniform<f64>,
}

impl ErrorSource {
    pub fn new(epsilon: f64, seed: u64, run: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(run as u64);
        Self {
            epsilon,
            rng,
            dist: Uniform::new_inclusive(-1.0, 1.0),
        }
    }

    /// Next `ξ`.
    pub fn draw(&mut self) -> f64 {
        self.dist.sample(&mut self.rng)
    }

    /// Next `1 + εξ`.
    pub fn next_factor(&mut self) -> f64 {
        1.0 + self.epsilon * self.draw()
    }
}

/// Mean and standard error of a set of per-run samples, summed in run order.
pub(crate) fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
