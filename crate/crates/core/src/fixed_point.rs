//! Fixed-point amplitude amplification baseline.
//!
//! The sequence `Π_j G(α_j, β_j)` with `G(α, β) = −S_s(α)·S_t(β)` and
//!
//! * `S_s(α) = I − (1 − e^{−iα})|+^n⟩⟨+^n|`
//! * `S_t(β) = I − (1 − e^{iβ})Σ_m|S_m⟩⟨S_m|`
//!
//! guarantees `F ≥ 1 − δ²` after `ℓ` iterates when `2ℓ+1 ≥ ln(2/δ)/√(M/N)`.
//! No reservoir is involved.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{arg_err, Result};
use crate::noise::{mean_and_stderr, ErrorSource, NoiseSpec};
use crate::search::{solution_mass, uniform_state, FidelityTrace, SearchProblem, StateVector};

/// Chebyshev polynomial of the first kind at real order, `T_m(x)`.
/// Uses `cos(m·acos x)` on `[−1, 1]` and `cosh(m·acosh x)` for `x > 1`.
pub fn chebyshev_t(order: f64, x: f64) -> Result<f64> {
    if !(order.is_finite() && order >= 0.0) || !x.is_finite() {
        return arg_err(format!(
            "invalid Chebyshev arguments order = {order}, x = {x}"
        ));
    }
    if x < -1.0 {
        return arg_err(format!("Chebyshev argument {x} < −1 not supported"));
    }
    if x <= 1.0 {
        Ok((order * x.acos()).cos())
    } else {
        Ok((order * x.acosh()).cosh())
    }
}

fn check_accuracy(delta_acc: f64) -> Result<()> {
    if !(delta_acc > 0.0 && delta_acc < 1.0) {
        return arg_err(format!("accuracy δ must lie in (0, 1), got {delta_acc}"));
    }
    Ok(())
}

/// Smallest `ℓ ≥ 1` with `2ℓ+1 ≥ ln(2/δ)/√(M/N)`.
pub fn fp_length(size: usize, m: usize, delta_acc: f64) -> Result<usize> {
    check_accuracy(delta_acc)?;
    if m == 0 || m > size {
        return arg_err(format!("need 1 <= M <= N, got M = {m}, N = {size}"));
    }
    let bound = (2.0 / delta_acc).ln() / (m as f64 / size as f64).sqrt();
    let mut odd = bound.ceil().max(1.0) as usize;
    if odd.is_multiple_of(2) {
        odd += 1;
    }
    Ok(((odd - 1) / 2).max(1))
}

/// The `δ` for which a given `ℓ` saturates the length condition:
/// `δ = 2·exp(−(2ℓ+1)√(M/N))`.
pub fn fp_accuracy_for_length(size: usize, m: usize, ell: usize) -> Result<f64> {
    if m == 0 || m > size || ell == 0 {
        return arg_err(format!("invalid sizes M = {m}, N = {size}, ℓ = {ell}"));
    }
    let delta = 2.0 * (-((2 * ell + 1) as f64) * (m as f64 / size as f64).sqrt()).exp();
    if delta >= 1.0 {
        return arg_err(format!(
            "ℓ = {ell} is too short for N = {size}, M = {m}: saturating δ = {delta} >= 1"
        ));
    }
    Ok(delta)
}

/// Angle schedule of a fixed-point sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointPlan {
    ell: usize,
    delta_acc: f64,
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl FixedPointPlan {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn delta_acc(&self) -> f64 {
        self.delta_acc
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Guaranteed noise-free final success probability `1 − δ²`.
    pub fn guaranteed_fidelity(&self) -> f64 {
        1.0 - self.delta_acc * self.delta_acc
    }
}

/// Inverse cotangent with range `(0, π)`.
fn arccot(y: f64) -> f64 {
    PI / 2.0 - y.atan()
}

/// `α_j = 2·arccot(tan(2πj/(2ℓ+1))·√(1 − 1/T²_{1/(2ℓ+1)}(1/δ)))`,
/// `β_j = −α_{ℓ−j+1}`.
pub fn fp_angles(ell: usize, delta_acc: f64) -> Result<FixedPointPlan> {
    check_accuracy(delta_acc)?;
    if ell == 0 {
        return arg_err("sequence length ℓ must be >= 1");
    }
    let len = (2 * ell + 1) as f64;
    let t = chebyshev_t(1.0 / len, 1.0 / delta_acc)?;
    let shrink = (1.0 - 1.0 / (t * t)).max(0.0).sqrt();
    let alphas: Vec<f64> = (1..=ell)
        .map(|j| 2.0 * arccot((2.0 * PI * j as f64 / len).tan() * shrink))
        .collect();
    let betas = (1..=ell).map(|j| -alphas[ell - j]).collect();
    Ok(FixedPointPlan {
        ell,
        delta_acc,
        alphas,
        betas,
    })
}

fn apply_iterate(state: &mut StateVector, problem: &SearchProblem, alpha: f64, beta: f64) {
    let amps = state.amplitudes_mut();
    // S_t(β): marked states pick up e^{iβ}
    let marked = Complex64::from_polar(1.0, beta);
    for &s in problem.solutions() {
        amps[s] *= marked;
    }
    // S_s(α) as a rank-1 update, then the overall minus sign
    let inv_sqrt = 1.0 / (amps.len() as f64).sqrt();
    let overlap = amps.iter().sum::<Complex64>() * inv_sqrt;
    let shift =
        (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -alpha)) * overlap * inv_sqrt;
    amps.iter_mut().for_each(|a| *a = -(*a - shift));
}

/// Runs the sequence from `|+^n⟩`, recording `F` before and after each
/// iterate. With `errors`, each iterate scales `α_j` and then `β_j` by fresh
/// factors `1 + εξ`.
pub fn run_fixed_point(
    problem: &SearchProblem,
    plan: &FixedPointPlan,
    mut errors: Option<&mut ErrorSource>,
) -> Result<FidelityTrace> {
    let mut state = uniform_state(problem.n(), 0)?;
    let mut fidelity = Vec::with_capacity(plan.ell + 1);
    fidelity.push(solution_mass(state.amplitudes(), problem.solutions(), 1));
    for (&alpha, &beta) in plan.alphas.iter().zip(&plan.betas) {
        let (fa, fb) = match errors.as_deref_mut() {
            Some(src) => {
                let fa = src.next_factor();
                (fa, src.next_factor())
            }
            None => (1.0, 1.0),
        };
        apply_iterate(&mut state, problem, alpha * fa, beta * fb);
        fidelity.push(solution_mass(state.amplitudes(), problem.solutions(), 1));
    }
    FidelityTrace::new((0..=plan.ell).map(|j| j as f64).collect(), fidelity)
}

/// Mean absolute deviation of the final success probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub runs: usize,
}

/// `E|F_ℓ(ε) − F_ℓ(0)|` over `noise.runs()` executions.
pub fn fp_deviation(
    problem: &SearchProblem,
    plan: &FixedPointPlan,
    noise: &NoiseSpec,
) -> Result<DeviationEstimate> {
    let final_of = |trace: FidelityTrace| trace.last().map(|(_, f)| f).unwrap_or_default();
    let ideal = final_of(run_fixed_point(problem, plan, None)?);
    let samples: Vec<f64> = (0..noise.runs())
        .into_par_iter()
        .map(|run| {
            let mut src = noise.run_source(run);
            Ok((final_of(run_fixed_point(problem, plan, Some(&mut src))?) - ideal).abs())
        })
        .collect::<Result<_>>()?;
    let (mean, std_error) = mean_and_stderr(&samples);
    Ok(DeviationEstimate {
        mean,
        std_error,
        runs: samples.len(),
    })
}

pub fn fp_mean_deviation(
    problem: &SearchProblem,
    plan: &FixedPointPlan,
    noise: &NoiseSpec,
) -> Result<f64> {
    fp_deviation(problem, plan, noise).map(|d| d.mean)
}
