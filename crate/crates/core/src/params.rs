//! Reservoir parameter selection and runtime estimates.
//!
//! Two conditions keep the decay clean. The revival must come well after the
//! decay (`RΔ² ≪ 4π²·M(N−M)/N²`) and the finite-ladder oscillation must be
//! small (`M(N−M)/N² ≪ R²Δ²`). "≪" is applied as a ratio `margin`.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{arg_err, Result};
use crate::search::{ReservoirSpec, SearchProblem};

pub const DEFAULT_MARGIN: f64 = 10.0;

/// A chosen level spacing with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamChoice {
    pub delta: f64,
    /// Reservoir size `R`.
    pub reservoir_size: usize,
    /// Margin constant `C`.
    pub c: f64,
    pub crit1_ok: bool,
    pub crit2_ok: bool,
    /// Estimated search time `1/γ`.
    pub runtime_estimate: f64,
}

impl ParamChoice {
    pub fn revival_time(&self) -> f64 {
        2.0 * PI / self.delta
    }
}

fn overlap_weight(n: f64, m: f64) -> f64 {
    m * (n - m) / (n * n)
}

fn criteria(weight: f64, r: f64, delta: f64, margin: f64) -> (bool, bool) {
    let crit1 = r * delta * delta * margin <= 4.0 * PI * PI * weight;
    let crit2 = weight * margin <= r * r * delta * delta;
    (crit1, crit2)
}

/// `(revival separated from decay, residual oscillation small)`.
pub fn check_criteria(
    problem: &SearchProblem,
    spec: &ReservoirSpec,
    margin: f64,
) -> Result<(bool, bool)> {
    if margin.is_nan() || margin <= 1.0 {
        return arg_err(format!("margin must exceed 1, got {margin}"));
    }
    let weight = overlap_weight(problem.size() as f64, problem.num_solutions() as f64);
    Ok(criteria(weight, spec.size() as f64, spec.delta(), margin))
}

fn check_c(c: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return arg_err(format!("constant C must be positive, got {c}"));
    }
    Ok(())
}

/// Known `M`: `Δ = C·√(M(N−M))/(N·R)`, runtime `1/γ = C·N/(2π√(M(N−M)))`.
/// The `r` of `spec` is used; its spacing is ignored.
pub fn choose_delta_known(
    problem: &SearchProblem,
    spec: &ReservoirSpec,
    c: f64,
) -> Result<ParamChoice> {
    check_c(c)?;
    let n = problem.size() as f64;
    let m = problem.num_solutions() as f64;
    let r = spec.size() as f64;
    let root = (m * (n - m)).sqrt();
    let delta = c * root / (n * r);
    let (crit1_ok, crit2_ok) = criteria(overlap_weight(n, m), r, delta, DEFAULT_MARGIN);
    Ok(ParamChoice {
        delta,
        reservoir_size: spec.size(),
        c,
        crit1_ok,
        crit2_ok,
        runtime_estimate: c * n / (2.0 * PI * root),
    })
}

/// Unknown `M`: `Δ = 2π/√(C·N·R)`; the runtime reported is the worst case
/// `M = 1` in its large-`N` form `√(RN/C)`. Criterion flags are evaluated
/// for `M = 1` as well.
pub fn choose_delta_unknown(size: usize, spec: &ReservoirSpec, c: f64) -> Result<ParamChoice> {
    check_c(c)?;
    if size < 2 {
        return arg_err(format!("search space must have N >= 2, got {size}"));
    }
    let n = size as f64;
    let r = spec.size() as f64;
    let delta = 2.0 * PI / (c * n * r).sqrt();
    let (crit1_ok, crit2_ok) = criteria(overlap_weight(n, 1.0), r, delta, DEFAULT_MARGIN);
    Ok(ParamChoice {
        delta,
        reservoir_size: spec.size(),
        c,
        crit1_ok,
        crit2_ok,
        runtime_estimate: (r * n / c).sqrt(),
    })
}

/// Optimal stopping time of continuous standard Grover, `(π/2)√(N/M)`.
pub fn standard_grover_tmax(size: usize, m: usize) -> Result<f64> {
    if m == 0 || m >= size {
        return arg_err(format!("need 1 <= M < N, got M = {m}, N = {size}"));
    }
    Ok(PI / 2.0 * (size as f64 / m as f64).sqrt())
}
