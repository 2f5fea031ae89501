//! Closed-form Bixon-Jortner (BJ) predictions.
//!
//! A source level `|a⟩` coupled with strength `β` to an infinite ladder spaced
//! by `Δ` decays at the golden-rule rate `γ = 2πβ²/Δ` and is refed at
//! multiples of the revival time `τ = 2π/Δ`. The dissipative Grover
//! Hamiltonian maps onto this model with `|a⟩ ↔ |⊥, +^r⟩`, so `1 − |a(t)|²`
//! predicts the success probability.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{arg_err, Result};
use crate::hamiltonian::{build_finite_bj, diagonalize, BjLadderSpec};
use crate::search::{ReservoirSpec, SearchProblem, StateVector};

/// Source energy, coupling and spacing of a BJ model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BjParams {
    eps_a: f64,
    beta: f64,
    delta: f64,
}

impl BjParams {
    pub fn new(eps_a: f64, beta: f64, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return arg_err(format!("level spacing must be positive, got {delta}"));
        }
        if !(beta.is_finite() && beta >= 0.0) || !eps_a.is_finite() {
            return arg_err("coupling must be finite and nonnegative, source energy finite");
        }
        Ok(Self { eps_a, beta, delta })
    }

    pub fn eps_a(&self) -> f64 {
        self.eps_a
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Decay rate `γ = 2πβ²/Δ`.
    pub fn gamma(&self) -> f64 {
        2.0 * PI * self.beta * self.beta / self.delta
    }

    /// Revival time `τ = 2π/Δ`.
    pub fn tau(&self) -> f64 {
        2.0 * PI / self.delta
    }

    /// Finite-ladder oscillation amplitude `Γ = β²/(Δ²R)`.
    pub fn residual_gamma(&self, ladder_size: usize) -> f64 {
        self.beta * self.beta / (self.delta * self.delta * ladder_size as f64)
    }
}

/// BJ parameters of `H_DG`: `ε_a = 1 − M/N`, `β = √(M(N−M)/R)/N`, same `Δ`.
pub fn map_to_bj(problem: &SearchProblem, spec: &ReservoirSpec) -> BjParams {
    let n = problem.size() as f64;
    let m = problem.num_solutions() as f64;
    let r = spec.size() as f64;
    BjParams {
        eps_a: 1.0 - m / n,
        beta: (m * (n - m) / r).sqrt() / n,
        delta: spec.delta(),
    }
}

/// Generalized Laguerre polynomial `L_n^{(α)}(x)` by upward recurrence.
pub fn laguerre_gen(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0 + alpha - x) * cur - (kf - 1.0 + alpha) * prev) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact infinite-ladder source amplitude `a(t)` including the first
/// `max_revivals` revival terms. Revival `j` contributes only for `t > jτ`.
pub fn bj_amplitude(params: &BjParams, t: f64, max_revivals: usize) -> Result<Complex64> {
    if !(t.is_finite() && t >= 0.0) {
        return arg_err(format!("time must be finite and nonnegative, got {t}"));
    }
    let gamma = params.gamma();
    let tau = params.tau();
    let needed = (t / tau).ceil() as usize;
    if max_revivals < needed {
        return arg_err(format!(
            "t = {t} needs at least {needed} revival terms, got {max_revivals}"
        ));
    }
    let mut envelope = (-gamma * t / 2.0).exp();
    for j in 1..=max_revivals {
        let since = t - j as f64 * tau;
        if since <= 0.0 {
            break;
        }
        let x = gamma * since;
        envelope -= x / j as f64 * (-x / 2.0).exp() * laguerre_gen(j - 1, 1.0, x);
    }
    Ok(Complex64::from_polar(envelope, -params.eps_a * t))
}

/// Predicted success probability on `[0, 2τ)`:
/// `1 − |e^{−γt/2} − γ(t−τ)e^{−γ(t−τ)/2}Θ(t−τ)|²`.
pub fn bj_fidelity_two_windows(params: &BjParams, t: f64) -> Result<f64> {
    let tau = params.tau();
    if !(t.is_finite() && t >= 0.0) || t >= 2.0 * tau {
        return arg_err(format!(
            "two-window prediction only covers 0 <= t < 2τ = {}, got {t}",
            2.0 * tau
        ));
    }
    let gamma = params.gamma();
    let mut a = (-gamma * t / 2.0).exp();
    if t > tau {
        a -= gamma * (t - tau) * (-gamma * (t - tau) / 2.0).exp();
    }
    Ok(1.0 - a * a)
}

/// `1 − |a(t)|²` with as many revival terms as `t` needs.
pub fn bj_fidelity(params: &BjParams, t: f64) -> Result<f64> {
    let revivals = (t / params.tau()).ceil().max(0.0) as usize;
    Ok(1.0 - bj_amplitude(params, t, revivals)?.norm_sqr())
}

/// `Γ = M(N−M)/(RNΔ)²`.
pub fn residual_gamma(problem: &SearchProblem, spec: &ReservoirSpec) -> f64 {
    let n = problem.size() as f64;
    let m = problem.num_solutions() as f64;
    let r = spec.size() as f64;
    m * (n - m) / (r * n * spec.delta()).powi(2)
}

/// Bound `2Γ` on the squared residual oscillation amplitude.
pub fn residual_bound(gamma_resid: f64) -> Result<f64> {
    if !(gamma_resid.is_finite() && gamma_resid >= 0.0) {
        return arg_err(format!("Γ must be nonnegative, got {gamma_resid}"));
    }
    Ok(2.0 * gamma_resid)
}

/// Source amplitude `⟨a|e^{−iHt}|a⟩` of a finite BJ ladder at each time.
pub fn finite_bj_source_amplitudes(spec: &BjLadderSpec, times: &[f64]) -> Result<Vec<Complex64>> {
    let h = build_finite_bj(spec);
    let prop = diagonalize(&h)?;
    let spectral = prop.project(&StateVector::basis(h.dim(), 0)?)?;
    times
        .iter()
        .map(|&t| Ok(spectral.at(t)?.amplitudes()[0]))
        .collect()
}

/// Residual oscillation of a finite ladder about the exponential decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualOscillation {
    pub ladder_size: usize,
    /// `Γ = β²/(Δ²R)`.
    pub gamma_resid: f64,
    /// `max_t | |a(t)|² − e^{−γt} |` over the window.
    pub max_deviation: f64,
    /// Time at which the maximum occurs.
    pub at: f64,
    pub window: (f64, f64),
}

/// Measures the plateau oscillation on `[5/γ, 0.9τ]` with `samples` points.
pub fn finite_bj_residual(spec: &BjLadderSpec, samples: usize) -> Result<ResidualOscillation> {
    if samples < 2 {
        return arg_err("need at least two samples");
    }
    let params = BjParams::new(spec.eps_a(), spec.beta(), spec.delta())?;
    let gamma = params.gamma();
    let (lo, hi) = (5.0 / gamma, 0.9 * params.tau());
    if lo >= hi {
        return arg_err(format!(
            "decay too slow for a plateau window: 5/γ = {lo} >= 0.9τ = {hi}"
        ));
    }
    let times: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let amps = finite_bj_source_amplitudes(spec, &times)?;
    let (at, max_deviation) = times
        .iter()
        .zip(&amps)
        .map(|(&t, a)| (t, (a.norm_sqr() - (-gamma * t).exp()).abs()))
        .fold(
            (lo, 0.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    Ok(ResidualOscillation {
        ladder_size: spec.ladder_size(),
        gamma_resid: params.residual_gamma(spec.ladder_size()),
        max_deviation,
        at,
        window: (lo, hi),
    })
}
