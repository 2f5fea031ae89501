//! Pre-run diagnostics: predicted rates, criteria and revival crossings.

use std::fmt;

use dissgrover::bj::{map_to_bj, residual_gamma, BjParams};
use dissgrover::fixed_point::fp_length;
use dissgrover::params::{check_criteria, standard_grover_tmax, DEFAULT_MARGIN};
use dissgrover::search::SearchProblem;

use crate::config::{Experiment, ExperimentConfig, LadderConfig, ProblemConfig, ReservoirConfig};
use crate::error::Result;
use crate::runner::fixed_point_plan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Info,
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub level: Level,
    pub message: String,
}

impl Diagnostic {
    fn info(message: String) -> Self {
        Self {
            level: Level::Info,
            message,
        }
    }

    fn warning(message: String) -> Self {
        Self {
            level: Level::Warning,
            message,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.level {
            Level::Info => "info",
            Level::Warning => "warning",
            Level::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

fn crossing(horizon: f64, tau: f64) -> Option<Diagnostic> {
    let k = (horizon / tau).floor() as u64;
    (k >= 1).then(|| {
        Diagnostic::warning(format!(
            "horizon {horizon:.4} crosses {k} revival{} (τ = {tau:.4})",
            if k == 1 { "" } else { "s" }
        ))
    })
}

fn reservoir_diagnostics(
    p: &SearchProblem,
    rc: &ReservoirConfig,
    horizon: f64,
    out: &mut Vec<Diagnostic>,
) -> Result<()> {
    let (spec, choice) = rc.build(p)?;
    let r = spec.r();
    if r == 0 {
        let tmax = standard_grover_tmax(p.size(), p.num_solutions())?;
        out.push(Diagnostic::info(format!(
            "r=0: standard Grover, optimal time (π/2)√(N/M) = {tmax:.6}"
        )));
        return Ok(());
    }
    let bj = map_to_bj(p, &spec);
    let gamma_resid = residual_gamma(p, &spec);
    if let Some(c) = choice {
        out.push(Diagnostic::info(format!(
            "r={r}: Δ = {:.8} chosen with C = {}",
            c.delta, c.c
        )));
    }
    out.push(Diagnostic::info(format!(
        "r={r}: γ = {:.6}, τ = {:.6}, Γ = {:.6}, runtime 1/γ = {:.6}",
        bj.gamma(),
        bj.tau(),
        gamma_resid,
        1.0 / bj.gamma()
    )));
    let (crit1, crit2) = check_criteria(p, &spec, DEFAULT_MARGIN)?;
    if !crit1 {
        out.push(Diagnostic::warning(format!(
            "r={r}: crit1 violated: RΔ² is not ≪ 4π²M(N−M)/N² (margin {DEFAULT_MARGIN}); \
             revivals overlap the decay"
        )));
    }
    if !crit2 {
        out.push(Diagnostic::warning(format!(
            "r={r}: crit2 violated: M(N−M)/N² is not ≪ R²Δ² (margin {DEFAULT_MARGIN}); \
             residual oscillations are large"
        )));
    }
    out.extend(crossing(horizon, bj.tau()));
    Ok(())
}

fn ladder_diagnostics(
    ladder: &LadderConfig,
    sizes: &[usize],
    horizon: Option<f64>,
    out: &mut Vec<Diagnostic>,
) -> Result<()> {
    let params = BjParams::new(ladder.eps_a, ladder.beta, ladder.delta)?;
    out.push(Diagnostic::info(format!(
        "γ = {:.6}, τ = {:.6}",
        params.gamma(),
        params.tau()
    )));
    if 5.0 / params.gamma() >= 0.9 * params.tau() {
        out.push(Diagnostic::warning(
            "decay too slow: no plateau between 5/γ and 0.9τ".into(),
        ));
    }
    for &size in sizes {
        let g = params.residual_gamma(size);
        out.push(Diagnostic::info(format!(
            "R={size}: Γ = {g:.6}, bound 2Γ = {:.6}",
            2.0 * g
        )));
    }
    if let Some(h) = horizon {
        out.extend(crossing(h, params.tau()));
    }
    Ok(())
}

fn fixed_point_diagnostics(
    problem: &ProblemConfig,
    ell: Option<usize>,
    accuracy: Option<f64>,
    out: &mut Vec<Diagnostic>,
) -> Result<()> {
    let p = problem.build()?;
    let plan = fixed_point_plan(&p, ell, accuracy)?;
    out.push(Diagnostic::info(format!(
        "ℓ = {}, δ = {:.6}, guaranteed F ≥ {:.6}",
        plan.ell(),
        plan.delta_acc(),
        plan.guaranteed_fidelity()
    )));
    let needed = fp_length(p.size(), p.num_solutions(), plan.delta_acc())?;
    if plan.ell() < needed {
        out.push(Diagnostic::warning(format!(
            "ℓ = {} is shorter than the {needed} needed for δ = {}; the guarantee does not apply",
            plan.ell(),
            plan.delta_acc()
        )));
    }
    Ok(())
}

fn collect(config: &ExperimentConfig, out: &mut Vec<Diagnostic>) -> Result<()> {
    config.check()?;
    match &config.experiment {
        Experiment::Continuous {
            problem,
            reservoirs,
            horizon,
            ..
        } => {
            let p = problem.build()?;
            for rc in reservoirs {
                reservoir_diagnostics(&p, rc, *horizon, out)?;
            }
        }
        Experiment::Trotter {
            problem,
            reservoirs,
            dt,
            steps,
            ..
        } => {
            let p = problem.build()?;
            for rc in reservoirs {
                reservoir_diagnostics(&p, rc, dt * *steps as f64, out)?;
            }
        }
        Experiment::NoisyTrotter {
            problem,
            reservoir,
            dt,
            steps,
            ..
        }
        | Experiment::TrotterDeviation {
            problem,
            reservoir,
            dt,
            steps,
            ..
        } => {
            reservoir_diagnostics(&problem.build()?, reservoir, dt * *steps as f64, out)?;
        }
        Experiment::FiniteBj {
            ladder,
            ladder_sizes,
            horizon,
            ..
        } => ladder_diagnostics(ladder, ladder_sizes, Some(*horizon), out)?,
        Experiment::ResidualScan {
            ladder,
            ladder_sizes,
            ..
        } => ladder_diagnostics(ladder, ladder_sizes, None, out)?,
        Experiment::FixedPoint {
            problem,
            ell,
            accuracy,
            ..
        } => fixed_point_diagnostics(problem, *ell, *accuracy, out)?,
        Experiment::FixedPointDeviation { problem, ells, .. } => {
            for &l in ells {
                fixed_point_diagnostics(problem, Some(l), None, out)?;
            }
        }
    }
    Ok(())
}

/// Diagnostics for a config. Never fails: problems become error entries.
pub fn validate(config: &ExperimentConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if let Err(e) = collect(config, &mut out) {
        out.push(Diagnostic {
            level: Level::Error,
            message: e.to_string(),
        });
    }
    out
}
