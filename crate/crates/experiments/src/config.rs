//! Experiment configuration and JSON loading.
//!
//! A config file names a `figure_id` and optionally a fully explicit
//! `experiment`. Preset ids without an `experiment` take the preset's
//! parameters; `custom` must spell everything out. A run manifest is also
//! accepted: its `config` member is used.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dissgrover::params::{choose_delta_known, choose_delta_unknown, ParamChoice};
use dissgrover::search::{ReservoirSpec, SearchProblem};

use crate::error::{config_err, ExperimentError, Result};
use crate::presets;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_OUT: &str = "results";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig6a,
    Fig6b,
    Custom,
}

impl FigureId {
    pub const PRESETS: [FigureId; 10] = [
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig2c,
        FigureId::Fig2d,
        FigureId::Fig4a,
        FigureId::Fig4b,
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig6a,
        FigureId::Fig6b,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig2c => "fig2c",
            FigureId::Fig2d => "fig2d",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
            FigureId::Fig5a => "fig5a",
            FigureId::Fig5b => "fig5b",
            FigureId::Fig6a => "fig6a",
            FigureId::Fig6b => "fig6b",
            FigureId::Custom => "custom",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::PRESETS
            .iter()
            .chain(&[FigureId::Custom])
            .find(|id| id.as_str() == s)
            .copied()
            .ok_or_else(|| ExperimentError::Config(format!("unknown figure id {s:?}")))
    }
}

/// Search register and solution set. Give either `m` (solutions `0..m`)
/// or an explicit `solutions` list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<usize>>,
}

impl ProblemConfig {
    pub fn with_m(n: u32, m: usize) -> Self {
        Self {
            n,
            m: Some(m),
            solutions: None,
        }
    }

    pub fn build(&self) -> Result<SearchProblem> {
        match (&self.m, &self.solutions) {
            (Some(m), None) => Ok(SearchProblem::with_first(self.n, *m)?),
            (None, Some(sols)) => Ok(SearchProblem::new(self.n, sols.clone())?),
            (Some(m), Some(sols)) if *m == sols.len() => {
                Ok(SearchProblem::new(self.n, sols.clone())?)
            }
            (Some(_), Some(_)) => config_err("problem: `m` disagrees with `solutions`"),
            (None, None) => config_err("problem: one of `m` or `solutions` is required"),
        }
    }
}

/// Rule deriving `Δ` from a margin constant `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum DeltaRule {
    /// `Δ = C√(M(N−M))/(NR)`.
    Known { c: f64 },
    /// `Δ = 2π/√(CNR)`.
    Unknown { c: f64 },
}

/// `r` reservoir qubits with either a fixed `delta` or a `choice` rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirConfig {
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<DeltaRule>,
}

impl ReservoirConfig {
    pub fn fixed(r: u32, delta: f64) -> Self {
        Self {
            r,
            delta: Some(delta),
            choice: None,
        }
    }

    pub fn chosen(r: u32, rule: DeltaRule) -> Self {
        Self {
            r,
            delta: None,
            choice: Some(rule),
        }
    }

    pub fn build(&self, problem: &SearchProblem) -> Result<(ReservoirSpec, Option<ParamChoice>)> {
        match (self.delta, self.choice) {
            (Some(delta), None) => Ok((ReservoirSpec::new(self.r, delta)?, None)),
            (None, Some(rule)) => {
                let unit = ReservoirSpec::new(self.r, 1.0)?;
                let choice = match rule {
                    DeltaRule::Known { c } => choose_delta_known(problem, &unit, c)?,
                    DeltaRule::Unknown { c } => choose_delta_unknown(problem.size(), &unit, c)?,
                };
                Ok((ReservoirSpec::new(self.r, choice.delta)?, Some(choice)))
            }
            _ => config_err(format!(
                "reservoir r={}: exactly one of `delta` or `choice` is required",
                self.r
            )),
        }
    }
}

/// Finite BJ ladder couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    pub beta: f64,
    pub delta: f64,
    pub eps_a: f64,
}

/// What to simulate. Every variant is fully explicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    /// Exact Hamiltonian evolution on a uniform time grid, one series per
    /// reservoir (r = 0 uses the standard Grover Hamiltonian), plus the BJ
    /// prediction for each r > 0 when `bj` is set.
    Continuous {
        problem: ProblemConfig,
        reservoirs: Vec<ReservoirConfig>,
        horizon: f64,
        samples: usize,
        bj: bool,
    },
    /// Noise-free Trotter iterates, recorded after every step.
    Trotter {
        problem: ProblemConfig,
        reservoirs: Vec<ReservoirConfig>,
        dt: f64,
        steps: usize,
        bj: bool,
    },
    /// Ideal Trotter run plus individual noisy trajectories.
    NoisyTrotter {
        problem: ProblemConfig,
        reservoir: ReservoirConfig,
        dt: f64,
        steps: usize,
        epsilon: f64,
        trajectories: usize,
        bj: bool,
    },
    /// Mean deviation `δF` per step for each control error.
    TrotterDeviation {
        problem: ProblemConfig,
        reservoir: ReservoirConfig,
        dt: f64,
        steps: usize,
        epsilons: Vec<f64>,
        runs: usize,
    },
    /// `|a(t)|²` of finite ladders plus the `2Γ` line for `bound_for`.
    FiniteBj {
        ladder: LadderConfig,
        ladder_sizes: Vec<usize>,
        bound_for: usize,
        horizon: f64,
        samples: usize,
    },
    /// Maximum residual oscillation against `Γ`, with the `2Γ` bound.
    ResidualScan {
        ladder: LadderConfig,
        ladder_sizes: Vec<usize>,
        samples: usize,
    },
    /// Fixed-point sequence: ideal run plus noisy trajectories. Missing
    /// `accuracy` is derived from `ell`; missing `ell` from `accuracy`.
    FixedPoint {
        problem: ProblemConfig,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ell: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        accuracy: Option<f64>,
        epsilon: f64,
        trajectories: usize,
    },
    /// Final-step `δF` against sequence length, `δ` from the saturated
    /// length condition.
    FixedPointDeviation {
        problem: ProblemConfig,
        ells: Vec<usize>,
        epsilons: Vec<f64>,
        runs: usize,
    },
}

/// A resolved, fully explicit run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub figure_id: FigureId,
    pub experiment: Experiment,
    pub seed: u64,
    pub out: PathBuf,
}

/// On-disk form; `experiment`, `seed` and `out` may be omitted.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    figure_id: FigureId,
    #[serde(default)]
    experiment: Option<Experiment>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn preset(id: FigureId) -> Result<Self> {
        Ok(Self {
            figure_id: id,
            experiment: presets::experiment(id)?,
            seed: DEFAULT_SEED,
            out: PathBuf::from(DEFAULT_OUT),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::parse(text, Path::new("<config>"))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    fn parse(text: &str, path: &Path) -> Result<Self> {
        let json_err = |source| ExperimentError::Json {
            path: path.to_path_buf(),
            source,
        };
        let mut value: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
        // manifests carry the resolved config under "config"
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        let file: ConfigFile = serde_json::from_value(value).map_err(json_err)?;
        let experiment = match (file.experiment, file.figure_id) {
            (Some(e), _) => e,
            (None, FigureId::Custom) => {
                return config_err("figure_id `custom` requires an explicit `experiment`")
            }
            (None, id) => presets::experiment(id)?,
        };
        let config = Self {
            figure_id: file.figure_id,
            experiment,
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            out: file.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        };
        config.check()?;
        Ok(config)
    }

    /// Structural checks that do not need any simulation.
    pub fn check(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                config_err(format!("`{name}` must be positive, got {x}"))
            }
        };
        let nonneg_all = |xs: &[f64]| {
            if xs.is_empty() {
                return config_err("`epsilons` must not be empty");
            }
            match xs.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                Some(x) => config_err(format!("control error must be >= 0, got {x}")),
                None => Ok(()),
            }
        };
        let at_least = |name: &str, v: usize, min: usize| {
            if v >= min {
                Ok(())
            } else {
                config_err(format!("`{name}` must be at least {min}, got {v}"))
            }
        };
        match &self.experiment {
            Experiment::Continuous {
                problem,
                reservoirs,
                horizon,
                samples,
                ..
            } => {
                let p = problem.build()?;
                at_least("reservoirs", reservoirs.len(), 1)?;
                for r in reservoirs {
                    r.build(&p)?;
                }
                positive("horizon", *horizon)?;
                at_least("samples", *samples, 2)
            }
            Experiment::Trotter {
                problem,
                reservoirs,
                dt,
                steps,
                ..
            } => {
                let p = problem.build()?;
                at_least("reservoirs", reservoirs.len(), 1)?;
                for r in reservoirs {
                    r.build(&p)?;
                }
                positive("dt", *dt)?;
                at_least("steps", *steps, 1)
            }
            Experiment::NoisyTrotter {
                problem,
                reservoir,
                dt,
                steps,
                epsilon,
                ..
            } => {
                reservoir.build(&problem.build()?)?;
                positive("dt", *dt)?;
                nonneg_all(&[*epsilon])?;
                at_least("steps", *steps, 1)
            }
            Experiment::TrotterDeviation {
                problem,
                reservoir,
                dt,
                steps,
                epsilons,
                runs,
            } => {
                reservoir.build(&problem.build()?)?;
                positive("dt", *dt)?;
                nonneg_all(epsilons)?;
                at_least("steps", *steps, 1)?;
                at_least("runs", *runs, 1)
            }
            Experiment::FiniteBj {
                ladder,
                ladder_sizes,
                bound_for,
                horizon,
                samples,
            } => {
                check_ladder(ladder, ladder_sizes)?;
                if !ladder_sizes.contains(bound_for) {
                    return config_err(format!("`bound_for` {bound_for} is not in `ladder_sizes`"));
                }
                positive("horizon", *horizon)?;
                at_least("samples", *samples, 2)
            }
            Experiment::ResidualScan {
                ladder,
                ladder_sizes,
                samples,
            } => {
                check_ladder(ladder, ladder_sizes)?;
                at_least("samples", *samples, 2)
            }
            Experiment::FixedPoint {
                problem,
                ell,
                accuracy,
                epsilon,
                ..
            } => {
                problem.build()?;
                if ell.is_none() && accuracy.is_none() {
                    return config_err("fixed point: one of `ell` or `accuracy` is required");
                }
                nonneg_all(&[*epsilon])
            }
            Experiment::FixedPointDeviation {
                problem,
                ells,
                epsilons,
                runs,
            } => {
                problem.build()?;
                at_least("ells", ells.len(), 1)?;
                nonneg_all(epsilons)?;
                at_least("runs", *runs, 1)
            }
        }
    }
}

fn check_ladder(ladder: &LadderConfig, sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return config_err("`ladder_sizes` must not be empty");
    }
    for &size in sizes {
        dissgrover::hamiltonian::BjLadderSpec::new(size, ladder.beta, ladder.delta, ladder.eps_a)?;
    }
    Ok(())
}
