//! Turns a resolved config into series and writes them out.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dissgrover::bj::{
    bj_fidelity, finite_bj_residual, finite_bj_source_amplitudes, map_to_bj, BjParams,
};
use dissgrover::fixed_point::{
    fp_accuracy_for_length, fp_angles, fp_deviation, fp_length, run_fixed_point, FixedPointPlan,
};
use dissgrover::hamiltonian::{
    build_dissipative, build_standard_grover, trace_continuous, BjLadderSpec,
};
use dissgrover::noise::NoiseSpec;
use dissgrover::search::{uniform_state, FidelityTrace, ReservoirSpec, SearchProblem};
use dissgrover::trotter::{mean_deviation_stats, run_trotter};

use crate::config::{Experiment, ExperimentConfig, LadderConfig};
use crate::error::{config_err, ExperimentError, Result};
use crate::presets;
use crate::series::{Provenance, Series};
use crate::validate::validate;

/// `samples` uniform points on `[0, horizon]`.
pub fn time_grid(horizon: f64, samples: usize) -> Vec<f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(|i| horizon * i as f64 / last).collect()
}

fn from_trace(
    name: String,
    provenance: Provenance,
    description: String,
    trace: FidelityTrace,
) -> Result<Series> {
    Series::new(
        name,
        provenance,
        description,
        trace.abscissa().to_vec(),
        trace.fidelity().to_vec(),
    )
}

fn constant(name: String, description: String, abscissa: Vec<f64>, value: f64) -> Result<Series> {
    let values = vec![value; abscissa.len()];
    Series::new(name, Provenance::Bound, description, abscissa, values)
}

fn bj_series(
    name: String,
    params: &BjParams,
    abscissa: Vec<f64>,
    times: impl Iterator<Item = f64>,
) -> Result<Series> {
    let values = times
        .map(|t| bj_fidelity(params, t))
        .collect::<dissgrover::Result<Vec<_>>>()?;
    Series::new(
        name,
        Provenance::Analytic,
        format!(
            "BJ prediction, γ = {:.6}, τ = {:.6}",
            params.gamma(),
            params.tau()
        ),
        abscissa,
        values,
    )
}

fn ladder_spec(ladder: &LadderConfig, size: usize) -> Result<BjLadderSpec> {
    Ok(BjLadderSpec::new(
        size,
        ladder.beta,
        ladder.delta,
        ladder.eps_a,
    )?)
}

/// Resolves `(ℓ, δ)` for a fixed-point run.
pub fn fixed_point_plan(
    problem: &SearchProblem,
    ell: Option<usize>,
    accuracy: Option<f64>,
) -> Result<FixedPointPlan> {
    let (size, m) = (problem.size(), problem.num_solutions());
    let (ell, delta) = match (ell, accuracy) {
        (Some(l), None) => (l, fp_accuracy_for_length(size, m, l)?),
        (None, Some(d)) => (fp_length(size, m, d)?, d),
        (Some(l), Some(d)) => (l, d),
        (None, None) => return config_err("fixed point: one of `ell` or `accuracy` is required"),
    };
    Ok(fp_angles(ell, delta)?)
}

/// Computes every series of an experiment, sorted by name.
pub fn compute_series(config: &ExperimentConfig) -> Result<Vec<Series>> {
    config.check()?;
    let seed = config.seed;
    let mut out = Vec::new();
    match &config.experiment {
        Experiment::Continuous {
            problem,
            reservoirs,
            horizon,
            samples,
            bj,
        } => {
            let p = problem.build()?;
            let times = time_grid(*horizon, *samples);
            for rc in reservoirs {
                let (spec, _) = rc.build(&p)?;
                let r = spec.r();
                let psi0 = uniform_state(p.n(), r)?;
                let (trace, what) = if r == 0 {
                    let h = build_standard_grover(&p);
                    let trivial = ReservoirSpec::trivial();
                    (
                        trace_continuous(&h, &psi0, &times, &p, &trivial)?,
                        "standard Grover Hamiltonian".to_string(),
                    )
                } else {
                    let h = build_dissipative(&p, &spec);
                    (
                        trace_continuous(&h, &psi0, &times, &p, &spec)?,
                        format!("dissipative Hamiltonian, r = {r}, Δ = {}", spec.delta()),
                    )
                };
                out.push(from_trace(
                    format!("continuous_r{r}"),
                    Provenance::Simulated,
                    what,
                    trace,
                )?);
                if *bj && r > 0 {
                    let params = map_to_bj(&p, &spec);
                    out.push(bj_series(
                        format!("bj_r{r}"),
                        &params,
                        times.clone(),
                        times.iter().copied(),
                    )?);
                }
            }
        }
        Experiment::Trotter {
            problem,
            reservoirs,
            dt,
            steps,
            bj,
        } => {
            let p = problem.build()?;
            for rc in reservoirs {
                let (spec, _) = rc.build(&p)?;
                let r = spec.r();
                let trace = run_trotter(&p, &spec, *dt, *steps, None)?;
                let what = if r == 0 {
                    format!("standard Grover iterates, δt = {dt}")
                } else {
                    format!("Trotter iterates, r = {r}, Δ = {}, δt = {dt}", spec.delta())
                };
                let abscissa = trace.abscissa().to_vec();
                out.push(from_trace(
                    format!("trotter_r{r}"),
                    Provenance::Simulated,
                    what,
                    trace,
                )?);
                if *bj && r > 0 {
                    let params = map_to_bj(&p, &spec);
                    let times = abscissa.iter().map(|l| l * dt);
                    out.push(bj_series(
                        format!("bj_r{r}"),
                        &params,
                        abscissa.clone(),
                        times,
                    )?);
                }
            }
        }
        Experiment::NoisyTrotter {
            problem,
            reservoir,
            dt,
            steps,
            epsilon,
            trajectories,
            bj,
        } => {
            let p = problem.build()?;
            let (spec, _) = reservoir.build(&p)?;
            let ideal = run_trotter(&p, &spec, *dt, *steps, None)?;
            let abscissa = ideal.abscissa().to_vec();
            out.push(from_trace(
                "ideal".into(),
                Provenance::Simulated,
                "ε = 0".into(),
                ideal,
            )?);
            let noise = NoiseSpec::new(*epsilon, seed, (*trajectories).max(1))?;
            for run in 0..*trajectories {
                let mut src = noise.run_source(run);
                let trace = run_trotter(&p, &spec, *dt, *steps, Some(&mut src))?;
                out.push(from_trace(
                    format!("run{run}"),
                    Provenance::Simulated,
                    format!("ε = {epsilon}, stream {run}"),
                    trace,
                )?);
            }
            if *bj {
                let params = map_to_bj(&p, &spec);
                let times = abscissa.iter().map(|l| l * dt);
                out.push(bj_series("bj".into(), &params, abscissa.clone(), times)?);
            }
        }
        Experiment::TrotterDeviation {
            problem,
            reservoir,
            dt,
            steps,
            epsilons,
            runs,
        } => {
            let p = problem.build()?;
            let (spec, _) = reservoir.build(&p)?;
            for &eps in epsilons {
                let noise = NoiseSpec::new(eps, seed, *runs)?;
                let stats = mean_deviation_stats(&p, &spec, *dt, *steps, &noise)?;
                let series = Series::new(
                    format!("deviation_eps{eps}"),
                    Provenance::Simulated,
                    format!("mean |F(ε) − F(0)| over {runs} runs, ε = {eps}"),
                    stats.abscissa,
                    stats.mean,
                )?;
                out.push(series.with_stderr(stats.std_error)?);
            }
        }
        Experiment::FiniteBj {
            ladder,
            ladder_sizes,
            bound_for,
            horizon,
            samples,
        } => {
            let times = time_grid(*horizon, *samples);
            for &size in ladder_sizes {
                let spec = ladder_spec(ladder, size)?;
                let amps = finite_bj_source_amplitudes(&spec, &times)?;
                out.push(Series::new(
                    format!("finite_bj_R{size}"),
                    Provenance::Simulated,
                    format!("|a(t)|², ladder of {} states", size + 1),
                    times.clone(),
                    amps.iter().map(|a| a.norm_sqr()).collect(),
                )?);
            }
            let params = BjParams::new(ladder.eps_a, ladder.beta, ladder.delta)?;
            let gamma_resid = params.residual_gamma(*bound_for);
            out.push(constant(
                format!("bound_R{bound_for}"),
                format!("2Γ with Γ = β²/(Δ²R) = {gamma_resid}"),
                times,
                dissgrover::bj::residual_bound(gamma_resid)?,
            )?);
        }
        Experiment::ResidualScan {
            ladder,
            ladder_sizes,
            samples,
        } => {
            let mut points = ladder_sizes
                .iter()
                .map(|&size| Ok(finite_bj_residual(&ladder_spec(ladder, size)?, *samples)?))
                .collect::<Result<Vec<_>>>()?;
            points.sort_by(|a, b| a.gamma_resid.total_cmp(&b.gamma_resid));
            let gammas: Vec<f64> = points.iter().map(|o| o.gamma_resid).collect();
            let sizes: Vec<String> = points.iter().map(|o| o.ladder_size.to_string()).collect();
            out.push(Series::new(
                "max_deviation",
                Provenance::Simulated,
                format!(
                    "max ||a|² − e^(−γt)| between 5/γ and 0.9τ, R = {}",
                    sizes.join(", ")
                ),
                gammas.clone(),
                points.iter().map(|o| o.max_deviation).collect(),
            )?);
            let bounds = gammas
                .iter()
                .map(|&g| dissgrover::bj::residual_bound(g))
                .collect::<dissgrover::Result<Vec<_>>>()?;
            out.push(Series::new(
                "bound",
                Provenance::Bound,
                "2Γ",
                gammas,
                bounds,
            )?);
        }
        Experiment::FixedPoint {
            problem,
            ell,
            accuracy,
            epsilon,
            trajectories,
        } => {
            let p = problem.build()?;
            let plan = fixed_point_plan(&p, *ell, *accuracy)?;
            let ideal = run_fixed_point(&p, &plan, None)?;
            let abscissa = ideal.abscissa().to_vec();
            out.push(from_trace(
                "ideal".into(),
                Provenance::Simulated,
                format!("ε = 0, ℓ = {}, δ = {}", plan.ell(), plan.delta_acc()),
                ideal,
            )?);
            let noise = NoiseSpec::new(*epsilon, seed, (*trajectories).max(1))?;
            for run in 0..*trajectories {
                let mut src = noise.run_source(run);
                let trace = run_fixed_point(&p, &plan, Some(&mut src))?;
                out.push(from_trace(
                    format!("run{run}"),
                    Provenance::Simulated,
                    format!("ε = {epsilon}, stream {run}"),
                    trace,
                )?);
            }
            out.push(constant(
                "floor".into(),
                "guaranteed final success probability 1 − δ²".into(),
                abscissa,
                plan.guaranteed_fidelity(),
            )?);
        }
        Experiment::FixedPointDeviation {
            problem,
            ells,
            epsilons,
            runs,
        } => {
            let p = problem.build()?;
            let mut ells = ells.clone();
            ells.sort_unstable();
            ells.dedup();
            let plans = ells
                .iter()
                .map(|&l| fixed_point_plan(&p, Some(l), None))
                .collect::<Result<Vec<_>>>()?;
            for &eps in epsilons {
                let noise = NoiseSpec::new(eps, seed, *runs)?;
                let estimates = plans
                    .iter()
                    .map(|plan| Ok(fp_deviation(&p, plan, &noise)?))
                    .collect::<Result<Vec<_>>>()?;
                let series = Series::new(
                    format!("deviation_eps{eps}"),
                    Provenance::Simulated,
                    format!("final mean |F(ε) − F(0)| over {runs} runs, ε = {eps}"),
                    ells.iter().map(|&l| l as f64).collect(),
                    estimates.iter().map(|e| e.mean).collect(),
                )?;
                out.push(series.with_stderr(estimates.iter().map(|e| e.std_error).collect())?);
            }
        }
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    let mut seen = BTreeSet::new();
    if let Some(dup) = out.iter().find(|s| !seen.insert(s.name.clone())) {
        return config_err(format!("duplicate series name {:?}", dup.name));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub name: String,
    pub file: String,
    pub provenance: Provenance,
    pub description: String,
    pub rows: usize,
    pub stderr: bool,
}

/// Everything needed to reproduce and interpret a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub series: Vec<SeriesRecord>,
    pub diagnostics: Vec<String>,
    pub notes: Vec<String>,
    pub duration_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub dir: PathBuf,
    /// CSV files in series-name order, then the manifest.
    pub files: Vec<PathBuf>,
    pub manifest: RunManifest,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Runs the experiment and writes `<out>/<figure_id>/*.csv` plus
/// `manifest.json`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput> {
    let start = Instant::now();
    let series = compute_series(config)?;
    let dir = config.out.join(config.figure_id.as_str());
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let mut files = Vec::with_capacity(series.len() + 1);
    for s in &series {
        let path = dir.join(s.file_name());
        s.write_csv(&path)?;
        files.push(path);
    }
    let mut notes = if config.figure_id == crate::config::FigureId::Custom {
        Vec::new()
    } else {
        presets::notes(config.figure_id)
    };
    notes.push("CSV columns: abscissa,value[,stderr]".into());
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.seed,
        config: config.clone(),
        series: series
            .iter()
            .map(|s| SeriesRecord {
                name: s.name.clone(),
                file: s.file_name(),
                provenance: s.provenance,
                description: s.description.clone(),
                rows: s.len(),
                stderr: s.stderr.is_some(),
            })
            .collect(),
        diagnostics: validate(config).iter().map(ToString::to_string).collect(),
        notes,
        duration_seconds: start.elapsed().as_secs_f64(),
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(|source| ExperimentError::Json {
        path: path.clone(),
        source,
    })?;
    std::fs::write(&path, text + "\n").map_err(io_err(&path))?;
    files.push(path);
    Ok(RunOutput {
        dir,
        files,
        manifest,
    })
}
