//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Tolerances are fixed here and must not be loosened.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use dissgrover::bj::{
    bj_fidelity, bj_fidelity_two_windows, finite_bj_residual, map_to_bj, residual_gamma,
};
use dissgrover::fixed_point::{fp_angles, fp_length, fp_mean_deviation, run_fixed_point};
use dissgrover::hamiltonian::{
    build_dissipative, build_standard_grover, diagonalize, evolve, BjLadderSpec,
};
use dissgrover::noise::NoiseSpec;
use dissgrover::params::{choose_delta_known, standard_grover_tmax};
use dissgrover::search::{success_probability, uniform_state, ReservoirSpec, SearchProblem};
use dissgrover::trotter::{
    mean_deviation_stats, run_gate_circuit_detailed, run_trotter, trotter_state,
};
use dissgrover_experiments::{compute_series, run_experiment, ExperimentConfig, FigureId};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Sim<T> = Result<T, Box<dyn std::error::Error>>;

fn standard_grover() -> Sim<Outcome> {
    let mut worst_f: f64 = 1.0;
    let mut worst_period: f64 = 0.0;
    for n in 3..=6u32 {
        let p = SearchProblem::with_first(n, 1)?;
        let spec = ReservoirSpec::trivial();
        let prop = diagonalize(&build_standard_grover(&p))?;
        let spectral = prop.project(&uniform_state(n, 0)?)?;
        let f = success_probability(&spectral.at(standard_grover_tmax(p.size(), 1)?)?, &p, &spec)?;
        worst_f = worst_f.min(f);
        // period = time of the first return to the minimum
        let period = PI * (p.size() as f64).sqrt();
        let samples = 6000;
        let dt = 1.5 * period / samples as f64;
        let mut best = (f64::INFINITY, 0.0);
        for i in samples / 3..=samples {
            let t = i as f64 * dt;
            let f = success_probability(&spectral.at(t)?, &p, &spec)?;
            if f < best.0 {
                best = (f, t);
            }
        }
        worst_period = worst_period.max((best.1 / period - 1.0).abs());
    }
    Ok(check(
        worst_f >= 0.999 && worst_period <= 0.02,
        format!(
            "min F(t_max) = {worst_f:.6} (≥ 0.999), max period error = {:.3}% (≤ 2%)",
            worst_period * 100.0
        ),
    ))
}

fn fig2a_setup() -> Sim<(SearchProblem, ReservoirSpec)> {
    Ok((
        SearchProblem::with_first(3, 1)?,
        ReservoirSpec::new(4, 0.1)?,
    ))
}

fn decay_vs_bj() -> Sim<Outcome> {
    let (p, spec) = fig2a_setup()?;
    let params = map_to_bj(&p, &spec);
    let tau = params.tau();
    let prop = diagonalize(&build_dissipative(&p, &spec))?;
    let spectral = prop.project(&uniform_state(3, 4)?)?;
    let samples = 4000;
    let (mut max_dev, mut at) = (0.0f64, 0.0);
    for i in 0..=samples {
        let t = 0.9 * tau * i as f64 / samples as f64;
        let sim = success_probability(&spectral.at(t)?, &p, &spec)?;
        let dev = (sim - bj_fidelity_two_windows(&params, t)?).abs();
        if dev > max_dev {
            (max_dev, at) = (dev, t);
        }
    }
    let f08 = success_probability(&spectral.at(0.8 * tau)?, &p, &spec)?;
    Ok(check(
        max_dev <= 0.1 && f08 >= 0.85,
        format!(
            "max |F_sim − F_BJ| on [0, 0.9τ] = {max_dev:.4} at t = {at:.3} (≤ 0.1); \
             deviation at t = 0 is M/N = {:.4}; F_sim(0.8τ) = {f08:.4} (≥ 0.85)",
            p.solution_fraction()
        ),
    ))
}

fn revival() -> Sim<Outcome> {
    let (p, spec) = fig2a_setup()?;
    let params = map_to_bj(&p, &spec);
    let (tau, gamma) = (params.tau(), params.gamma());
    let prop = diagonalize(&build_dissipative(&p, &spec))?;
    let spectral = prop.project(&uniform_state(3, 4)?)?;
    let samples = 4000;
    let mut min_sim = f64::INFINITY;
    for i in 0..=samples {
        let t = tau + 4.0 / gamma * i as f64 / samples as f64;
        min_sim = min_sim.min(success_probability(&spectral.at(t)?, &p, &spec)?);
    }
    let predicted = bj_fidelity(&params, tau + 2.0 / gamma)?;
    Ok(check(
        min_sim <= 0.6 && (min_sim - predicted).abs() <= 0.1,
        format!(
            "min F_sim on [τ, τ+4/γ] = {min_sim:.4} (≤ 0.6); BJ at τ+2/γ = {predicted:.4}; \
             difference {:.4} (≤ 0.1)",
            (min_sim - predicted).abs()
        ),
    ))
}

fn trotter_gate() -> Sim<Outcome> {
    let p = SearchProblem::with_first(3, 1)?;
    let mut max_diff = 0.0f64;
    let mut max_leak = 0.0f64;
    let mut min_order = f64::INFINITY;
    let mut errors_report = String::new();
    for r in [3u32, 4] {
        let spec = ReservoirSpec::new(r, 0.1)?;
        let gate = run_gate_circuit_detailed(&p, &spec, PI, 20)?;
        let direct = run_trotter(&p, &spec, PI, 20, None)?;
        for (a, b) in gate.trace.fidelity().iter().zip(direct.fidelity()) {
            max_diff = max_diff.max((a - b).abs());
        }
        max_leak = gate
            .ancilla_populations
            .iter()
            .fold(max_leak, |m, &x| m.max(x));

        // halve δt from π at fixed t = 20π and compare with exact evolution
        let t = 20.0 * PI;
        let prop = diagonalize(&build_dissipative(&p, &spec))?;
        let exact = evolve(&prop, &uniform_state(3, r)?, t)?;
        let errs: Vec<f64> = (0..8)
            .map(|k| {
                let steps = 20usize << k;
                let stepped = trotter_state(&p, &spec, t / steps as f64, steps)?;
                Ok(exact
                    .amplitudes()
                    .iter()
                    .zip(stepped.amplitudes())
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt())
            })
            .collect::<Sim<_>>()?;
        // order from the asymptotic end of the halving sequence
        let tail = &errs[errs.len() - 4..];
        let order = (tail[0] / tail[3]).log2() / 3.0;
        min_order = min_order.min(order);
        errors_report.push_str(&format!(
            " r={r}: ‖error‖ {:.2e}→{:.2e}, order {order:.4};",
            errs[0],
            errs[errs.len() - 1]
        ));
    }
    Ok(check(
        max_diff < 1e-10 && max_leak < 1e-12 && min_order >= 1.0,
        format!(
            "max |F_gate − F_trotter| = {max_diff:.2e} (< 1e-10), max ancilla |1⟩ = {max_leak:.2e} \
             (< 1e-12);{errors_report} min order {min_order:.4} (≥ 1)"
        ),
    ))
}

fn finite_bj() -> Sim<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for size in [10usize, 30, 50] {
        let spec = BjLadderSpec::new(size, 1.0, 1.0, 0.0)?;
        let res = finite_bj_residual(&spec, 4000)?;
        let bound = 2.0 * res.gamma_resid;
        pass &= res.max_deviation <= bound;
        parts.push(format!(
            "R={size}: {:.5} ≤ 2Γ = {bound:.5}",
            res.max_deviation
        ));
    }
    Ok(check(pass, parts.join("; ")))
}

fn parameter_identities() -> Sim<Outcome> {
    let (mut worst_runtime, mut worst_gamma) = (0.0f64, 0.0f64);
    for n in 2..=8u32 {
        for m in 1..=4usize.min((1 << n) - 1) {
            let p = SearchProblem::with_first(n, m)?;
            for r in 0..=5u32 {
                for c in [3.0, 5.0, 8.0] {
                    let choice = choose_delta_known(&p, &ReservoirSpec::new(r, 1.0)?, c)?;
                    let spec = ReservoirSpec::new(r, choice.delta)?;
                    let bj = map_to_bj(&p, &spec);
                    worst_runtime =
                        worst_runtime.max((bj.gamma() * choice.runtime_estimate - 1.0).abs());
                    let main = residual_gamma(&p, &spec);
                    let series_form = bj.residual_gamma(spec.size());
                    worst_gamma = worst_gamma.max((main - series_form).abs() / main);
                }
            }
        }
    }
    Ok(check(
        worst_runtime <= 1e-12 && worst_gamma <= 1e-12,
        format!("max |γ·runtime − 1| = {worst_runtime:.1e}, max relative Γ mismatch = {worst_gamma:.1e} (≤ 1e-12)"),
    ))
}

fn fixed_point_ideal() -> Sim<Outcome> {
    let p = SearchProblem::with_first(6, 1)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for delta in [0.1, 0.2] {
        let ell = fp_length(64, 1, delta)?;
        let plan = fp_angles(ell, delta)?;
        let (_, f) = run_fixed_point(&p, &plan, None)?
            .last()
            .ok_or("empty trace")?;
        pass &= f >= 1.0 - delta * delta;
        parts.push(format!(
            "δ={delta}: ℓ={ell}, F={f:.5} ≥ {:.4}",
            1.0 - delta * delta
        ));
    }
    Ok(check(pass, parts.join("; ")))
}

fn robustness_contrast() -> Sim<Outcome> {
    let eps_name = "deviation_eps0.05";
    let fig4b = ExperimentConfig::preset(FigureId::Fig4b)?;
    let fig6b = ExperimentConfig::preset(FigureId::Fig6b)?;
    let diss = compute_series(&fig4b)?
        .into_iter()
        .find(|s| s.name == eps_name)
        .ok_or("missing dissipative ε = 0.05 series")?;
    let fp = compute_series(&fig6b)?
        .into_iter()
        .find(|s| s.name == eps_name)
        .ok_or("missing fixed-point ε = 0.05 series")?;

    let p = SearchProblem::with_first(6, 1)?;
    let spec = ReservoirSpec::new(3, 3.0 * 63f64.sqrt() / 512.0)?;
    let bj = map_to_bj(&p, &spec);
    // plateau: after five decay times, before 0.9 of the revival time
    let first = (5.0 / (bj.gamma() * PI)).ceil() as usize;
    let last = ((0.9 * bj.tau() / PI).floor() as usize).min(diss.len() - 1);
    let plateau = diss.value[first..=last].iter().sum::<f64>() / (last - first + 1) as f64;

    let mut pass = true;
    let mut min_fp = f64::INFINITY;
    let mut worst_matched_gap = f64::INFINITY;
    for (&ell, &dev) in fp.abscissa.iter().zip(&fp.value) {
        let ell = ell as usize;
        if ell < 9 {
            continue;
        }
        min_fp = min_fp.min(dev);
        let matched = diss.value[ell];
        pass &= plateau < dev && matched < dev;
        worst_matched_gap = worst_matched_gap.min(dev - matched);
    }

    // ε = 0 yields exactly zero deviation for both schemes
    let zero = NoiseSpec::new(0.0, fig4b.seed, 100)?;
    let diss_zero = mean_deviation_stats(&p, &spec, PI, 40, &zero)?;
    let diss_zero_ok = diss_zero.mean.iter().all(|&x| x == 0.0);
    let fp_zero_ok = (9..=15).all(|ell| {
        let delta = dissgrover::fixed_point::fp_accuracy_for_length(64, 1, ell).unwrap();
        let plan = fp_angles(ell, delta).unwrap();
        fp_mean_deviation(&p, &plan, &NoiseSpec::new(0.0, fig6b.seed, 100).unwrap()).unwrap() == 0.0
    });
    pass &= diss_zero_ok && fp_zero_ok;
    Ok(check(
        pass,
        format!(
            "dissipative plateau δF (steps {first}..={last}) = {plateau:.5} < min fixed-point δF(ℓ ≥ 9) = {min_fp:.5}; \
             smallest step-matched margin {worst_matched_gap:.5}; δF ≡ 0 at ε = 0: {}",
            diss_zero_ok && fp_zero_ok
        ),
    ))
}

fn determinism() -> Sim<Outcome> {
    let a = tempfile::tempdir()?;
    let b = tempfile::tempdir()?;
    let mut compared = 0;
    let mut mismatched = Vec::new();
    for id in FigureId::PRESETS {
        let mut config = ExperimentConfig::preset(id)?;
        config.out = a.path().to_path_buf();
        let first = run_experiment(&config)?;
        config.out = b.path().to_path_buf();
        let second = run_experiment(&config)?;
        for (x, y) in first.files.iter().zip(&second.files) {
            if x.extension().is_some_and(|e| e == "csv") {
                compared += 1;
                if std::fs::read(x)? != std::fs::read(y)? {
                    mismatched.push(x.display().to_string());
                }
            }
        }
    }
    Ok(check(
        mismatched.is_empty(),
        format!("{compared} CSVs across 10 presets compared; mismatches: {mismatched:?}"),
    ))
}

fn main() {
    type Criterion = (&'static str, Duration, fn() -> Sim<Outcome>);
    let criteria: [Criterion; 9] = [
        (
            "standard continuous Grover",
            Duration::from_secs(5),
            standard_grover,
        ),
        (
            "dissipative decay vs BJ prediction",
            Duration::from_secs(10),
            decay_vs_bj,
        ),
        ("revival structure", Duration::from_secs(10), revival),
        (
            "Trotter/gate equivalence and convergence",
            Duration::from_secs(5),
            trotter_gate,
        ),
        (
            "finite-BJ residual bound",
            Duration::from_secs(10),
            finite_bj,
        ),
        (
            "parameter identities",
            Duration::from_secs(1),
            parameter_identities,
        ),
        (
            "fixed-point ideal guarantee",
            Duration::from_secs(2),
            fixed_point_ideal,
        ),
        (
            "robustness contrast",
            Duration::from_secs(180),
            robustness_contrast,
        ),
        ("determinism", Duration::from_secs(300), determinism),
    ];
    let mut failures = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(o) => (o.pass && elapsed <= limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} {name}: {detail} [{:.2}s, limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failures} failed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
