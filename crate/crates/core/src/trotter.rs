//! Discrete-time dissipative Grover search.
//!
//! One iterate is `U_+·U_S` (applied right to left, `U_S` first) with
//!
//! * `U_S = Σ e^{−iE_k·δt}|S_m,k⟩⟨S_m,k| + (identity elsewhere)`
//! * `U_+ = I − (1 − e^{−iδt})|+^{n+r}⟩⟨+^{n+r}|`
//!
//! [`GateCircuit`] realises the same iterate with an oracle ancilla, a
//! conditional reservoir phase and a phase kickback in the Hadamard frame.
//!
//! Control errors rescale the time step of each gate application by
//! `1 + εξ`; per iterate one factor is drawn for `U_S` and then one for `U_+`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{arg_err, Error, Result};
use crate::noise::{mean_and_stderr, ErrorSource, NoiseSpec};
use crate::search::{
    solution_mass, uniform_state, FidelityTrace, ReservoirSpec, SearchProblem, StateVector,
};

/// Ancilla population above which the gate circuit is considered broken.
pub const ANCILLA_LEAK_LIMIT: f64 = 1e-9;

/// Reflection-like phase about the uniform state, as a rank-1 update.
/// `dt` already includes any control-error factor.
pub fn apply_u_plus(state: &mut StateVector, dt: f64) {
    let amps = state.amplitudes_mut();
    let inv_sqrt = 1.0 / (amps.len() as f64).sqrt();
    let overlap = amps.iter().sum::<Complex64>() * inv_sqrt;
    let shift = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -dt)) * overlap * inv_sqrt;
    amps.iter_mut().for_each(|a| *a -= shift);
}

/// Diagonal oracle phases `e^{−iE_k·dt}` on every `|S_m, k⟩`.
pub fn apply_u_s(
    state: &mut StateVector,
    dt: f64,
    problem: &SearchProblem,
    spec: &ReservoirSpec,
) -> Result<()> {
    let r = spec.size();
    if state.dim() != problem.size() * r {
        return arg_err(format!(
            "state dim {} does not match N·R = {}",
            state.dim(),
            problem.size() * r
        ));
    }
    let phases: Vec<Complex64> = spec
        .energies()
        .iter()
        .map(|e| Complex64::from_polar(1.0, -e * dt))
        .collect();
    let amps = state.amplitudes_mut();
    for &s in problem.solutions() {
        for (a, p) in amps[s * r..(s + 1) * r].iter_mut().zip(&phases) {
            *a *= p;
        }
    }
    Ok(())
}

fn validate_run(dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return arg_err(format!("time step must be positive, got {dt}"));
    }
    Ok(())
}

/// Applies `(U_+U_S)^L` to the uniform state, recording the success
/// probability before the first iterate and after each one (`L + 1` points,
/// abscissa = iterate count). With `errors`, each gate draws a fresh factor.
pub fn run_trotter(
    problem: &SearchProblem,
    spec: &ReservoirSpec,
    dt: f64,
    steps: usize,
    mut errors: Option<&mut ErrorSource>,
) -> Result<FidelityTrace> {
    validate_run(dt)?;
    let r = spec.size();
    let mut state = uniform_state(problem.n(), spec.r())?;
    let mut fidelity = Vec::with_capacity(steps + 1);
    fidelity.push(solution_mass(state.amplitudes(), problem.solutions(), r));
    for _ in 0..steps {
        let (f_s, f_plus) = match errors.as_deref_mut() {
            Some(src) => {
                let f_s = src.next_factor();
                (f_s, src.next_factor())
            }
            None => (1.0, 1.0),
        };
        apply_u_s(&mut state, dt * f_s, problem, spec)?;
        apply_u_plus(&mut state, dt * f_plus);
        fidelity.push(solution_mass(state.amplitudes(), problem.solutions(), r));
    }
    FidelityTrace::new((0..=steps).map(|l| l as f64).collect(), fidelity)
}

/// Noise-free state after `steps` iterates.
pub fn trotter_state(
    problem: &SearchProblem,
    spec: &ReservoirSpec,
    dt: f64,
    steps: usize,
) -> Result<StateVector> {
    validate_run(dt)?;
    let mut state = uniform_state(problem.n(), spec.r())?;
    for _ in 0..steps {
        apply_u_s(&mut state, dt, problem, spec)?;
        apply_u_plus(&mut state, dt);
    }
    Ok(state)
}

/// Register plus one oracle ancilla, stored as the two register branches
/// `|reg₀⟩⊗|0⟩ + |reg₁⟩⊗|1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitState {
    ancilla0: StateVector,
    ancilla1: StateVector,
}

impl CircuitState {
    /// `|ψ⟩⊗|0⟩`.
    pub fn new(register: StateVector) -> Self {
        let dim = register.dim();
        Self {
            ancilla0: register,
            ancilla1: StateVector::from_amplitudes(vec![Complex64::new(0.0, 0.0); dim])
                .expect("non-empty register"),
        }
    }

    /// Register branch with the ancilla in `|0⟩`.
    pub fn register(&self) -> &StateVector {
        &self.ancilla0
    }

    /// Register branch with the ancilla in `|1⟩`.
    pub fn excited_branch(&self) -> &StateVector {
        &self.ancilla1
    }

    pub fn ancilla_population(&self) -> f64 {
        self.ancilla1.norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ancilla0.norm_sqr() + self.ancilla1.norm_sqr()
    }
}

/// In-place normalised Walsh-Hadamard transform (Hadamard on every qubit).
fn hadamard_all(amps: &mut [Complex64]) {
    let dim = amps.len();
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut half = 1;
    while half < dim {
        for block in (0..dim).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (amps[i], amps[i + half]);
                amps[i] = (a + b) * scale;
                amps[i + half] = (a - b) * scale;
            }
        }
        half *= 2;
    }
}

/// Gate-level realisation of one dissipative Grover iterate.
#[derive(Debug, Clone)]
pub struct GateCircuit {
    problem: SearchProblem,
    spec: ReservoirSpec,
    dt: f64,
    reservoir_phases: Vec<Complex64>,
    state: CircuitState,
}

impl GateCircuit {
    /// Circuit prepared in `|+^n,+^r⟩⊗|0⟩`.
    pub fn new(problem: &SearchProblem, spec: &ReservoirSpec, dt: f64) -> Result<Self> {
        validate_run(dt)?;
        let register = uniform_state(problem.n(), spec.r())?;
        Ok(Self {
            problem: problem.clone(),
            spec: *spec,
            dt,
            reservoir_phases: spec
                .energies()
                .iter()
                .map(|e| Complex64::from_polar(1.0, -e * dt))
                .collect(),
            state: CircuitState::new(register),
        })
    }

    pub fn state(&self) -> &CircuitState {
        &self.state
    }

    /// `O_S`: flips the ancilla on every `|S_m, k⟩`.
    fn oracle(&mut self) {
        let r = self.spec.size();
        let (a0, a1) = (
            self.state.ancilla0.amplitudes_mut(),
            self.state.ancilla1.amplitudes_mut(),
        );
        for &s in self.problem.solutions() {
            a0[s * r..(s + 1) * r].swap_with_slice(&mut a1[s * r..(s + 1) * r]);
        }
    }

    /// `U_R`: reservoir phase `e^{−iδt·E_k}` conditioned on the ancilla.
    fn conditional_reservoir(&mut self) {
        let r = self.spec.size();
        for chunk in self.state.ancilla1.amplitudes_mut().chunks_mut(r) {
            for (a, p) in chunk.iter_mut().zip(&self.reservoir_phases) {
                *a *= p;
            }
        }
    }

    fn hadamards(&mut self) {
        hadamard_all(self.state.ancilla0.amplitudes_mut());
        hadamard_all(self.state.ancilla1.amplitudes_mut());
    }

    /// Multi-controlled X on the ancilla, controlled on the all-zero register.
    fn flip_on_zero(&mut self) {
        std::mem::swap(
            &mut self.state.ancilla0.amplitudes_mut()[0],
            &mut self.state.ancilla1.amplitudes_mut()[0],
        );
    }

    /// Phase `e^{−iδt}` on ancilla `|1⟩`; this is `Z` for `δt = π`.
    fn ancilla_phase(&mut self) {
        let phase = Complex64::from_polar(1.0, -self.dt);
        self.state
            .ancilla1
            .amplitudes_mut()
            .iter_mut()
            .for_each(|a| *a *= phase);
    }

    fn check_leak(&self, stage: &str) -> Result<()> {
        let leak = self.state.ancilla_population();
        if leak > ANCILLA_LEAK_LIMIT {
            return Err(Error::Consistency(format!(
                "ancilla population {leak:e} after {stage}"
            )));
        }
        Ok(())
    }

    /// One full iterate; fails if the ancilla is left excited.
    pub fn iterate(&mut self) -> Result<()> {
        self.oracle();
        self.conditional_reservoir();
        self.oracle();
        self.check_leak("oracle uncompute")?;
        self.hadamards();
        self.flip_on_zero();
        self.ancilla_phase();
        self.flip_on_zero();
        self.hadamards();
        self.check_leak("reflection uncompute")
    }

    /// Solution probability with the ancilla traced out.
    pub fn success_probability(&self) -> f64 {
        let r = self.spec.size();
        let sols = self.problem.solutions();
        solution_mass(self.state.ancilla0.amplitudes(), sols, r)
            + solution_mass(self.state.ancilla1.amplitudes(), sols, r)
    }
}

/// Result of a gate-level run with per-iterate ancilla diagnostics.
#[derive(Debug, Clone)]
pub struct GateCircuitRun {
    pub trace: FidelityTrace,
    /// Ancilla `|1⟩` population after each iterate.
    pub ancilla_populations: Vec<f64>,
}

pub fn run_gate_circuit_detailed(
    problem: &SearchProblem,
    spec: &ReservoirSpec,
    dt: f64,
    steps: usize,
) -> Result<GateCircuitRun> {
    let mut circuit = GateCircuit::new(problem, spec, dt)?;
    let mut fidelity = vec![circuit.success_probability()];
    let mut ancilla_populations = Vec::with_capacity(steps);
    for _ in 0..steps {
        circuit.iterate()?;
        ancilla_populations.push(circuit.state().ancilla_population());
        fidelity.push(circuit.success_probability());
    }
    Ok(GateCircuitRun {
        trace: FidelityTrace::new((0..=steps).map(|l| l as f64).collect(), fidelity)?,
        ancilla_populations,
    })
}

/// Gate-level counterpart of [`run_trotter`] (noise-free).
pub fn run_gate_circuit(
    problem: &SearchProblem,
    spec: &ReservoirSpec,
    dt: f64,
    steps: usize,
) -> Result<FidelityTrace> {
    run_gate_circuit_detailed(problem, spec, dt, steps).map(|run| run.trace)
}

/// Mean absolute deviation from the error-free trace with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationTrace {
    pub abscissa: Vec<f64>,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
}

/// `δF(step) = E|F_run(step) − F_ideal(step)|` over `noise.runs()` runs.
pub fn mean_deviation_stats(
    problem: &SearchProblem,
    spec: &ReservoirSpec,
    dt: f64,
    steps: usize,
    noise: &NoiseSpec,
) -> Result<DeviationTrace> {
    let ideal = run_trotter(problem, spec, dt, steps, None)?;
    let per_run: Vec<Vec<f64>> = (0..noise.runs())
        .into_par_iter()
        .map(|run| {
            let mut src = noise.run_source(run);
            let noisy = run_trotter(problem, spec, dt, steps, Some(&mut src))?;
            Ok(noisy
                .fidelity()
                .iter()
                .zip(ideal.fidelity())
                .map(|(a, b)| (a - b).abs())
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut mean = Vec::with_capacity(steps + 1);
    let mut std_error = Vec::with_capacity(steps + 1);
    let mut column = vec![0.0; per_run.len()];
    for step in 0..=steps {
        for (c, run) in column.iter_mut().zip(&per_run) {
            *c = run[step];
        }
        let (m, e) = mean_and_stderr(&column);
        mean.push(m);
        std_error.push(e);
    }
    Ok(DeviationTrace {
        abscissa: ideal.abscissa().to_vec(),
        mean,
        std_error,
    })
}

pub fn mean_deviation_trace(
    problem: &SearchProblem,
    spec: &ReservoirSpec,
    dt: f64,
    steps: usize,
    noise: &NoiseSpec,
) -> Result<FidelityTrace> {
    let stats = mean_deviation_stats(problem, spec, dt, steps, noise)?;
    FidelityTrace::new(stats.abscissa, stats.mean)
}
