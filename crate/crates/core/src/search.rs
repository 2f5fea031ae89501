//! Search instances, basis layout and success probability.
//!
//! The joint register is `n` system qubits followed by `r` reservoir qubits.
//! Basis state `|s⟩⊗|k⟩` lives at index `s·R + k` (system-major), so the
//! reservoir levels attached to one system state form a contiguous block.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{arg_err, Error, Result};

/// Largest register (system + reservoir) this crate will allocate.
pub const MAX_QUBITS: u32 = 24;

/// A search instance: `n` qubits and the marked basis states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchProblem {
    n: u32,
    solutions: Vec<usize>,
}

impl SearchProblem {
    /// Builds a problem from an explicit solution list. The list is sorted;
    /// duplicates, out-of-range entries, `M = 0` and `M = N` are rejected.
    pub fn new(n: u32, solutions: impl Into<Vec<usize>>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return arg_err(format!("qubit count n = {n} outside 1..={MAX_QUBITS}"));
        }
        let size = 1usize << n;
        let mut solutions = solutions.into();
        solutions.sort_unstable();
        if solutions.windows(2).any(|w| w[0] == w[1]) {
            return arg_err("solution indices must be distinct");
        }
        if let Some(&s) = solutions.iter().find(|&&s| s >= size) {
            return arg_err(format!("solution index {s} out of range for N = {size}"));
        }
        if solutions.is_empty() || solutions.len() >= size {
            return arg_err(format!(
                "solution count M = {} must satisfy 1 <= M < N = {size}",
                solutions.len()
            ));
        }
        Ok(Self { n, solutions })
    }

    /// Problem with the solution set `{0, .., m-1}`.
    pub fn with_first(n: u32, m: usize) -> Result<Self> {
        Self::new(n, (0..m).collect::<Vec<_>>())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Search-space size `N = 2^n`.
    pub fn size(&self) -> usize {
        1 << self.n
    }

    /// Number of marked states `M`.
    pub fn num_solutions(&self) -> usize {
        self.solutions.len()
    }

    pub fn solutions(&self) -> &[usize] {
        &self.solutions
    }

    pub fn is_solution(&self, s: usize) -> bool {
        self.solutions.binary_search(&s).is_ok()
    }

    /// `M/N`, the success probability of the uniform state.
    pub fn solution_fraction(&self) -> f64 {
        self.num_solutions() as f64 / self.size() as f64
    }
}

/// Ancilla reservoir: `r` qubits with an evenly spaced energy ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirSpec {
    r: u32,
    delta: f64,
}

impl ReservoirSpec {
    pub fn new(r: u32, delta: f64) -> Result<Self> {
        if r > MAX_QUBITS {
            return arg_err(format!("reservoir qubit count r = {r} too large"));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return arg_err(format!("level spacing must be positive, got {delta}"));
        }
        Ok(Self { r, delta })
    }

    /// The degenerate single-level reservoir; reduces everything to standard Grover.
    pub fn trivial() -> Self {
        Self { r: 0, delta: 1.0 }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Reservoir size `R = 2^r`.
    pub fn size(&self) -> usize {
        1 << self.r
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Ladder energy `E_k = 1 + Δ(k − R/2 + 1/2)`.
    pub fn energy(&self, k: usize) -> Result<f64> {
        let size = self.size();
        if k >= size {
            return arg_err(format!("reservoir level {k} out of range for R = {size}"));
        }
        Ok(self.energy_unchecked(k))
    }

    pub(crate) fn energy_unchecked(&self, k: usize) -> f64 {
        1.0 + self.delta * (k as f64 - self.size() as f64 / 2.0 + 0.5)
    }

    /// All ladder energies in level order.
    pub fn energies(&self) -> Vec<f64> {
        (0..self.size()).map(|k| self.energy_unchecked(k)).collect()
    }
}

/// Joint index of `|s⟩⊗|k⟩`.
pub fn basis_index(s: usize, k: usize, spec: &ReservoirSpec) -> Result<usize> {
    let r = spec.size();
    if k >= r {
        return arg_err(format!("reservoir index {k} out of range for R = {r}"));
    }
    Ok(s * r + k)
}

/// Inverse of [`basis_index`].
pub fn split_index(index: usize, spec: &ReservoirSpec) -> (usize, usize) {
    let r = spec.size();
    (index / r, index % r)
}

/// Dense complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return arg_err("state vector must be non-empty");
        }
        Ok(Self { amps })
    }

    /// Computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return arg_err(format!("basis index {index} out of range for dim {dim}"));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return arg_err(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest elementwise distance `max |a_i − b_i|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return arg_err(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Uniform superposition `|+^n, +^r⟩`.
pub fn uniform_state(n: u32, r: u32) -> Result<StateVector> {
    if n == 0 || n + r > MAX_QUBITS {
        return arg_err(format!("register n = {n}, r = {r} not supported"));
    }
    let dim = 1usize << (n + r);
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    Ok(StateVector {
        amps: vec![amp; dim],
    })
}

/// Total probability on `|S_m⟩⊗|k⟩` summed over solutions and reservoir levels.
pub fn success_probability(
    state: &StateVector,
    problem: &SearchProblem,
    spec: &ReservoirSpec,
) -> Result<f64> {
    let r = spec.size();
    let dim = problem.size() * r;
    if state.dim() != dim {
        return Err(Error::Argument(format!(
            "state has dim {} but problem/reservoir need {dim}",
            state.dim()
        )));
    }
    Ok(solution_mass(state.amplitudes(), problem.solutions(), r))
}

pub(crate) fn solution_mass(amps: &[Complex64], solutions: &[usize], r: usize) -> f64 {
    solutions
        .iter()
        .map(|&s| {
            amps[s * r..(s + 1) * r]
                .iter()
                .map(|a| a.norm_sqr())
                .sum::<f64>()
        })
        .sum()
}

/// Fourier-rotated solution state `|S̃_p⟩⊗|k⟩`.
pub fn fourier_solution_state(
    problem: &SearchProblem,
    p: usize,
    spec: &ReservoirSpec,
    k: usize,
) -> Result<StateVector> {
    let m = problem.num_solutions();
    if p >= m {
        return arg_err(format!("Fourier index p = {p} out of range for M = {m}"));
    }
    let dim = problem.size() * spec.size();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let scale = 1.0 / (m as f64).sqrt();
    for (idx, &s) in problem.solutions().iter().enumerate() {
        let phase = 2.0 * PI * ((p * idx) % m) as f64 / m as f64;
        amps[basis_index(s, k, spec)?] = Complex64::from_polar(scale, phase);
    }
    Ok(StateVector { amps })
}

/// Sampled success probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityTrace {
    abscissa: Vec<f64>,
    fidelity: Vec<f64>,
}

const FIDELITY_SLACK: f64 = 1e-12;

impl FidelityTrace {
    /// Checks ordering and the `[0, 1]` range; values within the rounding slack
    /// are clamped.
    pub fn new(abscissa: Vec<f64>, fidelity: Vec<f64>) -> Result<Self> {
        if abscissa.len() != fidelity.len() {
            return arg_err("abscissa and fidelity lengths differ");
        }
        if abscissa
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return arg_err("abscissa must be strictly increasing");
        }
        let mut fidelity = fidelity;
        for f in fidelity.iter_mut() {
            if !(-FIDELITY_SLACK..=1.0 + FIDELITY_SLACK).contains(f) {
                return Err(Error::Numerical(format!("fidelity {f} outside [0, 1]")));
            }
            *f = f.clamp(0.0, 1.0);
        }
        Ok(Self { abscissa, fidelity })
    }

    pub fn abscissa(&self) -> &[f64] {
        &self.abscissa
    }

    pub fn fidelity(&self) -> &[f64] {
        &self.fidelity
    }

    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.abscissa
            .iter()
            .copied()
            .zip(self.fidelity.iter().copied())
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        self.iter().last()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(r: u32) -> ReservoirSpec {
        ReservoirSpec::new(r, 0.1).unwrap()
    }

    #[test]
    fn basis_index_examples() {
        assert_eq!(basis_index(0, 0, &spec(3)).unwrap(), 0);
        assert_eq!(basis_index(1, 0, &spec(3)).unwrap(), 8);
        assert_eq!(basis_index(3, 5, &spec(4)).unwrap(), 53);
        assert!(matches!(
            basis_index(0, 8, &spec(3)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn uniform_state_examples() {
        let s = uniform_state(1, 0).unwrap();
        for a in s.amplitudes() {
            assert!((a.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
        let s = uniform_state(3, 3).unwrap();
        assert_eq!(s.dim(), 64);
        assert!(s.amplitudes().iter().all(|a| (a.re - 0.125).abs() < 1e-15));
        let s = uniform_state(2, 1).unwrap();
        let expect = 1.0 / (2.0 * 2f64.sqrt());
        assert!(s.amplitudes().iter().all(|a| (a.re - expect).abs() < 1e-15));
    }

    #[test]
    fn success_probability_examples() {
        let p1 = SearchProblem::with_first(3, 1).unwrap();
        let f = success_probability(
            &uniform_state(3, 0).unwrap(),
            &p1,
            &ReservoirSpec::trivial(),
        )
        .unwrap();
        assert!((f - 0.125).abs() < 1e-15);

        let sp = spec(3);
        let idx = basis_index(0, 2, &sp).unwrap();
        let state = StateVector::basis(64, idx).unwrap();
        assert_eq!(success_probability(&state, &p1, &sp).unwrap(), 1.0);

        let p2 = SearchProblem::with_first(3, 2).unwrap();
        let f = success_probability(&uniform_state(3, 3).unwrap(), &p2, &sp).unwrap();
        assert!((f - 0.25).abs() < 1e-15);

        assert!(success_probability(&uniform_state(3, 2).unwrap(), &p2, &sp).is_err());
    }

    #[test]
    fn fourier_examples() {
        let p1 = SearchProblem::new(2, vec![2]).unwrap();
        let sp = ReservoirSpec::trivial();
        let s = fourier_solution_state(&p1, 0, &sp, 0).unwrap();
        assert_eq!(s, StateVector::basis(4, 2).unwrap());

        let p2 = SearchProblem::new(3, vec![1, 5]).unwrap();
        let sp = spec(1);
        let s1 = fourier_solution_state(&p2, 1, &sp, 0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s1.amplitudes()[2] - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((s1.amplitudes()[10] - Complex64::new(-h, 0.0)).norm() < 1e-15);
        let s0 = fourier_solution_state(&p2, 0, &sp, 0).unwrap();
        assert!(s0.inner(&s1).unwrap().norm() < 1e-15);

        assert!(fourier_solution_state(&p2, 2, &sp, 0).is_err());
        assert!(fourier_solution_state(&p2, 0, &sp, 2).is_err());
    }

    #[test]
    fn problem_validation() {
        assert!(SearchProblem::new(3, vec![]).is_err());
        assert!(SearchProblem::new(1, vec![0, 1]).is_err());
        assert!(SearchProblem::new(3, vec![2, 2]).is_err());
        assert!(SearchProblem::new(3, vec![8]).is_err());
        assert!(SearchProblem::new(0, vec![0]).is_err());
        assert_eq!(
            SearchProblem::new(3, vec![5, 1]).unwrap().solutions(),
            &[1, 5]
        );
        assert!(ReservoirSpec::new(2, 0.0).is_err());
        assert!(ReservoirSpec::new(2, f64::NAN).is_err());
    }

    #[test]
    fn trace_validation() {
        assert!(FidelityTrace::new(vec![0.0, 0.0], vec![0.1, 0.2]).is_err());
        assert!(FidelityTrace::new(vec![0.0], vec![1.1]).is_err());
        let t = FidelityTrace::new(vec![0.0, 1.0], vec![-1e-14, 1.0 + 1e-14]).unwrap();
        assert_eq!(t.fidelity(), &[0.0, 1.0]);
    }

    proptest! {
        #[test]
        fn uniform_success_is_m_over_n(n in 1u32..7, r in 0u32..4, m_seed in 0usize..1000) {
            let size = 1usize << n;
            let m = 1 + m_seed % (size - 1);
            let problem = SearchProblem::with_first(n, m).unwrap();
            let sp = ReservoirSpec::new(r, 0.3).unwrap();
            let f = success_probability(&uniform_state(n, r).unwrap(), &problem, &sp).unwrap();
            prop_assert!((f - m as f64 / size as f64).abs() < 1e-12);
        }

        #[test]
        fn basis_index_round_trips(r in 0u32..6, idx in 0usize..4096) {
            let sp = ReservoirSpec::new(r, 1.0).unwrap();
            let (s, k) = split_index(idx, &sp);
            prop_assert_eq!(basis_index(s, k, &sp).unwrap(), idx);
        }

        #[test]
        fn fourier_states_orthonormal(n in 2u32..6, m_seed in 0usize..100, r in 0u32..3) {
            let size = 1usize << n;
            let m = 1 + m_seed % (size - 1).min(6);
            let problem = SearchProblem::with_first(n, m).unwrap();
            let sp = ReservoirSpec::new(r, 0.5).unwrap();
            let k = sp.size() - 1;
            let states: Vec<_> = (0..m)
                .map(|p| fourier_solution_state(&problem, p, &sp, k).unwrap())
                .collect();
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((a.inner(b).unwrap() - Complex64::new(expect, 0.0)).norm() < 1e-12);
                }
            }
        }

        #[test]
        fn success_probability_in_unit_interval(raw in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16)) {
            let mut amps: Vec<Complex64> = raw.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-6);
            amps.iter_mut().for_each(|a| *a /= norm);
            let state = StateVector::from_amplitudes(amps).unwrap();
            let problem = SearchProblem::new(3, vec![1, 6]).unwrap();
            let f = success_probability(&state, &problem, &ReservoirSpec::new(1, 0.2).unwrap()).unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        }
    }
}
