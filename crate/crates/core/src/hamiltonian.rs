//! Dense Hamiltonians and exact continuous-time propagation.
//!
//! Propagation goes through a single eigendecomposition `H = V·diag(λ)·V†`,
//! after which `e^{−iHt}ψ₀ = V·diag(e^{−iλt})·V†ψ₀` costs one matrix-vector
//! product per sample time.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{arg_err, Error, Result};
use crate::search::{
    success_probability, FidelityTrace, ReservoirSpec, SearchProblem, StateVector,
};

const HERMITIAN_TOL: f64 = 1e-12;
// QR sweep budget per matrix dimension before reporting non-convergence.
const EIGEN_ITER_PER_DIM: usize = 1000;

/// Ladder energy `E_k`.
pub fn reservoir_energy(spec: &ReservoirSpec, k: usize) -> Result<f64> {
    spec.energy(k)
}

/// Dense Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
}

impl HermitianOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return arg_err("Hamiltonian must be a non-empty square matrix");
        }
        let op = Self { matrix };
        let asym = op.hermiticity_residual();
        if asym >= HERMITIAN_TOL {
            return arg_err(format!("matrix is not Hermitian (residual {asym:e})"));
        }
        Ok(op)
    }

    /// Real symmetric matrix from row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return arg_err("entry count does not match dim²");
        }
        Self::from_matrix(DMatrix::from_fn(dim, dim, |i, j| {
            Complex64::new(entries[i * dim + j], 0.0)
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// `max |H_ij − conj(H_ji)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let m = &self.matrix;
        let n = m.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        check_dim(self.dim(), psi)?;
        let v = DVector::from_column_slice(psi.amplitudes());
        StateVector::from_amplitudes((&self.matrix * v).as_slice().to_vec())
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let h_psi = self.apply(psi)?;
        Ok(psi.inner(&h_psi)?.re)
    }
}

fn check_dim(dim: usize, psi: &StateVector) -> Result<()> {
    if psi.dim() != dim {
        return arg_err(format!(
            "state dimension {} does not match operator dimension {dim}",
            psi.dim()
        ));
    }
    Ok(())
}

/// `H_G = |+^n⟩⟨+^n| + Σ_m |S_m⟩⟨S_m|`.
pub fn build_standard_grover(problem: &SearchProblem) -> HermitianOperator {
    build_dissipative(problem, &ReservoirSpec::trivial())
}

/// `H_DG = |+^n,+^r⟩⟨+^n,+^r| + Σ_m Σ_k E_k |S_m,k⟩⟨S_m,k|`.
pub fn build_dissipative(problem: &SearchProblem, spec: &ReservoirSpec) -> HermitianOperator {
    let r = spec.size();
    let dim = problem.size() * r;
    let uniform = Complex64::new(1.0 / dim as f64, 0.0);
    let mut matrix = DMatrix::from_element(dim, dim, uniform);
    let energies = spec.energies();
    for &s in problem.solutions() {
        for (k, e) in energies.iter().enumerate() {
            matrix[(s * r + k, s * r + k)] += e;
        }
    }
    HermitianOperator { matrix }
}

/// Finite Bixon-Jortner ladder: one source level coupled with strength `beta`
/// to `ladder_size + 1` levels `ε_a + mΔ`, `m = −R/2..=R/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BjLadderSpec {
    ladder_size: usize,
    beta: f64,
    delta: f64,
    eps_a: f64,
}

impl BjLadderSpec {
    pub fn new(ladder_size: usize, beta: f64, delta: f64, eps_a: f64) -> Result<Self> {
        if ladder_size == 0 || !ladder_size.is_multiple_of(2) {
            return arg_err(format!(
                "ladder size must be even and positive, got {ladder_size}"
            ));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return arg_err(format!("level spacing must be positive, got {delta}"));
        }
        if !beta.is_finite() || !eps_a.is_finite() {
            return arg_err("coupling and source energy must be finite");
        }
        Ok(Self {
            ladder_size,
            beta,
            delta,
            eps_a,
        })
    }

    pub fn ladder_size(&self) -> usize {
        self.ladder_size
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eps_a(&self) -> f64 {
        self.eps_a
    }

    /// Number of basis states: source plus `R + 1` ladder levels.
    pub fn dim(&self) -> usize {
        self.ladder_size + 2
    }
}

/// Source at index 0, ladder level `m` at index `m + R/2 + 1`.
pub fn build_finite_bj(spec: &BjLadderSpec) -> HermitianOperator {
    let dim = spec.dim();
    let half = (spec.ladder_size / 2) as f64;
    let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    matrix[(0, 0)] = Complex64::new(spec.eps_a, 0.0);
    for i in 1..dim {
        let m = (i - 1) as f64 - half;
        matrix[(i, i)] = Complex64::new(spec.eps_a + m * spec.delta, 0.0);
        matrix[(0, i)] = Complex64::new(spec.beta, 0.0);
        matrix[(i, 0)] = Complex64::new(spec.beta, 0.0);
    }
    HermitianOperator { matrix }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

pub fn diagonalize(h: &HermitianOperator) -> Result<Propagator> {
    let eig = nalgebra::SymmetricEigen::try_new(
        h.matrix.clone(),
        f64::EPSILON,
        EIGEN_ITER_PER_DIM * h.dim(),
    )
    .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..h.dim()).collect();
    if eig.eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(h.dim(), h.dim(), |row, col| {
        eig.eigenvectors[(row, order[col])]
    });
    Ok(Propagator {
        eigenvalues,
        eigenvectors,
    })
}

/// `ψ₀` expressed in the eigenbasis, ready to be propagated to any time.
#[derive(Debug, Clone)]
pub struct SpectralState<'a> {
    prop: &'a Propagator,
    coeffs: Vec<Complex64>,
}

impl SpectralState<'_> {
    pub fn at(&self, t: f64) -> Result<StateVector> {
        if !(t.is_finite() && t >= 0.0) {
            return arg_err(format!(
                "evolution time must be finite and nonnegative, got {t}"
            ));
        }
        let phased = DVector::from_iterator(
            self.coeffs.len(),
            self.prop
                .eigenvalues
                .iter()
                .zip(&self.coeffs)
                .map(|(&l, &c)| c * Complex64::from_polar(1.0, -l * t)),
        );
        StateVector::from_amplitudes((&self.prop.eigenvectors * phased).as_slice().to_vec())
    }
}

impl Propagator {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are eigenvectors.
    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn project<'a>(&'a self, psi0: &StateVector) -> Result<SpectralState<'a>> {
        check_dim(self.dim(), psi0)?;
        let v = DVector::from_column_slice(psi0.amplitudes());
        let coeffs = self.eigenvectors.ad_mul(&v);
        Ok(SpectralState {
            prop: self,
            coeffs: coeffs.as_slice().to_vec(),
        })
    }

    /// `‖V·diag(λ)·V† − H‖_max`.
    pub fn reconstruction_residual(&self, h: &HermitianOperator) -> f64 {
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)),
        ));
        let rebuilt = &self.eigenvectors * diag * self.eigenvectors.adjoint();
        (rebuilt - h.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `‖V†V − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.eigenvectors.ad_mul(&self.eigenvectors);
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        (gram - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `e^{−iHt}ψ₀`.
pub fn evolve(prop: &Propagator, psi0: &StateVector, t: f64) -> Result<StateVector> {
    prop.project(psi0)?.at(t)
}

/// Success probability of `e^{−iHt}ψ₀` at each requested time.
pub fn trace_continuous(
    h: &HermitianOperator,
    psi0: &StateVector,
    times: &[f64],
    problem: &SearchProblem,
    spec: &ReservoirSpec,
) -> Result<FidelityTrace> {
    let prop = diagonalize(h)?;
    trace_with_propagator(&prop, psi0, times, problem, spec)
}

/// As [`trace_continuous`] but reusing an existing decomposition.
pub fn trace_with_propagator(
    prop: &Propagator,
    psi0: &StateVector,
    times: &[f64],
    problem: &SearchProblem,
    spec: &ReservoirSpec,
) -> Result<FidelityTrace> {
    if times
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return arg_err("times must be strictly increasing");
    }
    let spectral = prop.project(psi0)?;
    let fidelity = times
        .iter()
        .map(|&t| success_probability(&spectral.at(t)?, problem, spec))
        .collect::<Result<Vec<_>>>()?;
    FidelityTrace::new(times.to_vec(), fidelity)
}
