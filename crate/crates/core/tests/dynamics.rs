use dissgrover::hamiltonian::{
    build_dissipative, build_standard_grover, diagonalize, evolve, trace_continuous,
    HermitianOperator,
};
use dissgrover::search::{
    fourier_solution_state, success_probability, uniform_state, ReservoirSpec, SearchProblem,
    StateVector,
};
use dissgrover::Complex64;
use std::f64::consts::PI;

/// Classic RK4 on `dψ/dt = −iHψ` with a fixed step.
fn rk4(h: &HermitianOperator, psi0: &StateVector, t: f64, step: f64) -> StateVector {
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |v: &[Complex64]| -> Vec<Complex64> {
        let sv = StateVector::from_amplitudes(v.to_vec()).unwrap();
        h.apply(&sv)
            .unwrap()
            .amplitudes()
            .iter()
            .map(|a| minus_i * a)
            .collect()
    };
    let axpy = |y: &[Complex64], k: &[Complex64], c: f64| -> Vec<Complex64> {
        y.iter().zip(k).map(|(a, b)| a + b * c).collect()
    };
    let steps = (t / step).round() as usize;
    let dt = t / steps as f64;
    let mut y = psi0.amplitudes().to_vec();
    for _ in 0..steps {
        let k1 = rhs(&y);
        let k2 = rhs(&axpy(&y, &k1, dt / 2.0));
        let k3 = rhs(&axpy(&y, &k2, dt / 2.0));
        let k4 = rhs(&axpy(&y, &k3, dt));
        for i in 0..y.len() {
            y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    StateVector::from_amplitudes(y).unwrap()
}

fn setup(n: u32, solutions: &[usize], r: u32, delta: f64) -> (SearchProblem, ReservoirSpec) {
    (
        SearchProblem::new(n, solutions.to_vec()).unwrap(),
        ReservoirSpec::new(r, delta).unwrap(),
    )
}

#[test]
fn eigen_propagation_matches_rk4_oracle() {
    for (n, sols, r, delta) in [
        (3, vec![5], 3, 0.1),
        (4, vec![0, 9], 2, 0.4),
        (2, vec![1], 4, 1.3),
        (6, vec![17], 0, 1.0),
    ] {
        let (p, spec) = setup(n, &sols, r, delta);
        let h = build_dissipative(&p, &spec);
        assert!(h.dim() <= 64);
        let prop = diagonalize(&h).unwrap();
        let psi0 = uniform_state(n, r).unwrap();
        for t in [0.7, 3.0, 6.5] {
            let exact = evolve(&prop, &psi0, t).unwrap();
            let oracle = rk4(&h, &psi0, t, 1e-3);
            let dev = exact.max_abs_diff(&oracle).unwrap();
            assert!(dev < 1e-6, "n={n} r={r} t={t}: deviation {dev}");
        }
    }
}

#[test]
fn norm_and_energy_conserved() {
    let (p, spec) = setup(3, &[2], 4, 0.1);
    let h = build_dissipative(&p, &spec);
    let prop = diagonalize(&h).unwrap();
    let psi0 = uniform_state(3, 4).unwrap();
    let e0 = h.expectation(&psi0).unwrap();
    let spectral = prop.project(&psi0).unwrap();
    for i in 0..200 {
        let psi = spectral.at(i as f64 * 0.9).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        assert!((h.expectation(&psi).unwrap() - e0).abs() < 1e-9);
    }
}

#[test]
fn builders_are_hermitian() {
    for (n, m, r, delta) in [(3, 1, 4, 0.1), (5, 3, 2, 0.7), (4, 15, 1, 2.0)] {
        let p = SearchProblem::with_first(n, m).unwrap();
        let spec = ReservoirSpec::new(r, delta).unwrap();
        assert!(build_dissipative(&p, &spec).hermiticity_residual() < 1e-12);
        assert!(build_standard_grover(&p).hermiticity_residual() < 1e-12);
    }
}

#[test]
fn fourier_blocks_stay_empty() {
    let (p, spec) = setup(4, &[1, 6, 11], 2, 0.25);
    let h = build_dissipative(&p, &spec);
    let prop = diagonalize(&h).unwrap();
    let spectral = prop.project(&uniform_state(4, 2).unwrap()).unwrap();
    let rotated: Vec<StateVector> = (1..3)
        .flat_map(|q| (0..spec.size()).map(move |k| (q, k)))
        .map(|(q, k)| fourier_solution_state(&p, q, &spec, k).unwrap())
        .collect();
    for i in 0..100 {
        let psi = spectral.at(i as f64 * 1.7).unwrap();
        for v in &rotated {
            assert!(v.inner(&psi).unwrap().norm() < 1e-9);
        }
    }
}

#[test]
fn trivial_reservoir_reduces_to_standard_grover() {
    for (n, m) in [(3, 1), (4, 2), (6, 3)] {
        let p = SearchProblem::with_first(n, m).unwrap();
        let spec = ReservoirSpec::new(0, 0.37).unwrap();
        let times: Vec<f64> = (0..300).map(|i| i as f64 * 0.1).collect();
        let psi0 = uniform_state(n, 0).unwrap();
        let diss =
            trace_continuous(&build_dissipative(&p, &spec), &psi0, &times, &p, &spec).unwrap();
        let std = trace_continuous(
            &build_standard_grover(&p),
            &psi0,
            &times,
            &p,
            &ReservoirSpec::trivial(),
        )
        .unwrap();
        for (a, b) in diss.fidelity().iter().zip(std.fidelity()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn standard_grover_reaches_unity_with_period_pi_sqrt_n() {
    for n in 3..=6u32 {
        let p = SearchProblem::with_first(n, 1).unwrap();
        let size = p.size() as f64;
        let h = build_standard_grover(&p);
        let prop = diagonalize(&h).unwrap();
        let spectral = prop.project(&uniform_state(n, 0).unwrap()).unwrap();
        let spec = ReservoirSpec::trivial();
        let tmax = PI / 2.0 * size.sqrt();
        let f = success_probability(&spectral.at(tmax).unwrap(), &p, &spec).unwrap();
        assert!(f >= 0.999, "n={n}: F(tmax) = {f}");

        // period = spacing of successive minima
        let period = PI * size.sqrt();
        let samples = 4000;
        let dt = 1.5 * period / samples as f64;
        let fs: Vec<f64> = (0..=samples)
            .map(|i| success_probability(&spectral.at(i as f64 * dt).unwrap(), &p, &spec).unwrap())
            .collect();
        let start = samples / 3;
        let (imin, _) = fs[start..]
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let measured = (start + imin) as f64 * dt;
        assert!(
            (measured / period - 1.0).abs() < 0.02,
            "n={n}: {measured} vs {period}"
        );
    }
}
