use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use qcloseness::oracles::{block_encoding, build_grover_iterate, grover_iterate, CountingOracle};
use qcloseness::phase_est::{
    circular_distance, outcome_distribution, register_state, run_phase_estimation, PhaseEstimateConfig, SIZING_CONSTANT,
};
use qcloseness::qlin::{haar_state, haar_unitary, seeded_rng, StateVector, UnitaryOp};
use rand::Rng;

/// The textbook circuit as dense matrices on `system (x) C`, C low-order.
fn dense_phase_estimation(q: &UnitaryOp, input: &StateVector, t: usize) -> DMatrix<C64> {
    let n = 1usize << t;
    let d = q.dim();
    let total = d * n;
    let mut state = DMatrix::<C64>::zeros(total, 1);
    // Hadamards on C
    for i in 0..d {
        for x in 0..n {
            state[(i * n + x, 0)] = input.amplitude(i) / (n as f64).sqrt();
        }
    }
    // bit j of x controls Q^(2^j)
    for j in 0..t {
        let power = q.power(1 << j);
        let mut ladder = DMatrix::<C64>::zeros(total, total);
        for x in 0..n {
            for r in 0..d {
                for c in 0..d {
                    let v = if (x >> j) & 1 == 1 {
                        power.matrix()[(r, c)]
                    } else if r == c {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    ladder[(r * n + x, c * n + x)] = v;
                }
            }
        }
        state = ladder * state;
    }
    // inverse QFT on C
    let f = DMatrix::from_fn(n, n, |y, x| C64::from_polar(1.0 / (n as f64).sqrt(), -TAU * (x * y) as f64 / n as f64));
    let full = DMatrix::<C64>::identity(d, d).kronecker(&f);
    full * state
}

fn max_gap(lib: &StateVector, dense: &DMatrix<C64>) -> f64 {
    (0..lib.dim()).map(|i| (lib.amplitude(i) - dense[(i, 0)]).norm()).fold(0.0, f64::max)
}

#[test]
fn matches_dense_circuit_on_grover_iterates() {
    for seed in 0..6 {
        let mut rng = seeded_rng(seed);
        let p: f64 = rng.random();
        let (a, b) = (haar_state(1, &mut rng), haar_state(1, &mut rng));
        let u = block_encoding(p, &a, &b).unwrap();
        let q = grover_iterate(&u).unwrap();
        let input = u.first_column();
        let cfg = PhaseEstimateConfig::new(0.25, 1.0 / 3.0).unwrap();
        assert_eq!(cfg.ancilla_qubits(), 4);
        let lib = register_state(&CountingOracle::new(q.clone()), &input, &cfg).unwrap();
        let dense = dense_phase_estimation(&q, &input, 4);
        assert!(max_gap(&lib, &dense) < 1e-10, "seed {seed}: {}", max_gap(&lib, &dense));
    }
}

#[test]
fn matches_dense_circuit_on_generic_unitaries() {
    for seed in 0..4 {
        let mut rng = seeded_rng(100 + seed);
        let q = haar_unitary(2, &mut rng);
        let input = haar_state(2, &mut rng);
        let cfg = PhaseEstimateConfig::new(0.125, 1.0 / 3.0).unwrap();
        assert_eq!(cfg.ancilla_qubits(), 5);
        let lib = register_state(&CountingOracle::new(q.clone()), &input, &cfg).unwrap();
        let dense = dense_phase_estimation(&q, &input, 5);
        assert!(max_gap(&lib, &dense) < 1e-10, "seed {seed}: {}", max_gap(&lib, &dense));
    }
}

#[test]
fn accuracy_guarantee_on_random_eigenphases() {
    let configs = [(0.1, 1.0 / 3.0), (0.05, 0.1), (0.02, 0.25), (0.01, 0.05)];
    let mut rng = seeded_rng(7);
    for (delta, eps_fail) in configs {
        let cfg = PhaseEstimateConfig::new(delta, eps_fail).unwrap();
        let n = 1u64 << cfg.ancilla_qubits();
        for _ in 0..20 {
            let lambda: f64 = rng.random();
            let q = CountingOracle::new(UnitaryOp::phase(lambda));
            let d = outcome_distribution(&q, &StateVector::basis(1, 1).unwrap(), &cfg).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-9);
            let good = d.mass_where(|y| circular_distance(y as f64 / n as f64, lambda) < delta);
            assert!(good >= 1.0 - eps_fail, "lambda {lambda}, delta {delta}: {good}");
        }
    }
}

#[test]
fn two_nearest_outcomes_carry_at_least_8_over_pi_squared() {
    let cfg = PhaseEstimateConfig::new(1.0 / 16.0, 1.0 / 3.0).unwrap();
    assert_eq!(cfg.ancilla_qubits(), 6);
    for lambda in [1.0 / 7f64.sqrt(), PI - 3.0, 2f64.sqrt() - 1.0, 0.123456789, 0.999] {
        let d = outcome_distribution(&CountingOracle::new(UnitaryOp::phase(lambda)), &StateVector::basis(1, 1).unwrap(), &cfg)
            .unwrap();
        let near = d.mass_where(|y| circular_distance(y as f64 / 64.0, lambda) <= 1.0 / 64.0);
        assert!(near >= 8.0 / (PI * PI), "lambda {lambda}: {near}");
    }
}

#[test]
fn representable_phases_are_point_masses() {
    let cfg = PhaseEstimateConfig::new(0.1, 1.0 / 3.0).unwrap();
    let t = cfg.ancilla_qubits();
    for k in [0u64, 1, 17, 32, 63] {
        let lambda = k as f64 / (1u64 << t) as f64;
        let d = outcome_distribution(&CountingOracle::new(UnitaryOp::phase(lambda)), &StateVector::basis(1, 1).unwrap(), &cfg)
            .unwrap();
        assert!((d.get(k as usize) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn superposition_gives_the_weighted_mixture() {
    let mut rng = seeded_rng(21);
    let cfg = PhaseEstimateConfig::new(0.05, 0.2).unwrap();
    for _ in 0..10 {
        let (l1, l2): (f64, f64) = (rng.random(), rng.random());
        let v = haar_unitary(1, &mut rng);
        let diag = UnitaryOp::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::from_polar(1.0, TAU * l1),
            C64::from_polar(1.0, TAU * l2),
        ])))
        .unwrap();
        let u = v.mul(&diag).unwrap().mul(&v.adjoint()).unwrap();
        let e1 = v.apply(&StateVector::basis(1, 0).unwrap()).unwrap();
        let e2 = v.apply(&StateVector::basis(1, 1).unwrap()).unwrap();
        let mix = haar_state(1, &mut rng);
        let (a, b) = (e1.inner(&mix).unwrap().norm_sqr(), e2.inner(&mix).unwrap().norm_sqr());
        let oracle = CountingOracle::new(u);
        let d = outcome_distribution(&oracle, &mix, &cfg).unwrap();
        let d1 = outcome_distribution(&oracle, &e1, &cfg).unwrap();
        let d2 = outcome_distribution(&oracle, &e2, &cfg).unwrap();
        for y in 0..d.len() {
            assert!((d.get(y) - (a * d1.get(y) + b * d2.get(y))).abs() < 1e-9);
        }
    }
}

#[test]
fn grover_eigenvector_at_half_gives_quarter_turn() {
    let mut rng = seeded_rng(5);
    let (a, b) = (haar_state(2, &mut rng), haar_state(2, &mut rng));
    let u = block_encoding(0.5, &a, &b).unwrap();
    let q = grover_iterate(&u).unwrap();
    // (Q + i) removes the e^{-i pi/2} component of U|00>
    let start = u.first_column();
    let qs = q.apply(&start).unwrap();
    let plus: Vec<C64> = (0..start.dim()).map(|k| qs.amplitude(k) + C64::i() * start.amplitude(k)).collect();
    let plus = StateVector::normalized(plus).unwrap();
    let image = q.apply(&plus).unwrap();
    assert!((plus.inner(&image).unwrap() - C64::i()).norm() < 1e-12);
    for (delta, eps_fail) in [(0.25, 1.0 / 3.0), (0.05, 0.1)] {
        let cfg = PhaseEstimateConfig::new(delta, eps_fail).unwrap();
        let t = cfg.ancilla_qubits();
        let d = outcome_distribution(&CountingOracle::new(q.clone()), &plus, &cfg).unwrap();
        assert!((d.get(1 << (t - 2)) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn grover_runs_charge_two_queries_per_controlled_application() {
    let mut rng = seeded_rng(9);
    let (a, b) = (haar_state(1, &mut rng), haar_state(1, &mut rng));
    let mut base = CountingOracle::new(block_encoding(0.3, &a, &b).unwrap());
    let start = base.inner().first_column();
    for (delta, eps_fail) in [(0.2, 1.0 / 3.0), (0.05, 1.0 / 3.0), (0.01, 0.1), (0.003, 0.3)] {
        let cfg = PhaseEstimateConfig::new(delta, eps_fail).unwrap();
        let before = base.query_count();
        {
            let mut q = build_grover_iterate(&mut base).unwrap();
            run_phase_estimation(&mut q, &start, &cfg, 1).unwrap();
        }
        let apps = cfg.controlled_applications();
        assert_eq!(base.query_count() - before, 2 * apps);
        assert!(apps as f64 <= SIZING_CONSTANT / (eps_fail * delta));
    }
}

#[test]
fn sampling_is_seeded() {
    let cfg = PhaseEstimateConfig::new(0.05, 1.0 / 3.0).unwrap();
    let mut q = CountingOracle::new(UnitaryOp::phase(0.3183));
    let s = StateVector::basis(1, 1).unwrap();
    let a: Vec<_> = (0..20).map(|seed| run_phase_estimation(&mut q, &s, &cfg, seed).unwrap()).collect();
    let b: Vec<_> = (0..20).map(|seed| run_phase_estimation(&mut q, &s, &cfg, seed).unwrap()).collect();
    assert_eq!(a, b);
    for o in &a {
        assert_eq!(o.phi_tilde, o.raw_index as f64 / (1u64 << o.ancilla_qubits) as f64);
    }
}
