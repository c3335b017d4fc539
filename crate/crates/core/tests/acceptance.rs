//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its own PASS/FAIL line; exits non-zero if any fails.
//!
//! Run alone with `cargo test --test acceptance`.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use proptest::test_runner::{Config, TestRunner};
use qcloseness::amp_est::{sqrt_stability_check, squaring_reduction_holds};
use qcloseness::closeness::{exact_closeness, swap_test_circuit, swap_test_distribution, swap_test_shot};
use qcloseness::experiments::{
    calibrate_sqrt_amp_est, default_f2_rounds, fit_scaling, run_distinguish, sweep, Distinguisher, Method,
    PairFamily, DEFAULT_EPS_GRID,
};
use qcloseness::oracles::{build_w, build_w_prime, grover_iterate, PreparedPair};
use qcloseness::qlin::{derive_seed, haar_state, invariant_subspace, seeded_rng, StateVector, UnitaryOp};

const SEED: u64 = 20_240_611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn haar_pair(k: usize, seed: u64) -> (StateVector, StateVector) {
    let mut rng = seeded_rng(seed);
    (haar_state(k, &mut rng), haar_state(k, &mut rng))
}

/// `<a|b>` summed directly from the amplitudes.
fn overlap(a: &StateVector, b: &StateVector) -> C64 {
    (0..a.dim()).map(|i| a.amplitude(i).conj() * b.amplitude(i)).sum()
}

/// Weight of the first half of the basis (flag qubit `|0>`) in `U|0>`.
fn flag_zero(u: &UnitaryOp) -> f64 {
    let col = u.matrix().column(0);
    (0..u.dim() / 2).map(|i| col[i].norm_sqr()).sum()
}

fn criterion_1() -> Outcome {
    let family = PairFamily::Haar { qubits: 3 };
    let opt = sweep(&family, Method::OptimalTd, &DEFAULT_EPS_GRID, 100, SEED, None).unwrap();
    let folk = sweep(&family, Method::FolkloreQueryTd, &DEFAULT_EPS_GRID, 100, SEED, None).unwrap();
    let a = fit_scaling(&opt).unwrap();
    let b = fit_scaling(&folk).unwrap();
    outcome(
        (0.8..=1.2).contains(&a) && (1.8..=2.2).contains(&b),
        format!("optimal exponent {a:.4} in [0.8, 1.2], folklore-query exponent {b:.4} in [1.8, 2.2]"),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = (f64::INFINITY, 0.0, 0.0);
    let mut pass = true;
    for (i, p) in [0.01, 0.1, 0.25, 0.5, 0.75, 0.9].into_iter().enumerate() {
        for (j, delta) in [0.1, 0.05].into_iter().enumerate() {
            let r = calibrate_sqrt_amp_est(p, delta, 500, derive_seed(SEED, (10 * i + j) as u64), None).unwrap();
            let margin = r.success_rate - r.success_floor();
            pass &= margin >= 0.0;
            if margin < worst.0 {
                worst = (margin, p, delta);
            }
        }
    }
    outcome(pass, format!("12 grid points x 500 trials; smallest margin over 2/3 - 3 sigma is {:.4} at p={}, delta={}", worst.0, worst.1, worst.2))
}

fn criterion_3() -> Outcome {
    let (mut id_err, mut f_err, mut w_err) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let k = 1 + i % 5;
        let (a, b) = haar_pair(k, derive_seed(SEED, 300 + i as u64));
        let pair = PreparedPair::from_states(&a, &b).unwrap();
        let r = exact_closeness(&pair).unwrap();
        let ov = overlap(&a, &b);
        id_err = id_err.max((r.trace_distance.powi(2) + r.sqrt_fidelity.powi(2) - 1.0).abs());
        f_err = f_err.max((r.sqrt_fidelity - ov.norm()).abs());
        let p = flag_zero(&build_w(&pair).unwrap());
        let p_prime = flag_zero(&build_w_prime(&pair).unwrap());
        w_err = w_err.max((p - (1.0 - ov.norm_sqr())).abs()).max((p_prime - ov.norm_sqr()).abs());
    }
    outcome(
        id_err < 1e-10 && f_err < 1e-10 && w_err < 1e-9,
        format!("max |T^2+F^2-1| = {id_err:.1e}, max |F-|<phi|psi>|| = {f_err:.1e}, max W/W' identity gap = {w_err:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut lib_worst = 0.0f64;
    for i in 0..50 {
        let k = 1 + i % 4;
        let (a, b) = haar_pair(k, derive_seed(SEED, 400 + i as u64));
        let pair = PreparedPair::from_states(&a, &b).unwrap();
        let w = build_w(&pair).unwrap();
        let q = grover_iterate(&w).unwrap();
        let p = 1.0 - overlap(&a, &b).norm_sqr();
        let theta = p.sqrt().asin();

        // span{v, Qv} by hand, then a complex Schur decomposition of the 2x2 block
        let v: DVector<C64> = w.matrix().column(0).into_owned();
        let qv = q.matrix() * &v;
        let mut u2 = &qv - &v * v.dotc(&qv);
        u2 /= C64::new(u2.norm(), 0.0);
        let basis = DMatrix::from_columns(&[v.clone(), u2.clone()]);
        let block = basis.adjoint() * q.matrix() * &basis;
        let leak = (q.matrix() * &basis - &basis * &block).norm();
        let mut phases: Vec<f64> = block.schur().eigenvalues().unwrap().iter().map(|z| z.arg()).collect();
        phases.sort_by(f64::total_cmp);
        let want = [-2.0 * theta, 2.0 * theta];
        let gap = phases.iter().zip(want).map(|(g, w)| (g - w).abs()).fold(leak, f64::max);
        worst = worst.max(gap);

        let sub = invariant_subspace(&q, &w.first_column(), 1e-12).unwrap();
        let mut lib: Vec<f64> = sub.eigenvalues().iter().map(|z| z.arg()).collect();
        lib.sort_by(f64::total_cmp);
        lib_worst = lib_worst.max(lib.iter().zip(want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max));
        if sub.dim() != 2 {
            lib_worst = f64::INFINITY;
        }
    }
    outcome(
        worst < 1e-8 && lib_worst < 1e-8,
        format!("50 pairs; max eigenphase gap to +-2 arcsin(sqrt p): {worst:.1e} (Schur), {lib_worst:.1e} (library subspace)"),
    )
}

fn criterion_5() -> Outcome {
    let td = run_distinguish(Distinguisher::Td, 0.1, 8, 300, 1, derive_seed(SEED, 5), None).unwrap();
    let rounds = default_f2_rounds();
    let f2 = run_distinguish(Distinguisher::F2, 0.1, 8, 300, rounds, derive_seed(SEED, 6), None).unwrap();
    outcome(
        td.success_rate >= td.floor && f2.success_rate >= f2.floor,
        format!(
            "td {:.4} (floor {:.4}), f2 {:.4} (floor {:.4}, {rounds} median rounds); 600 trials each",
            td.success_rate, td.floor, f2.success_rate, f2.floor
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut law = 0.0f64;
    for i in 0..100 {
        let k = 1 + i % 4;
        let (a, b) = haar_pair(k, derive_seed(SEED, 600 + i as u64));
        let pair = PreparedPair::from_states(&a, &b).unwrap();
        let f2 = overlap(&a, &b).norm_sqr();
        law = law.max((swap_test_distribution(&pair).unwrap().get(0) - (1.0 + f2) / 2.0).abs());
        if k <= 2 {
            // the same law through the dense circuit matrix
            let out = swap_test_circuit(k).apply(&StateVector::zero(1).tensor(&a).tensor(&b)).unwrap();
            let p0: f64 = (0..out.dim() / 2).map(|j| out.amplitude(j).norm_sqr()).sum();
            law = law.max((p0 - (1.0 + f2) / 2.0).abs());
        }
    }
    let shots = 10_000u64;
    let mut worst_z = 0.0f64;
    for i in 0..10 {
        let (a, b) = haar_pair(2, derive_seed(SEED, 700 + i));
        let pair = PreparedPair::from_states(&a, &b).unwrap();
        let p0 = (1.0 + overlap(&a, &b).norm_sqr()) / 2.0;
        let base = derive_seed(SEED, 800 + i);
        let zeros = (0..shots).filter(|&s| swap_test_shot(&pair, derive_seed(base, s)).unwrap() == 0).count();
        let sigma = (p0 * (1.0 - p0) / shots as f64).sqrt();
        worst_z = worst_z.max((zeros as f64 / shots as f64 - p0).abs() / sigma);
    }
    outcome(
        law < 1e-10 && worst_z <= 3.0,
        format!("max |Pr[0] - (1+F^2)/2| = {law:.1e} over 100 pairs; worst sampled deviation {worst_z:.2} sigma over 10 pairs x 10^4 shots"),
    )
}

fn criterion_7() -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 10_000, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let strategy = (0.0f64..=1.0, 1e-9f64..1.0, 0.0f64..1.0, proptest::bool::ANY);
    let result = runner.run(&strategy, |(x, eps, frac, up)| {
        let shift = frac * eps;
        let x_tilde = if up { x + shift } else { (x - shift).max(0.0) };
        if (x - x_tilde).abs() < eps {
            proptest::prop_assert!(sqrt_stability_check(x, x_tilde, eps).unwrap());
            proptest::prop_assert!((x.sqrt() - x_tilde.sqrt()).abs() < eps.sqrt());
        }
        Ok(())
    });
    let mut boundary = 0.0f64;
    let mut strict_false = true;
    for eps in [1e-8f64, 1e-4, 0.01, 0.1, 0.37, 0.9] {
        boundary = boundary.max(((0.0f64.sqrt() - eps.sqrt()).abs() - eps.sqrt()).abs());
        strict_false &= !sqrt_stability_check(0.0, eps, eps).unwrap();
    }
    outcome(
        result.is_ok() && boundary < 1e-12 && strict_false,
        format!(
            "10^4 random triples {}; boundary x=0, x~=eps gap {boundary:.1e}, strict check false there: {strict_false}",
            if result.is_ok() { "hold" } else { "FAILED" }
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut checked = 0usize;
    let mut violations = 0usize;
    for (i, p) in [0.0, 0.01, 0.1, 0.25, 0.3, 0.5, 0.75, 0.9, 1.0].into_iter().enumerate() {
        for (j, delta) in [0.1, 0.05, 0.02].into_iter().enumerate() {
            let r = calibrate_sqrt_amp_est(p, delta, 200, derive_seed(SEED, (900 + 10 * i + j) as u64), None).unwrap();
            for x in r.estimates {
                checked += 1;
                if !squaring_reduction_holds(x, p) {
                    violations += 1;
                }
            }
        }
    }
    outcome(violations == 0, format!("|x^2 - p| <= 2|x - sqrt p| on {checked} raw outcomes, {violations} violations"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("optimal vs folklore query scaling", criterion_1),
        ("square-root amplitude estimation calibration", criterion_2),
        ("exact closeness identities", criterion_3),
        ("Grover iterate spectrum", criterion_4),
        ("distinguishing p+ from p-", criterion_5),
        ("SWAP-test law", criterion_6),
        ("square-root stability", criterion_7),
        ("squaring reduction identity", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        println!(
            "criterion {} [{}] {name}: {} ({:.1}s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
