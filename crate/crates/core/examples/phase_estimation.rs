//! Phase estimation on a single-qubit phase gate: outcome distribution and a sampled run.
use qcloseness::oracles::CountingOracle;
use qcloseness::phase_est::{circular_distance, outcome_distribution, run_phase_estimation, PhaseEstimateConfig};
use qcloseness::qlin::{StateVector, UnitaryOp};

fn main() -> qcloseness::Result<()> {
    let lambda = 0.3183;
    let cfg = PhaseEstimateConfig::new(0.05, 1.0 / 3.0)?;
    let t = cfg.ancilla_qubits();
    let eigvec = StateVector::basis(1, 1)?;
    let mut q = CountingOracle::new(UnitaryOp::phase(lambda));
    let d = outcome_distribution(&q, &eigvec, &cfg)?;
    let n = (1u64 << t) as f64;
    let good = d.mass_where(|y| circular_distance(y as f64 / n, lambda) < 0.05);
    println!("t={t} ancillas, {} controlled applications", cfg.controlled_applications());
    println!("mass within 0.05 of lambda: {good:.4}");
    let o = run_phase_estimation(&mut q, &eigvec, &cfg, 42)?;
    println!("sampled phi~={:.5} (lambda {lambda}), queries {}", o.phi_tilde, q.query_count());
    Ok(())
}
