//! SWAP-test sampling and query baselines next to the optimal estimator.
use qcloseness::closeness::{
    exact_closeness, folklore_query_estimators, folklore_sample_estimators, optimal_estimators, swap_test_distribution,
};
use qcloseness::oracles::PreparedPair;
use qcloseness::qlin::{haar_state, seeded_rng};

fn main() -> qcloseness::Result<()> {
    let mut rng = seeded_rng(4);
    let mut pair = PreparedPair::from_states(&haar_state(1, &mut rng), &haar_state(1, &mut rng))?;
    let exact = exact_closeness(&pair)?;
    let d = swap_test_distribution(&pair)?;
    println!("Pr[0] = {:.6}, (1 + F2)/2 = {:.6}", d.get(0), (1.0 + exact.squared_fidelity) / 2.0);
    let eps = 0.1;
    let reports = [
        optimal_estimators(&mut pair, eps, 1)?,
        folklore_sample_estimators(&pair, eps, 1)?,
        folklore_query_estimators(&mut pair, eps, 1)?,
    ];
    println!("exact           T={:.4} F={:.4} F2={:.4}", exact.trace_distance, exact.sqrt_fidelity, exact.squared_fidelity);
    for r in reports {
        println!(
            "{:<15} T={:.4} F={:.4} F2={:.4} cost={}",
            format!("{:?}", r.method),
            r.trace_distance,
            r.sqrt_fidelity,
            r.squared_fidelity,
            r.queries_or_samples
        );
    }
    Ok(())
}
