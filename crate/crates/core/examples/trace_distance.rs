//! Estimate the trace distance of a random pair at a few precisions.
use qcloseness::closeness::{estimate_trace_distance, exact_closeness};
use qcloseness::oracles::PreparedPair;
use qcloseness::qlin::{haar_state, seeded_rng};

fn main() -> qcloseness::Result<()> {
    let mut rng = seeded_rng(3);
    let mut pair = PreparedPair::from_states(&haar_state(2, &mut rng), &haar_state(2, &mut rng))?;
    let exact = exact_closeness(&pair)?.trace_distance;
    println!("exact T = {exact:.6}");
    for (i, eps) in [0.1, 0.05, 0.02].into_iter().enumerate() {
        let r = estimate_trace_distance(&mut pair, eps, i as u64)?;
        println!("eps={eps:<5} estimate={:.6} error={:.2e} queries={}", r.estimate, r.error_against(exact), r.queries_used);
    }
    println!("total queries charged (U_phi, U_psi): {:?}", pair.query_counts());
    Ok(())
}
