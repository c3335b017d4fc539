//! The Grover iterate of W has eigenphases +-2 arcsin(T) on the span of W|0>.
use std::f64::consts::TAU;

use qcloseness::closeness::exact_closeness;
use qcloseness::oracles::{build_w, grover_iterate, PreparedPair};
use qcloseness::qlin::{haar_state, invariant_subspace, seeded_rng};

fn main() -> qcloseness::Result<()> {
    let mut rng = seeded_rng(9);
    for _ in 0..5 {
        let pair = PreparedPair::from_states(&haar_state(2, &mut rng), &haar_state(2, &mut rng))?;
        let t = exact_closeness(&pair)?.trace_distance;
        let w = build_w(&pair)?;
        let q = grover_iterate(&w)?;
        let sub = invariant_subspace(&q, &w.first_column(), 1e-10)?;
        let (_, phases) = sub.eigendecomposition()?;
        let angles: Vec<String> = phases
            .iter()
            .map(|ph| {
                let a = if *ph > 0.5 { ph - 1.0 } else { *ph };
                format!("{:+.6}", a * TAU)
            })
            .collect();
        println!("T={t:.4}  predicted +-{:.6}  found [{}]", 2.0 * t.asin(), angles.join(", "));
    }
    Ok(())
}
