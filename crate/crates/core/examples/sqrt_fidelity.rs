//! Square-root fidelity and squared fidelity from the same pair.
use qcloseness::closeness::{estimate_sqrt_fidelity, estimate_squared_fidelity, exact_closeness};
use qcloseness::oracles::PreparedPair;
use qcloseness::qlin::{haar_state, seeded_rng};

fn main() -> qcloseness::Result<()> {
    let mut rng = seeded_rng(5);
    let mut pair = PreparedPair::from_states(&haar_state(3, &mut rng), &haar_state(3, &mut rng))?;
    let exact = exact_closeness(&pair)?;
    let eps = 0.05;
    let f = estimate_sqrt_fidelity(&mut pair, eps, 1)?;
    let f2 = estimate_squared_fidelity(&mut pair, eps, 2)?;
    println!("F : exact {:.6}  estimate {:.6}  queries {}", exact.sqrt_fidelity, f.estimate, f.queries_used);
    println!("F2: exact {:.6}  estimate {:.6}  queries {}", exact.squared_fidelity, f2.estimate, f2.queries_used);
    Ok(())
}
