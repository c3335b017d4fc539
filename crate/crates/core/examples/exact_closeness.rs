//! Exact closeness measures for a few hand-picked and random pairs.
use qcloseness::closeness::exact_closeness;
use qcloseness::oracles::PreparedPair;
use qcloseness::qlin::{haar_state, seeded_rng, StateVector};

fn main() -> qcloseness::Result<()> {
    let mut rng = seeded_rng(1);
    let pairs = [
        ("|0>, |0>", StateVector::zero(1), StateVector::zero(1)),
        ("|0>, |+>", StateVector::zero(1), StateVector::uniform(1)),
        ("|0>, |1>", StateVector::zero(1), StateVector::basis(1, 1)?),
        ("haar, haar", haar_state(3, &mut rng), haar_state(3, &mut rng)),
    ];
    for (name, a, b) in pairs {
        let r = exact_closeness(&PreparedPair::from_states(&a, &b)?)?;
        println!(
            "{name:<12} T={:.6} F={:.6} F2={:.6} p_err={:.6}",
            r.trace_distance, r.sqrt_fidelity, r.squared_fidelity, r.helstrom_error
        );
    }
    Ok(())
}
