//! Telling p+ from p- apart with the trace-distance and F2 distinguishers.
use qcloseness::experiments::{default_f2_rounds, run_distinguish, Distinguisher};

fn main() -> qcloseness::Result<()> {
    let (eps, n) = (0.1, 8);
    for which in [Distinguisher::Td, Distinguisher::F2] {
        let s = run_distinguish(which, eps, n, 100, default_f2_rounds(), 3, None)?;
        println!(
            "{which:?}: success {:.3} (floor {:.3}) over {} trials, mean queries {:.0}",
            s.success_rate,
            s.floor,
            2 * s.trials_per_truth,
            s.mean_queries
        );
    }
    Ok(())
}
