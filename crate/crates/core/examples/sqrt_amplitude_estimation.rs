//! Square-root amplitude estimation on block encodings, plus median boosting.
use qcloseness::amp_est::{amp_est, amplify, sqrt_amp_est};
use qcloseness::experiments::calibrate_sqrt_amp_est;
use qcloseness::oracles::{block_encoding, CountingOracle};
use qcloseness::qlin::StateVector;

fn main() -> qcloseness::Result<()> {
    let (zero, one) = (StateVector::zero(1), StateVector::basis(1, 1)?);
    let delta = 0.05;
    for p in [0.0, 0.1, 0.5, 0.9] {
        let u = block_encoding(p, &zero, &one)?;
        let mut oracle = CountingOracle::new(u.clone());
        let r = sqrt_amp_est(&mut oracle, delta, 7)?;
        let sq = amp_est(&mut CountingOracle::new(u.clone()), delta, 7)?;
        let mut boosted = CountingOracle::new(u);
        let m = amplify(|s| sqrt_amp_est(&mut boosted, delta, s), 15, 7)?;
        println!(
            "p={p:<4} sqrt(p)={:.4} single={:.4} ({} queries)  median15={:.4} ({} queries)  p_hat={:.4}",
            p.sqrt(),
            r.estimate,
            r.queries_used,
            m.estimate,
            boosted.query_count(),
            sq.estimate
        );
    }
    let c = calibrate_sqrt_amp_est(0.3, delta, 500, 11, None)?;
    println!("calibration p=0.3 delta={delta}: success {:.3} over {} trials", c.success_rate, c.trials);
    Ok(())
}
