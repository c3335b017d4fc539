//! Sweep eps for the optimal and folklore trace-distance estimators and fit the cost exponent.
use qcloseness::experiments::{fit_scaling, records_to_csv, sweep, Method, PairFamily};

fn main() -> qcloseness::Result<()> {
    let grid = [0.2, 0.1, 0.05];
    for method in [Method::OptimalTd, Method::FolkloreQueryTd] {
        let records = sweep(&PairFamily::Haar { qubits: 1 }, method, &grid, 100, 17, None)?;
        print!("{}", records_to_csv(&records)?);
        println!("# {method}: cost ~ eps^-{:.3}\n", fit_scaling(&records)?);
    }
    Ok(())
}
