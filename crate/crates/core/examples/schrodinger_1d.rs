//! The full check suite on a discretized Schrödinger family
//! -u'' + z q u on (0, 1) with Dirichlet conditions and complex q.

use holoform::demos::schrodinger_1d;
use holoform::report::run_scenario;

fn main() -> holoform::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let report = run_scenario(&schrodinger_1d(n))?;
    println!("grid points: {n}");
    for (k, v) in &report.constants {
        println!("  {k:<6} = {v:.6}");
    }
    for check in &report.checks {
        println!("{:<15} {:?}", check.name.as_str(), check.status);
    }
    Ok(())
}
