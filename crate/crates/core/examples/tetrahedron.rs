//! The four tetrahedral qubit states: every pair has the same Helstrom
//! value, and the set-based average falls short of it by about 0.1453.

use qdist::metrics::deviation;
use qdist::quantum::tetrahedron_states;
use qdist::sdp::DEFAULT_TOL;

fn main() -> qdist::error::Result<()> {
    let report = deviation(&tetrahedron_states(), DEFAULT_TOL)?;
    println!("subset values D(4,m), m = 1..3:");
    for (m, v) in report.subset.iter().enumerate() {
        println!("  m = {}: {v:.10}", m + 1);
    }
    println!("avg_set      {:.10}", report.avg_set);
    println!(
        "avg_pairwise {:.10}  (Helstrom (1 + sqrt(2/3)) / 2 = {:.10})",
        report.avg_pairwise,
        (1.0 + (2.0f64 / 3.0).sqrt()) / 2.0
    );
    println!("deviation    {:.10}", report.deviation);
    Ok(())
}
