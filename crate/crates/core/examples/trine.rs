//! Set and pairwise distinguishability of the qubit trine.
//!
//! Run with `cargo run --release --example trine`.

use qdist::metrics::deviation;
use qdist::quantum::trine_states;
use qdist::sdp::DEFAULT_TOL;

fn main() -> qdist::error::Result<()> {
    let report = deviation(&trine_states(), DEFAULT_TOL)?;
    let sqrt3 = 3f64.sqrt();
    println!("avg_set      {:.10}  (closed form 5/6 = {:.10})", report.avg_set, 5.0 / 6.0);
    println!("avg_pairwise {:.10}  (closed form {:.10})", report.avg_pairwise, (2.0 + sqrt3) / 4.0);
    println!("deviation    {:.10}  (closed form {:.10})", report.deviation, (3.0 * sqrt3 - 4.0) / 12.0);
    for (m, v) in report.subset.iter().enumerate() {
        println!("  D(3,{}) = {v:.10}", m + 1);
    }
    println!("all dual certificates valid: {}", report.all_certified());
    Ok(())
}
