//! See-saw search for qutrit triplets whose set-based average exceeds the
//! pairwise one. Expect a reverse deviation close to 0.0278.
//!
//! `cargo run --release --example seesaw_reverse -- 50` sets the number of restarts.

use qdist::seesaw::{seesaw_deviation, SeesawConfig, Sign};

fn main() -> qdist::error::Result<()> {
    let restarts = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(50);
    let config = SeesawConfig {
        restarts,
        ..SeesawConfig::new(3, 3, Sign::Negative)
    };
    let res = seesaw_deviation(&config)?;
    println!("best avg_set - avg_pairwise = {:.8}", res.best_value);
    println!("avg_set {:.8}, avg_pairwise {:.8}", res.report.avg_set, res.report.avg_pairwise);
    println!("{} restarts, {} failed", res.restarts_used, res.failed_restarts.len());
    for (x, rho) in res.best_preps.states().iter().enumerate() {
        println!("state {x}: purity {:.6}", rho.purity());
    }
    Ok(())
}
