//! Any linear payoff table can be optimised, not only the distinguishability
//! tasks. Here three qubit states are scored by a guessing game with a
//! penalty for wrong guesses, and the optimal POVM is printed.

use qdist::metrics::CERTIFICATE_TOL;
use qdist::quantum::trine_states;
use qdist::sdp::{build_measurement_sdp, solve_measurement_sdp, verify_certificate, CoefficientTable, DEFAULT_TOL};

fn main() -> qdist::error::Result<()> {
    let preps = trine_states();
    let payoff: Vec<Vec<f64>> = (0..3)
        .map(|k| (0..3).map(|x| if k == x { 1.0 / 3.0 } else { -0.1 }).collect())
        .collect();
    let labels = vec!["guess 0".into(), "guess 1".into(), "guess 2".into()];
    let table = CoefficientTable::new(3, labels, payoff)?;
    let sdp = build_measurement_sdp(&preps, &table)?;
    let res = solve_measurement_sdp(&sdp, DEFAULT_TOL).require_optimal()?;
    println!("optimal payoff {:.10} after {} iterations", res.value, res.iterations);
    for (label, e) in res.povm.outcome_labels().iter().zip(res.povm.elements()) {
        println!("{label}: trace {:.6}", e.trace().re);
    }
    let cert = verify_certificate(&res, &sdp, CERTIFICATE_TOL);
    println!("{cert:#?}");
    Ok(())
}
