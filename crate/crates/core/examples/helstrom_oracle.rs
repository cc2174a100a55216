//! Cross-checks the measurement SDP against the Helstrom formula on random
//! qubit and qutrit pairs and prints the dual certificate of each solve.

use qdist::metrics::{pair_coefficients, CERTIFICATE_TOL};
use qdist::quantum::{haar_random_pure_with, helstrom_pair, hs_random_mixed_with, seeded_rng, PreparationSet};
use qdist::sdp::{build_measurement_sdp, solve_measurement_sdp, verify_certificate, DEFAULT_TOL};

fn main() -> qdist::error::Result<()> {
    let mut rng = seeded_rng(7);
    let coeffs = pair_coefficients(2, 0, 1)?;
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let dim = 2 + trial % 2;
        let (a, b) = if trial % 4 < 2 {
            (haar_random_pure_with(dim, &mut rng), haar_random_pure_with(dim, &mut rng))
        } else {
            (hs_random_mixed_with(dim, &mut rng), hs_random_mixed_with(dim, &mut rng))
        };
        let closed = helstrom_pair(&a, &b)?;
        let pair = PreparationSet::new(vec![a, b])?;
        let sdp = build_measurement_sdp(&pair, &coeffs)?;
        let res = solve_measurement_sdp(&sdp, DEFAULT_TOL).require_optimal()?;
        let cert = verify_certificate(&res, &sdp, CERTIFICATE_TOL);
        worst = worst.max((res.value - closed).abs());
        println!(
            "d={dim} sdp={:.12} helstrom={:.12} gap={:+.1e} certified={}",
            res.value, closed, cert.duality_gap, cert.certified
        );
    }
    println!("largest |sdp - helstrom| = {worst:.2e}");
    Ok(())
}
