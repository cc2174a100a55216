//! Metrics of random triplets: Haar pure qubits almost always show a
//! positive deviation, while mixed qutrits sometimes show a negative one.
//! Writes a scatter plot of the qubit scan to `scan.svg`.

use qdist::cli::{scan_reports, Measure};
use qdist::plot::scatter_svg;
use qdist::sdp::DEFAULT_TOL;

fn main() -> qdist::error::Result<()> {
    let qubits = scan_reports(3, 2, 500, Measure::Pure, 0, DEFAULT_TOL)?;
    let visible = qubits.iter().filter(|(_, r)| r.deviation.abs() >= 5e-5).count();
    println!("qubit pure: {visible}/{} samples with |deviation| >= 5e-5", qubits.len());

    let qutrits = scan_reports(3, 3, 200, Measure::Mixed, 0, DEFAULT_TOL)?;
    let negative = qutrits.iter().filter(|(_, r)| r.deviation < 0.0).count();
    let lowest = qutrits.iter().map(|(_, r)| r.deviation).fold(f64::INFINITY, f64::min);
    println!("qutrit mixed: {negative}/{} samples with negative deviation (lowest {lowest:.6})", qutrits.len());

    let points: Vec<(f64, f64)> = qubits.iter().map(|(_, r)| (r.avg_set, r.avg_pairwise)).collect();
    std::fs::write("scan.svg", scatter_svg(&points, "average set", "average pairwise")?)?;
    println!("wrote scan.svg");
    Ok(())
}
