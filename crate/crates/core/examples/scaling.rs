//! Growth of the best positive deviation found for n = 3, 4, 5 qubit states,
//! rendered as a bar chart in `scaling.svg`.

use qdist::plot::bars_svg;
use qdist::seesaw::{deviation_scaling, SeesawConfig, Sign};

fn main() -> qdist::error::Result<()> {
    let config = SeesawConfig::new(3, 2, Sign::Positive);
    let run = deviation_scaling(3, 5, 2, &config)?;
    let mut bars = Vec::new();
    for p in &run.points {
        println!("n = {} (d = {}): deviation >= {:.6}", p.n, p.dim, p.deviation_lb);
        bars.push((format!("n={}", p.n), p.deviation_lb));
    }
    std::fs::write("scaling.svg", bars_svg(&bars, "deviation lower bound")?)?;
    println!("wrote scaling.svg");
    Ok(())
}
