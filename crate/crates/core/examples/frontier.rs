//! Scalarised trade-off between the two averages for qutrit triplets,
//! written as CSV to stdout.

use qdist::io::{Cell, CsvTable};
use qdist::seesaw::{default_kappa_grid, frontier_sweep, SeesawConfig, Sign};

fn main() -> qdist::error::Result<()> {
    let config = SeesawConfig {
        restarts: 5,
        ..SeesawConfig::new(3, 3, Sign::Positive)
    };
    let sweep = frontier_sweep(3, 3, &default_kappa_grid(), &config)?;
    let mut table = CsvTable::new(vec!["kappa", "avg_set", "avg_pairwise", "deviation", "restarts_used"]);
    for p in &sweep.points {
        table.push(vec![
            Cell::from(p.kappa),
            Cell::from(p.avg_set),
            Cell::from(p.avg_pairwise),
            Cell::from(p.deviation),
            Cell::from(p.restarts_used),
        ]);
    }
    print!("{}", table.to_string()?);
    for (kappa, orientation, msg) in &sweep.failures {
        eprintln!("kappa {kappa} ({orientation:?}) failed: {msg}");
    }
    Ok(())
}
