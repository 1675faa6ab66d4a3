//! The Bell-diagonal tetrahedron: separable octahedron, the region where `F`
//! detects entanglement, and the entangled remainder it misses.
//!
//! ```text
//! cargo run --example bell_diagonal_geometry -- 41
//! ```

use std::collections::BTreeMap;

use witnesslab::states::{bell_diagonal, is_ppt};
use witnesslab::witness::{classify_bd, detection_region_grid, f_witness_state};
use witnesslab::{BDClass, BellDiagonalParams, Tolerances};

fn main() -> witnesslab::Result<()> {
    let resolution = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(21);
    let grid = detection_region_grid(resolution)?;

    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, class) in &grid {
        *counts.entry(class.name()).or_default() += 1;
    }
    println!("{resolution}^3 grid:");
    for (name, n) in &counts {
        println!("  {name:<24} {n:>7}");
    }

    let tol = Tolerances::default();
    for c in [
        BellDiagonalParams::new(-1.0, 1.0, 1.0),
        BellDiagonalParams::new(-0.2, 1.0, 0.2),
        BellDiagonalParams::new(0.5, 0.0, 0.4),
    ] {
        let rho = bell_diagonal(&c)?;
        let class = classify_bd(&c);
        println!(
            "{c}: {class}, F = {:.3}, PPT = {}, weights = {:.3?}",
            f_witness_state(&rho)?,
            is_ppt(&rho, &tol)?,
            c.weights()
        );
        debug_assert!(class != BDClass::Unphysical);
    }
    Ok(())
}
