//! Optimal Pauli-string witnesses for the four Bell states, found by vertex
//! enumeration of the 4-variable linear program, and evaluated on a few
//! states.
//!
//! ```text
//! cargo run --example optimal_witnesses
//! ```

use witnesslab::optim::{optimal_witness, solve_lp, witness_lp};
use witnesslab::states::{bell_diagonal, bell_state};
use witnesslab::witness::eval_witness;
use witnesslab::{BellDiagonalParams, BellKind, DensityMatrix, Tolerances};

fn main() -> witnesslab::Result<()> {
    let tol = Tolerances::default();
    println!("kind  (c_I, c_x, c_y, c_z)          <W>  valid  optima");
    for kind in BellKind::ALL {
        let (w, objective) = optimal_witness(kind);
        let vertices = solve_lp(&witness_lp(kind))?.optimal_vertices.len();
        println!(
            "{kind:<5} {w:<28} {objective:+.2}  {}  {vertices}",
            w.is_valid(&tol)?
        );
    }

    let (w, _) = optimal_witness(BellKind::PhiMinus);
    let states = [
        ("Phi-", bell_state(BellKind::PhiMinus)),
        ("Psi+", bell_state(BellKind::PsiPlus)),
        (
            "bd(-0.2, 1, 0.2)",
            bell_diagonal(&BellDiagonalParams::new(-0.2, 1.0, 0.2))?,
        ),
        ("I/4", DensityMatrix::maximally_mixed(4)?),
    ];
    println!("\nPhi- witness:");
    for (name, rho) in states {
        println!("  <W> on {name:<17} = {:+.3}", eval_witness(&w, &rho)?);
    }
    Ok(())
}
