//! Reading two-spin correlations off NMR line intensities: a pi/2 pulse on
//! spin S turns `<XX>`, `<ZZ>` and `<YY>` into line differences.
//!
//! ```text
//! cargo run --example spectra_readout
//! ```

use witnesslab::qmat::{expectation, Pauli};
use witnesslab::readout::{measure_yy, read_correlations, simulate_lines, PulseSpec};
use witnesslab::states::{bell_diagonal, bell_state};
use witnesslab::witness::f_witness;
use witnesslab::{BellDiagonalParams, BellKind, HermitianOp, Spin};

fn main() -> witnesslab::Result<()> {
    let pulse = PulseSpec::correlation_readout();
    for (name, rho) in [
        ("Phi-", bell_state(BellKind::PhiMinus)),
        (
            "bd(-0.2, 1, 0.2)",
            bell_diagonal(&BellDiagonalParams::new(-0.2, 1.0, 0.2))?,
        ),
    ] {
        let spec_i = simulate_lines(&rho, Spin::I, Some(&pulse))?;
        let spec_s = simulate_lines(&rho, Spin::S, Some(&pulse))?;
        println!("{name}");
        for s in [&spec_i, &spec_s] {
            println!(
                "  {:?} lines: low = {:+.3}{:+.3}i  high = {:+.3}{:+.3}i",
                s.nucleus, s.line_low.re, s.line_low.im, s.line_high.re, s.line_high.im
            );
        }
        let corr = read_correlations(&spec_i, &spec_s)?;
        let direct = |p| expectation(&rho, &HermitianOp::pauli_string(p, p));
        println!(
            "  <XX> = {:+.3} (direct {:+.3})  <ZZ> = {:+.3} (direct {:+.3})  <YY> = {:+.3} (direct {:+.3})",
            corr.w1,
            direct(Pauli::X)?,
            corr.w2,
            direct(Pauli::Z)?,
            measure_yy(&rho)?,
            direct(Pauli::Y)?
        );
        println!("  F from spectra = {:+.3}", f_witness(&corr)?);
    }
    Ok(())
}
