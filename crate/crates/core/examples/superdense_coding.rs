//! Superdense coding on a thermal two-spin ensemble: every message is
//! recovered from the signs of the final magnetizations, for any nonzero
//! polarization.
//!
//! ```text
//! cargo run --example superdense_coding
//! ```

use witnesslab::circuits::{decode_message, superdense_run, Message};
use witnesslab::states::pauli_vector;
use witnesslab::ThermalParams;

fn main() -> witnesslab::Result<()> {
    for (eps_i, eps_s) in [(1.0, 1.0), (0.5, 0.25), (1e-5, 4e-6)] {
        let thermal = ThermalParams::new(eps_i, eps_s)?;
        println!("eps_I = {eps_i:e}, eps_S = {eps_s:e}");
        for m in Message::ALL {
            let run = superdense_run(&thermal, m)?;
            let decoded = decode_message(run.mz_i, run.mz_s, 0.0);
            println!(
                "  sent {:?}  <Z_I> = {:+.3e}  <Z_S> = {:+.3e}  decoded {:?}",
                m.bits(),
                run.mz_i,
                run.mz_s,
                decoded.map(|d| d.bits())
            );
        }
        // the shared resource is Bell-diagonal: only XX, YY, ZZ survive
        let e = pauli_vector(&superdense_run(&thermal, Message::new(false, false))?.rho1)?;
        println!(
            "  (XX, YY, ZZ) of the shared state = ({:+.3e}, {:+.3e}, {:+.3e})",
            e[4], e[9], e[14]
        );
    }
    Ok(())
}
