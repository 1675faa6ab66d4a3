//! Pauli tomography of |Phi-> from noisy expectation values: fidelity of the
//! reconstructed state as the noise level grows.
//!
//! ```text
//! cargo run --release --example tomography_noise
//! ```

use witnesslab::qmat::fidelity;
use witnesslab::readout::{noisy_pauli_vector, pauli_tomography};
use witnesslab::states::bell_state;
use witnesslab::BellKind;

fn main() -> witnesslab::Result<()> {
    let target = bell_state(BellKind::PhiMinus);
    let trials = 500;
    println!(
        "{:>6} {:>10} {:>10} {:>12}",
        "sigma", "mean F", "min F", "F >= 0.98"
    );
    for sigma in [0.0, 0.005, 0.01, 0.02, 0.05, 0.1] {
        let mut fids = Vec::with_capacity(trials);
        for seed in 0..trials as u64 {
            let e = noisy_pauli_vector(&target, sigma, seed)?;
            fids.push(fidelity(&pauli_tomography(&e)?.state, &target)?);
        }
        let mean = fids.iter().sum::<f64>() / trials as f64;
        let min = fids.iter().copied().fold(1.0, f64::min);
        let good = fids.iter().filter(|&&f| f >= 0.98).count();
        println!(
            "{sigma:>6} {mean:>10.5} {min:>10.5} {:>11.1}%",
            100.0 * good as f64 / trials as f64
        );
    }
    Ok(())
}
