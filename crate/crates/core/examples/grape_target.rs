//! State preparation: pseudo-pure |00>, GRAPE pulse, gradient crusher and
//! the pseudo-EPR circuit produce the Bell-diagonal target with
//! c = (-0.2, 1.0, 0.2).
//!
//! ```text
//! cargo run --example grape_target
//! ```

use witnesslab::circuits::{computational_probabilities, grape_pipeline_stages};
use witnesslab::optim::generalized_robustness;
use witnesslab::states::{pauli_labels, pauli_vector};
use witnesslab::witness::{eval_witness, f_witness_state, table1_witness};
use witnesslab::BellKind;

fn main() -> witnesslab::Result<()> {
    let stages = grape_pipeline_stages();
    for (name, rho) in [
        ("pseudo-pure", &stages.pseudo_pure),
        ("after GRAPE", &stages.after_grape),
        ("after crusher", &stages.dephased),
    ] {
        let p = computational_probabilities(rho);
        println!("{name:<14} populations {:.2?}", p);
    }

    let out = &stages.output;
    let nonzero: Vec<String> = pauli_labels()
        .iter()
        .zip(pauli_vector(out)?)
        .filter(|(_, v)| v.abs() > 1e-12)
        .map(|(l, v)| format!("<{l}> = {v:+.2}"))
        .collect();
    println!("output         {}", nonzero.join(", "));
    println!("F              {:+.3}", f_witness_state(out)?);
    println!(
        "W (Phi-)       {:+.3}",
        eval_witness(&table1_witness(BellKind::PhiMinus), out)?
    );
    println!("GR             {:.6}", generalized_robustness(out)?.value);
    Ok(())
}
