//! Generalized robustness of entanglement from the interior-point solver,
//! with its primal certificate and dual witness, compared against the
//! Bell-diagonal closed form.
//!
//! ```text
//! cargo run --example robustness
//! ```

use witnesslab::optim::{generalized_robustness, gr_oracle_bd, negativity};
use witnesslab::qmat::C64;
use witnesslab::states::{bell_diagonal, bell_state};
use witnesslab::{BellDiagonalParams, BellKind, DensityMatrix};

fn report(name: &str, rho: &DensityMatrix, oracle: Option<f64>) -> witnesslab::Result<()> {
    let r = generalized_robustness(rho)?;
    print!(
        "{name:<22} GR = {:.9}  bracket [{:.9}, {:.9}]  negativity = {:.4}  iterations = {}",
        r.value,
        r.lower_bound,
        r.value,
        negativity(rho)?,
        r.iterations
    );
    if let Some(o) = oracle {
        print!("  closed form = {o:.9}");
    }
    println!(
        "  certificate residual = {:.1e}",
        r.certificate_residual(rho)?
    );
    Ok(())
}

fn main() -> witnesslab::Result<()> {
    for (c1, c2, c3) in [
        (-1.0, 1.0, 1.0),
        (-0.2, 1.0, 0.2),
        (0.3, -0.3, 0.3),
        (-0.5, -0.1, -0.6),
    ] {
        let c = BellDiagonalParams::new(c1, c2, c3);
        report(
            &format!("bd{c}"),
            &bell_diagonal(&c)?,
            Some(gr_oracle_bd(&c)?),
        )?;
    }

    // a non-Bell-diagonal pure state cos(a)|00> + sin(a)|11>
    let a: f64 = 0.3;
    let ket = [
        C64::new(a.cos(), 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(a.sin(), 0.0),
    ];
    report(
        "cos|00>+sin|11>, 0.3",
        &DensityMatrix::pure(&ket)?,
        Some((2.0 * a).sin()),
    )?;
    report("Psi-", &bell_state(BellKind::PsiMinus), Some(1.0))?;
    Ok(())
}
