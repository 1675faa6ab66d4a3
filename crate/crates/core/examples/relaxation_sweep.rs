//! Relaxation of |Phi-> under per-spin T1/T2 decay: where `F`, the optimal
//! witness and the generalized robustness stop detecting entanglement.
//!
//! ```text
//! cargo run --release --example relaxation_sweep -- 0.31 0.11
//! ```

use witnesslab::relax::{crossing_time, sweep, Quantity, RelaxationParams};
use witnesslab::states::bell_state;
use witnesslab::witness::table1_witness;
use witnesslab::BellKind;

fn main() -> witnesslab::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let (t2_i, t2_s) = match args[..] {
        [a, b, ..] => (a, b),
        _ => (0.31, 0.11),
    };
    let params = RelaxationParams::with_t2(t2_i, t2_s)?;
    let series = sweep(
        &bell_state(BellKind::PhiMinus),
        &params,
        &table1_witness(BellKind::PhiMinus),
        1.0,
        200,
    )?;

    println!("{:>8} {:>10} {:>10} {:>10}", "t [s]", "F", "W", "GR");
    for k in (0..series.len()).step_by(20) {
        println!(
            "{:>8.4} {:>10.5} {:>10.5} {:>10.5}",
            series.times[k], series.f_values[k], series.w_values[k], series.gr_values[k]
        );
    }
    let show = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4} s"));
    println!("F crossing (tau_c)  {}", show(series.tau_c));
    println!(
        "W crossing          {}",
        show(crossing_time(&series, Quantity::W))
    );
    println!("last GR detection   {}", show(series.last_gr_detection()));
    println!("tau_R               {}", show(series.tau_r));
    println!("tau_W               {}", show(series.tau_w));
    Ok(())
}
