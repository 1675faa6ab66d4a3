//! Optimization kernel: the optimal-witness program over the Pauli witness
//! family, and the generalized robustness of entanglement.

pub mod lp;
pub mod robustness;

pub use lp::{solve_lp, LinearProgram, LpSolution};
pub use robustness::{generalized_robustness, generalized_robustness_with, RobustnessResult};

use crate::qmat::{DensityMatrix, Spin};
use crate::states::{BellDiagonalParams, BellKind};
use crate::witness::PauliWitness;
use crate::Result;

/// The witness program restricted to `W = c_I 𝕀 + c_x XX + c_y YY + c_z ZZ`.
///
/// Both `W` and `W^{T_A}` are diagonal in the Bell basis, so `W ⪯ 𝕀` and
/// `W^{T_A} ⪰ 0` become four linear inequalities each on `(c_I, c_x, c_y, c_z)`.
/// The objective is `⟨β|W|β⟩`.
pub fn witness_lp(kind: BellKind) -> LinearProgram {
    let row = |k: BellKind, flip_y: bool| {
        let [a, b, c] = k.correlations();
        vec![1.0, a, if flip_y { -b } else { b }, c]
    };
    let mut constraints = Vec::with_capacity(8);
    let mut bounds = Vec::with_capacity(8);
    for k in BellKind::ALL {
        constraints.push(row(k, false));
        bounds.push(1.0);
    }
    for k in BellKind::ALL {
        constraints.push(row(k, true).into_iter().map(|v| -v).collect());
        bounds.push(0.0);
    }
    LinearProgram::new(row(kind, false), constraints, bounds)
        .expect("well-formed 4-variable program")
}

/// Optimal Pauli-family witness for a Bell state and its objective
/// `⟨β|W|β⟩`. Ties between optimal vertices break lexicographically on
/// `(c_I, c_x, c_y, c_z)`.
pub fn optimal_witness(kind: BellKind) -> (PauliWitness, f64) {
    let sol = solve_lp(&witness_lp(kind)).expect("witness program is feasible and bounded");
    let w = PauliWitness::from_array([sol.x[0], sol.x[1], sol.x[2], sol.x[3]]);
    (w, sol.objective)
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_A}`.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let pt = rho.partial_transpose(Spin::I)?;
    Ok(pt
        .eigenvalues()
        .iter()
        .filter(|&&l| l < 0.0)
        .fold(0.0, |acc, l| acc - l))
}

/// Closed form `max(0, 2λ_max − 1)` for Bell-diagonal states.
pub fn gr_oracle_bd(params: &BellDiagonalParams) -> Result<f64> {
    params.check_physical()?;
    let lmax = params
        .weights()
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((2.0 * lmax - 1.0).max(0.0))
}
