//! Generalized robustness of entanglement for two qubits.
//!
//! For two qubits a state is separable iff it is PPT, so the robustness is
//! the semidefinite program
//!
//! ```text
//! minimize Tr ω   subject to   ω ⪰ 0,   (ρ + ω)^{T_A} ⪰ 0
//! ```
//!
//! solved here with a log-barrier interior-point method over the 16 real
//! coordinates of ω in the Pauli basis. Its dual is
//!
//! ```text
//! maximize −Tr(ρ W)   subject to   W^{T_A} ⪰ 0,   W ⪯ 𝕀
//! ```
//!
//! i.e. the best witness of the decomposable family. Every iterate keeps ω
//! strictly feasible (an upper bound) and yields a feasible dual witness (a
//! lower bound); the solver stops when the two agree.

use std::sync::OnceLock;

use crate::qmat::{pauli_string, ComplexMatrix, DensityMatrix, HermitianOp, Pauli, Spin, C64};
use crate::tolerance::Tolerances;
use crate::{Error, Result};

const NVARS: usize = 16;
const TARGET_GAP: f64 = 1e-9;
/// Gap accepted when Newton stalls at very large `t`.
const FALLBACK_GAP: f64 = 1e-7;
const T_GROWTH: f64 = 16.0;
/// Half the squared Newton decrement at which an iterate counts as centered.
const CENTERING_TOL: f64 = 1e-10;
const MAX_NEWTON: usize = 3000;
const ROUND_NEWTON: usize = 200;
const MAX_IDLE_ROUNDS: usize = 2;
/// Robustness of any two-qubit state is at most 1; anything above this is a
/// solver fault.
pub const VALUE_CEILING: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessResult {
    /// `min Tr ω` (the primal upper bound at termination).
    pub value: f64,
    /// Certified lower bound from the dual witness.
    pub lower_bound: f64,
    /// `ω / Tr ω`, present when `value > 0`.
    pub certificate_state: Option<DensityMatrix>,
    /// Dual optimal witness `W` with `W^{T_A} ⪰ 0`, `W ⪯ 𝕀` and
    /// `Tr(ρ W) = −lower_bound`; present when `value > 0`.
    pub witness: Option<HermitianOp>,
    /// Newton iterations used.
    pub iterations: usize,
}

impl RobustnessResult {
    /// Smallest eigenvalue of `((ρ + value·certificate)/(1 + value))^{T_A}`;
    /// nonnegative (up to rounding) when the certificate is feasible.
    pub fn certificate_residual(&self, rho: &DensityMatrix) -> Result<f64> {
        let mixed = match &self.certificate_state {
            Some(cert) => {
                let m = rho.matrix() + &cert.matrix().scale_real(self.value);
                m.scale_real(1.0 / (1.0 + self.value))
            }
            None => *rho.matrix(),
        };
        Ok(HermitianOp::new(mixed.partial_transpose(Spin::I)?.hermitian_part())?.min_eigenvalue())
    }
}

/// Orthonormal Hermitian basis `Eₖ = Pₐ⊗P_b / 2` and the sign each picks up
/// under partial transposition of spin I (`Yᵀ = −Y`).
fn basis() -> &'static [(ComplexMatrix, f64); NVARS] {
    static BASIS: OnceLock<[(ComplexMatrix, f64); NVARS]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut out = [(ComplexMatrix::zeros(4).expect("dim 4"), 1.0); NVARS];
        let mut k = 0;
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let sign = if a == Pauli::Y { -1.0 } else { 1.0 };
                out[k] = (pauli_string(a, b).scale_real(0.5), sign);
                k += 1;
            }
        }
        out
    })
}

fn assemble(x: &[f64; NVARS], signed: bool) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4).expect("dim 4");
    for (xk, (e, s)) in x.iter().zip(basis().iter()) {
        let w = if signed { xk * s } else { *xk };
        if w != 0.0 {
            m = &m + &e.scale_real(w);
        }
    }
    m
}

/// Inverse of a Hermitian positive definite matrix through its Cholesky factor.
fn inverse_pd(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let l = m.cholesky()?;
    let n = m.dim();
    // L⁻¹ by forward substitution
    let mut linv = ComplexMatrix::zeros(n).ok()?;
    for col in 0..n {
        for row in col..n {
            let mut s = if row == col {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            for k in col..row {
                s -= l.get(row, k) * linv.get(k, col);
            }
            linv.set(row, col, s / l.get(row, row));
        }
    }
    Some(&linv.adjoint() * &linv)
}

/// Cholesky solve of a symmetric positive definite system, after symmetric
/// diagonal scaling (the Hessian's diagonal spans many orders of magnitude
/// near the optimum).
fn solve_spd(h: &[[f64; NVARS]; NVARS], g: &[f64; NVARS]) -> Option<[f64; NVARS]> {
    let mut d = [0.0; NVARS];
    for i in 0..NVARS {
        if h[i][i].is_nan() || h[i][i] <= 0.0 {
            return None;
        }
        d[i] = 1.0 / h[i][i].sqrt();
    }
    let scaled: [[f64; NVARS]; NVARS] =
        std::array::from_fn(|i| std::array::from_fn(|j| d[i] * h[i][j] * d[j]));
    let rhs: [f64; NVARS] = std::array::from_fn(|i| d[i] * g[i]);
    // rounding can leave the scaled matrix marginally indefinite; a tiny
    // ridge only perturbs the nearly-null directions
    for ridge in [0.0, 1e-14, 1e-12, 1e-10] {
        let mut m = scaled;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += ridge;
        }
        if let Some(y) = cholesky_solve(&m, &rhs) {
            return Some(std::array::from_fn(|i| d[i] * y[i]));
        }
    }
    None
}

#[allow(clippy::needless_range_loop)]
fn cholesky_solve(h: &[[f64; NVARS]; NVARS], g: &[f64; NVARS]) -> Option<[f64; NVARS]> {
    let mut l = [[0.0; NVARS]; NVARS];
    for j in 0..NVARS {
        let mut d = h[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if d.is_nan() || d <= 0.0 {
            return None;
        }
        let djj = d.sqrt();
        l[j][j] = djj;
        for i in (j + 1)..NVARS {
            let mut s = h[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / djj;
        }
    }
    let mut y = [0.0; NVARS];
    for i in 0..NVARS {
        let s: f64 = (0..i).map(|k| l[i][k] * y[k]).sum();
        y[i] = (g[i] - s) / l[i][i];
    }
    let mut x = [0.0; NVARS];
    for i in (0..NVARS).rev() {
        let s: f64 = ((i + 1)..NVARS).map(|k| l[k][i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i][i];
    }
    Some(x)
}

struct Problem {
    rho_pt: ComplexMatrix,
}

impl Problem {
    fn slack(&self, x: &[f64; NVARS]) -> ComplexMatrix {
        &assemble(x, true) + &self.rho_pt
    }

    fn feasible(&self, x: &[f64; NVARS]) -> bool {
        assemble(x, false).cholesky().is_some() && self.slack(x).cholesky().is_some()
    }

    /// Gradient and Hessian of the barrier objective at `x`.
    fn derivatives(
        &self,
        x: &[f64; NVARS],
        t: f64,
    ) -> Option<([f64; NVARS], [[f64; NVARS]; NVARS])> {
        let xinv = inverse_pd(&assemble(x, false))?;
        let zinv = inverse_pd(&self.slack(x))?;
        let b = basis();
        let ax: Vec<ComplexMatrix> = b.iter().map(|(e, _)| &xinv * e).collect();
        let az: Vec<ComplexMatrix> = b.iter().map(|(e, _)| &zinv * e).collect();
        let mut g = [0.0; NVARS];
        let mut h = [[0.0; NVARS]; NVARS];
        for k in 0..NVARS {
            let sk = b[k].1;
            let tr_e = b[k].0.trace().re;
            g[k] = t * tr_e - ax[k].trace().re - sk * az[k].trace().re;
            for l in k..NVARS {
                let sl = b[l].1;
                let v = ax[k].trace_product(&ax[l]).re + sk * sl * az[k].trace_product(&az[l]).re;
                h[k][l] = v;
                h[l][k] = v;
            }
        }
        Some((g, h))
    }

    /// Dual-feasible witness from the barrier multiplier `Z⁻¹ / t`, scaled so
    /// that `W ⪯ 𝕀`. Returns `(lower bound, W)`.
    fn dual_bound(&self, x: &[f64; NVARS], t: f64) -> Option<(f64, ComplexMatrix)> {
        let zinv = inverse_pd(&self.slack(x))?;
        let y = zinv.scale_real(1.0 / t).hermitian_part();
        let w = y.partial_transpose(Spin::I).ok()?;
        let w_max = HermitianOp::from_hermitian_unchecked(w).max_eigenvalue();
        let scale = if w_max > 1.0 { 1.0 / w_max } else { 1.0 };
        let y = y.scale_real(scale);
        let w = w.scale_real(scale);
        let lower = -y.trace_product(&self.rho_pt).re;
        Some((lower, w))
    }
}

/// Generalized robustness of a two-qubit state, to absolute accuracy well
/// below `1e-6`.
pub fn generalized_robustness(rho: &DensityMatrix) -> Result<RobustnessResult> {
    generalized_robustness_with(rho, &Tolerances::default())
}

pub fn generalized_robustness_with(
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<RobustnessResult> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: rho.dim(),
        });
    }
    let rho_pt = rho.matrix().partial_transpose(Spin::I)?.hermitian_part();
    let pt_min = HermitianOp::from_hermitian_unchecked(rho_pt).min_eigenvalue();
    if pt_min >= -tol.psd {
        return Ok(RobustnessResult {
            value: 0.0,
            lower_bound: 0.0,
            certificate_state: None,
            witness: None,
            iterations: 0,
        });
    }

    let problem = Problem { rho_pt };
    let alpha = 1.0 - pt_min;
    let mut x = [0.0; NVARS];
    x[0] = 2.0 * alpha; // ω = α𝕀
    let mut t = 1.0;
    let mut iterations = 0;
    let mut idle_rounds = 0;
    let mut best: Option<(f64, f64, [f64; NVARS], ComplexMatrix)> = None;

    loop {
        // centering
        let mut stalled = false;
        let round_start = iterations;
        loop {
            if iterations >= MAX_NEWTON || iterations - round_start >= ROUND_NEWTON {
                stalled = true;
                break;
            }
            let Some((g, h)) = problem.derivatives(&x, t) else {
                stalled = true;
                break;
            };
            let neg_g = g.map(|v| -v);
            let Some(dx) = solve_spd(&h, &neg_g) else {
                stalled = true;
                break;
            };
            iterations += 1;
            let decrement: f64 = -g.iter().zip(&dx).map(|(a, b)| a * b).sum::<f64>();
            if decrement / 2.0 < CENTERING_TOL {
                break;
            }
            // damped Newton: the step 1/(1+δ) stays in the domain of a
            // self-concordant barrier and needs no function comparisons
            let delta = decrement.max(0.0).sqrt();
            let mut step = if delta > 0.25 {
                1.0 / (1.0 + delta)
            } else {
                1.0
            };
            let mut accepted = false;
            for _ in 0..60 {
                let trial: [f64; NVARS] = std::array::from_fn(|k| x[k] + step * dx[k]);
                if problem.feasible(&trial) {
                    x = trial;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                stalled = true;
                break;
            }
        }

        let upper = assemble(&x, false).trace().re;
        if let Some((lower, w)) = problem.dual_bound(&x, t) {
            let better = best.as_ref().is_none_or(|b| upper - lower < b.1 - b.0);
            if better {
                best = Some((lower, upper, x, w));
                idle_rounds = 0;
            } else {
                idle_rounds += 1;
            }
        }
        // once rounding dominates, raising t no longer tightens the bounds
        stalled |= idle_rounds >= MAX_IDLE_ROUNDS;
        let (lower, upper, _, _) = best.as_ref().expect("bounds exist after first centering");
        let gap = upper - lower;
        if gap <= TARGET_GAP || (stalled && gap <= FALLBACK_GAP) {
            break;
        }
        if stalled {
            return Err(Error::Convergence {
                lower: lower.max(0.0),
                upper: *upper,
                iterations,
            });
        }
        t *= T_GROWTH;
    }

    let (lower, upper, x, w) = best.expect("set above");
    if upper > VALUE_CEILING {
        return Err(Error::Convergence {
            lower,
            upper,
            iterations,
        });
    }
    let omega = assemble(&x, false);
    let certificate = omega.scale_real(1.0 / upper);
    Ok(RobustnessResult {
        value: upper,
        lower_bound: lower.max(0.0),
        certificate_state: Some(DensityMatrix::from_matrix_unchecked(certificate)),
        witness: Some(HermitianOp::from_hermitian_unchecked(w)),
        iterations,
    })
}
