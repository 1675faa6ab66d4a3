//! Entanglement witnesses.
//!
//! Two families live here:
//!
//! * the magnetization witness `F = ½ − ¼(1 + |⟨XX⟩|)(1 + |⟨ZZ⟩|)`, a
//!   nonlinear functional of two correlations, so it is evaluated on states
//!   and never assembled as an operator;
//! * the linear witnesses `W = c_I 𝕀 + c_x XX + c_y YY + c_z ZZ`
//!   ([`PauliWitness`]), including the four optimal ones for the Bell states.
//!
//! Negative values certify entanglement. Library predicates treat values in
//! `[−tol, 0)` as non-detection; [`Verdict`] exposes that band separately.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qmat::{expectation, DensityMatrix, HermitianOp, Pauli, Spin};
use crate::states::{is_separable_bd, BellDiagonalParams, BellKind, BD_PHYSICAL_TOL};
use crate::tolerance::Tolerances;
use crate::{Error, Result};

const CORRELATION_SLACK: f64 = 1e-9;

/// `(⟨X_I⊗X_S⟩, ⟨Z_I⊗Z_S⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPair {
    pub w1: f64,
    pub w2: f64,
}

impl CorrelationPair {
    pub fn new(w1: f64, w2: f64) -> Result<Self> {
        for (name, w) in [("<XX>", w1), ("<ZZ>", w2)] {
            if !w.is_finite() || w.abs() > 1.0 + CORRELATION_SLACK {
                return Err(Error::Domain(format!("{name} = {w} lies outside [-1, 1]")));
            }
        }
        Ok(CorrelationPair { w1, w2 })
    }

    pub fn of_state(rho: &DensityMatrix) -> Result<Self> {
        let xx = expectation(rho, &HermitianOp::pauli_string(Pauli::X, Pauli::X))?;
        let zz = expectation(rho, &HermitianOp::pauli_string(Pauli::Z, Pauli::Z))?;
        CorrelationPair::new(xx, zz)
    }
}

/// `F = ½ − ¼(1 + |w1|)(1 + |w2|)`.
pub fn f_witness(corr: &CorrelationPair) -> Result<f64> {
    let corr = CorrelationPair::new(corr.w1, corr.w2)?;
    Ok(0.5 - 0.25 * (1.0 + corr.w1.abs()) * (1.0 + corr.w2.abs()))
}

/// `F` evaluated on the correlations of `rho`.
pub fn f_witness_state(rho: &DensityMatrix) -> Result<f64> {
    f_witness(&CorrelationPair::of_state(rho)?)
}

/// Coefficients of `W = c_I 𝕀 + c_x XX + c_y YY + c_z ZZ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliWitness {
    pub c_i: f64,
    pub c_x: f64,
    pub c_y: f64,
    pub c_z: f64,
}

impl PauliWitness {
    pub const fn new(c_i: f64, c_x: f64, c_y: f64, c_z: f64) -> Self {
        PauliWitness { c_i, c_x, c_y, c_z }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.c_i, self.c_x, self.c_y, self.c_z]
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        PauliWitness::new(c[0], c[1], c[2], c[3])
    }

    /// Eigenvalues of `W` on the Bell basis, in [`BellKind::ALL`] order.
    pub fn bell_eigenvalues(&self) -> [f64; 4] {
        BellKind::ALL.map(|k| {
            let [a, b, c] = k.correlations();
            self.c_i + self.c_x * a + self.c_y * b + self.c_z * c
        })
    }

    /// Eigenvalues of `W^{T_A}` on the Bell basis. Transposing spin I flips
    /// the sign of `Y ⊗ Y` and leaves `XX`, `ZZ` alone.
    pub fn pt_bell_eigenvalues(&self) -> [f64; 4] {
        PauliWitness::new(self.c_i, self.c_x, -self.c_y, self.c_z).bell_eigenvalues()
    }

    pub fn matrix(&self) -> HermitianOp {
        witness_matrix(self)
    }

    /// `W^{T_A} ⪰ 0` and `W ⪯ 𝕀`, both checked on the assembled matrix.
    pub fn is_valid(&self, tol: &Tolerances) -> Result<bool> {
        let w = self.matrix();
        let pt_min = w.partial_transpose(Spin::I)?.min_eigenvalue();
        let w_max = w.max_eigenvalue();
        Ok(pt_min >= -tol.psd && w_max <= 1.0 + tol.psd)
    }
}

impl fmt::Display for PauliWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.c_i, self.c_x, self.c_y, self.c_z
        )
    }
}

/// Assembles the 4×4 matrix of a Pauli witness.
pub fn witness_matrix(w: &PauliWitness) -> HermitianOp {
    let mut m = HermitianOp::identity(4).expect("dim 4").scale(w.c_i);
    for (c, p) in [(w.c_x, Pauli::X), (w.c_y, Pauli::Y), (w.c_z, Pauli::Z)] {
        m = &m + &HermitianOp::pauli_string(p, p).scale(c);
    }
    m
}

/// `c_I + c_x⟨XX⟩ + c_y⟨YY⟩ + c_z⟨ZZ⟩`.
pub fn eval_witness(w: &PauliWitness, rho: &DensityMatrix) -> Result<f64> {
    let mut total = w.c_i;
    for (c, p) in [(w.c_x, Pauli::X), (w.c_y, Pauli::Y), (w.c_z, Pauli::Z)] {
        total += c * expectation(rho, &HermitianOp::pauli_string(p, p))?;
    }
    Ok(total)
}

/// Published optimal witness for each Bell state.
pub fn table1_witness(kind: BellKind) -> PauliWitness {
    match kind {
        BellKind::PhiPlus => PauliWitness::new(0.5, -0.5, 0.5, -0.5),
        BellKind::PsiPlus => PauliWitness::new(0.5, -0.5, -0.5, 0.5),
        BellKind::PhiMinus => PauliWitness::new(0.5, 0.5, -0.5, -0.5),
        BellKind::PsiMinus => PauliWitness::new(0.5, 0.5, 0.5, 0.5),
    }
}

/// Does `F` detect the Bell-diagonal state `c`? True iff
/// `(1 + |c1|)(1 + |c3|) > 2`.
pub fn f_detects_bd(params: &BellDiagonalParams) -> Result<bool> {
    params.check_physical()?;
    Ok((1.0 + params.c1.abs()) * (1.0 + params.c3.abs()) > 2.0)
}

/// Region of a correlation vector in the Bell-diagonal tetrahedron picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BDClass {
    Unphysical,
    Separable,
    EntangledDetectedByF,
    EntangledUndetectedByF,
}

impl BDClass {
    pub const ALL: [BDClass; 4] = [
        BDClass::Unphysical,
        BDClass::Separable,
        BDClass::EntangledDetectedByF,
        BDClass::EntangledUndetectedByF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BDClass::Unphysical => "Unphysical",
            BDClass::Separable => "Separable",
            BDClass::EntangledDetectedByF => "EntangledDetectedByF",
            BDClass::EntangledUndetectedByF => "EntangledUndetectedByF",
        }
    }

    pub fn is_entangled(self) -> bool {
        matches!(
            self,
            BDClass::EntangledDetectedByF | BDClass::EntangledUndetectedByF
        )
    }
}

impl fmt::Display for BDClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BDClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BDClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown class {s:?}")))
    }
}

/// Classifies any real triple; the octahedron boundary is separable.
pub fn classify_bd(params: &BellDiagonalParams) -> BDClass {
    if params.as_array().iter().any(|c| !c.is_finite())
        || params.weights().iter().any(|&l| l < -BD_PHYSICAL_TOL)
    {
        return BDClass::Unphysical;
    }
    if is_separable_bd(params) {
        return BDClass::Separable;
    }
    if (1.0 + params.c1.abs()) * (1.0 + params.c3.abs()) > 2.0 {
        BDClass::EntangledDetectedByF
    } else {
        BDClass::EntangledUndetectedByF
    }
}

/// `resolution³` grid over `[−1, 1]³`, `c1` varying slowest.
pub fn detection_region_grid(resolution: usize) -> Result<Vec<(BellDiagonalParams, BDClass)>> {
    if resolution < 2 {
        return Err(Error::Domain(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let step = 2.0 / (resolution - 1) as f64;
    let axis: Vec<f64> = (0..resolution).map(|k| -1.0 + step * k as f64).collect();
    let mut out = Vec::with_capacity(resolution.pow(3));
    for &c1 in &axis {
        for &c2 in &axis {
            for &c3 in &axis {
                let p = BellDiagonalParams::new(c1, c2, c3);
                out.push((p, classify_bd(&p)));
            }
        }
    }
    Ok(out)
}

/// Three-way reading of a witness value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Detected,
    /// Negative, but within the numerical noise band `[−tol, 0)`.
    Inconclusive,
    NotDetected,
}

impl Verdict {
    pub fn of(value: f64, tol: f64) -> Verdict {
        if value < -tol {
            Verdict::Detected
        } else if value < 0.0 {
            Verdict::Inconclusive
        } else {
            Verdict::NotDetected
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Verdict::Detected => "entanglement detected",
            Verdict::Inconclusive => "inconclusive within numerical noise",
            Verdict::NotDetected => "not detected",
        }
    }
}

/// Library-level detection predicate: strictly below the noise band.
pub fn detects(value: f64, tol: &Tolerances) -> bool {
    Verdict::of(value, tol.psd) == Verdict::Detected
}
