//! State families: thermal two-spin states, pseudo-pure states, the Bell
//! basis and Bell-diagonal states.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qmat::{
    pauli_string, ComplexMatrix, DensityMatrix, HermitianOp, Pauli, Spin, C64, ZERO,
};
use crate::tolerance::Tolerances;
use crate::{Error, Result};

/// Slack on the physicality of Bell-diagonal weights.
pub const BD_PHYSICAL_TOL: f64 = 1e-9;
/// Slack on the octahedron condition `|c1| + |c2| + |c3| ≤ 1`.
pub const OCTAHEDRON_TOL: f64 = 1e-12;

/// The four Bell states, in the row order of the optimal-witness table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PsiPlus,
    PhiMinus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PsiPlus,
        BellKind::PhiMinus,
        BellKind::PsiMinus,
    ];

    /// `Φ± = (|00⟩ ± |11⟩)/√2`, `Ψ± = (|01⟩ ± |10⟩)/√2`.
    pub fn ket(self) -> [C64; 4] {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            BellKind::PhiPlus => [h, ZERO, ZERO, h],
            BellKind::PhiMinus => [h, ZERO, ZERO, -h],
            BellKind::PsiPlus => [ZERO, h, h, ZERO],
            BellKind::PsiMinus => [ZERO, h, -h, ZERO],
        }
    }

    /// `(⟨XX⟩, ⟨YY⟩, ⟨ZZ⟩)` of the state; each entry is ±1.
    pub fn correlations(self) -> [f64; 3] {
        match self {
            BellKind::PhiPlus => [1.0, -1.0, 1.0],
            BellKind::PsiPlus => [1.0, 1.0, -1.0],
            BellKind::PhiMinus => [-1.0, 1.0, 1.0],
            BellKind::PsiMinus => [-1.0, -1.0, -1.0],
        }
    }

    pub fn index(self) -> usize {
        match self {
            BellKind::PhiPlus => 0,
            BellKind::PsiPlus => 1,
            BellKind::PhiMinus => 2,
            BellKind::PsiMinus => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PsiPlus => "psi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" | "phiplus" | "phi_plus" => Ok(BellKind::PhiPlus),
            "psi+" | "psiplus" | "psi_plus" => Ok(BellKind::PsiPlus),
            "phi-" | "phiminus" | "phi_minus" => Ok(BellKind::PhiMinus),
            "psi-" | "psiminus" | "psi_minus" => Ok(BellKind::PsiMinus),
            other => Err(Error::Domain(format!(
                "unknown Bell state {other:?} (expected phi+, psi+, phi-, psi-)"
            ))),
        }
    }
}

/// Rank-1 projector onto a Bell state.
pub fn bell_state(kind: BellKind) -> DensityMatrix {
    DensityMatrix::pure(&kind.ket()).expect("Bell kets are normalized")
}

/// Correlation vector `(c1, c2, c3) = (⟨XX⟩, ⟨YY⟩, ⟨ZZ⟩)` of a Bell-diagonal
/// state `¼(𝕀 + c1 XX + c2 YY + c3 ZZ)`.
///
/// Any real triple can be held; [`check_physical`](Self::check_physical)
/// decides whether it names a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalParams {
    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        BellDiagonalParams { c1, c2, c3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Bell-basis weights `(λΦ+, λΨ+, λΦ−, λΨ−)` without any validation.
    pub fn weights(&self) -> [f64; 4] {
        let (c1, c2, c3) = (self.c1, self.c2, self.c3);
        [
            (1.0 + c1 - c2 + c3) / 4.0,
            (1.0 + c1 + c2 - c3) / 4.0,
            (1.0 - c1 + c2 + c3) / 4.0,
            (1.0 - c1 - c2 - c3) / 4.0,
        ]
    }

    /// Weights, or an error naming the first negative one.
    pub fn check_physical(&self) -> Result<[f64; 4]> {
        for (i, c) in self.as_array().into_iter().enumerate() {
            if !c.is_finite() || c.abs() > 1.0 + BD_PHYSICAL_TOL {
                return Err(Error::Domain(format!(
                    "c{} = {c} lies outside [-1, 1]",
                    i + 1
                )));
            }
        }
        let w = self.weights();
        for (kind, &lambda) in BellKind::ALL.iter().zip(w.iter()) {
            if lambda < -BD_PHYSICAL_TOL {
                return Err(Error::Unphysical {
                    label: kind.name(),
                    eigenvalue: lambda,
                });
            }
        }
        Ok(w)
    }

    pub fn is_physical(&self) -> bool {
        self.check_physical().is_ok()
    }

    pub fn l1_norm(&self) -> f64 {
        self.c1.abs() + self.c2.abs() + self.c3.abs()
    }
}

impl fmt::Display for BellDiagonalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c1, self.c2, self.c3)
    }
}

/// `ρ = ¼(𝕀 + c1·XX + c2·YY + c3·ZZ)`.
pub fn bell_diagonal(params: &BellDiagonalParams) -> Result<DensityMatrix> {
    params.check_physical()?;
    let mut m = ComplexMatrix::identity(4)?;
    for (c, p) in params
        .as_array()
        .into_iter()
        .zip([Pauli::X, Pauli::Y, Pauli::Z])
    {
        m = &m + &pauli_string(p, p).scale_real(c);
    }
    DensityMatrix::from_matrix(m.scale_real(0.25))
}

/// Bell-basis weights `(λΦ+, λΨ+, λΦ−, λΨ−)`, summing to one.
pub fn bell_probabilities(params: &BellDiagonalParams) -> Result<[f64; 4]> {
    params.check_physical()
}

/// Octahedron test `|c1| + |c2| + |c3| ≤ 1`; exact for Bell-diagonal states.
/// The boundary counts as separable.
pub fn is_separable_bd(params: &BellDiagonalParams) -> bool {
    params.l1_norm() <= 1.0 + OCTAHEDRON_TOL
}

/// PPT test; exact separability criterion for two qubits.
pub fn is_ppt(rho: &DensityMatrix, tol: &Tolerances) -> Result<bool> {
    Ok(rho.partial_transpose(Spin::I)?.min_eigenvalue() >= -tol.psd)
}

/// Spin polarizations of the thermal two-spin ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    pub eps_i: f64,
    pub eps_s: f64,
}

impl ThermalParams {
    pub fn new(eps_i: f64, eps_s: f64) -> Result<Self> {
        for (name, e) in [("eps_I", eps_i), ("eps_S", eps_s)] {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::Domain(format!("{name} = {e} lies outside [0, 1]")));
            }
        }
        Ok(ThermalParams { eps_i, eps_s })
    }

    pub fn eps(&self, spin: Spin) -> f64 {
        match spin {
            Spin::I => self.eps_i,
            Spin::S => self.eps_s,
        }
    }

    /// Population of `|0⟩`, `(1 + ε)/2`.
    pub fn p(&self, spin: Spin) -> f64 {
        (1.0 + self.eps(spin)) / 2.0
    }

    /// Population of `|1⟩`, `(1 − ε)/2`.
    pub fn q(&self, spin: Spin) -> f64 {
        (1.0 - self.eps(spin)) / 2.0
    }
}

/// `(p_I|0⟩⟨0| + q_I|1⟩⟨1|) ⊗ (p_S|0⟩⟨0| + q_S|1⟩⟨1|)`.
pub fn thermal_state(params: &ThermalParams) -> DensityMatrix {
    let (pi, qi) = (params.p(Spin::I), params.q(Spin::I));
    let (ps, qs) = (params.p(Spin::S), params.q(Spin::S));
    let m = ComplexMatrix::from_real_diagonal(&[pi * ps, pi * qs, qi * ps, qi * qs])
        .expect("4 entries");
    DensityMatrix::from_matrix_unchecked(m)
}

/// `(1 − ε)/4 · 𝕀 + ε ρ₁`.
pub fn pseudo_pure(eps: f64, rho1: &DensityMatrix) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("eps = {eps} lies outside [0, 1]")));
    }
    if rho1.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: rho1.dim(),
        });
    }
    let mixed = ComplexMatrix::identity(4)?.scale_real((1.0 - eps) / 4.0);
    let m = &mixed + &rho1.matrix().scale_real(eps);
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// The 15 non-identity two-qubit Pauli strings in lexicographic order
/// `IX, IY, IZ, XI, XX, …, ZZ`.
pub fn pauli_basis() -> [(Pauli, Pauli); 15] {
    let mut out = [(Pauli::I, Pauli::I); 15];
    let mut k = 0;
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            if (a, b) == (Pauli::I, Pauli::I) {
                continue;
            }
            out[k] = (a, b);
            k += 1;
        }
    }
    out
}

pub fn pauli_labels() -> [String; 15] {
    pauli_basis().map(|(a, b)| format!("{}{}", a.label(), b.label()))
}

/// Expectations of the 15 non-identity Pauli strings.
pub fn pauli_vector(rho: &DensityMatrix) -> Result<[f64; 15]> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: rho.dim(),
        });
    }
    let mut out = [0.0; 15];
    for (slot, (a, b)) in out.iter_mut().zip(pauli_basis()) {
        *slot = rho.matrix().trace_product(&pauli_string(a, b)).re;
    }
    Ok(out)
}

/// `¼(𝕀 + Σ eₖ Pₖ)`, the inverse of [`pauli_vector`]. The result has unit
/// trace but is positive only when `e` comes from a state.
pub fn from_pauli_vector(e: &[f64; 15]) -> HermitianOp {
    let mut m = ComplexMatrix::identity(4).expect("dim 4");
    for (&ek, (a, b)) in e.iter().zip(pauli_basis()) {
        if ek != 0.0 {
            m = &m + &pauli_string(a, b).scale_real(ek);
        }
    }
    HermitianOp::from_hermitian_unchecked(m.scale_real(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::expectation;

    fn corr(rho: &DensityMatrix) -> [f64; 3] {
        [Pauli::X, Pauli::Y, Pauli::Z]
            .map(|p| expectation(rho, &HermitianOp::pauli_string(p, p)).unwrap())
    }

    #[test]
    fn bell_kets_are_orthonormal() {
        for a in BellKind::ALL {
            for b in BellKind::ALL {
                let ip: C64 = a.ket().iter().zip(b.ket()).map(|(x, y)| x.conj() * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip.re - want).abs() < 1e-15 && ip.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bell_state_phi_minus_matrix() {
        let rho = bell_state(BellKind::PhiMinus);
        let m = rho.matrix();
        assert!((m.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((m.get(3, 3).re - 0.5).abs() < 1e-15);
        assert!((m.get(0, 3).re + 0.5).abs() < 1e-15);
        assert!((m.get(3, 0).re + 0.5).abs() < 1e-15);
        assert_eq!(m.get(1, 1), ZERO);
    }

    #[test]
    fn bell_state_correlations_and_purity() {
        assert_eq!(
            corr(&bell_state(BellKind::PhiPlus)).map(f64::round),
            [1.0, -1.0, 1.0]
        );
        for kind in BellKind::ALL {
            let rho = bell_state(kind);
            assert!((rho.op().trace() - 1.0).abs() < 1e-15);
            assert!((rho.purity() - 1.0).abs() < 1e-14);
            let c = corr(&rho);
            for (a, b) in c.iter().zip(kind.correlations()) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn bell_diagonal_cases() {
        let mixed = bell_diagonal(&BellDiagonalParams::new(0.0, 0.0, 0.0)).unwrap();
        assert!(mixed
            .matrix()
            .approx_eq(DensityMatrix::maximally_mixed(4).unwrap().matrix(), 1e-15));

        let phi_minus = bell_diagonal(&BellDiagonalParams::new(-1.0, 1.0, 1.0)).unwrap();
        assert!(phi_minus
            .matrix()
            .approx_eq(bell_state(BellKind::PhiMinus).matrix(), 1e-15));

        let err = bell_diagonal(&BellDiagonalParams::new(1.0, 1.0, 1.0)).unwrap_err();
        match err {
            Error::Unphysical { label, eigenvalue } => {
                assert_eq!(label, "psi-");
                assert!((eigenvalue + 0.5).abs() < 1e-15);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bell_diagonal_reproduces_correlations() {
        let p = BellDiagonalParams::new(-0.2, 1.0, 0.2);
        let c = corr(&bell_diagonal(&p).unwrap());
        for (a, b) in c.iter().zip(p.as_array()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn bell_probability_cases() {
        let w = bell_probabilities(&BellDiagonalParams::new(-0.2, 1.0, 0.2)).unwrap();
        for (a, b) in w.iter().zip([0.0, 0.4, 0.6, 0.0]) {
            assert!((a - b).abs() < 1e-15, "{w:?}");
        }
        assert_eq!(
            bell_probabilities(&BellDiagonalParams::new(0.0, 0.0, 0.0)).unwrap(),
            [0.25; 4]
        );
        assert_eq!(
            bell_probabilities(&BellDiagonalParams::new(-1.0, 1.0, 1.0)).unwrap(),
            [0.0, 0.0, 1.0, 0.0]
        );
        assert!(bell_probabilities(&BellDiagonalParams::new(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn weights_are_the_spectrum() {
        let p = BellDiagonalParams::new(-0.2, 1.0, 0.2);
        let ev = bell_diagonal(&p).unwrap().op().eigenvalues();
        for (a, b) in ev.iter().zip([0.0, 0.0, 0.4, 0.6]) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn octahedron_cases() {
        assert!(is_separable_bd(&BellDiagonalParams::new(0.0, 0.0, 0.0)));
        assert!(!is_separable_bd(&BellDiagonalParams::new(-1.0, 1.0, 1.0)));
        assert!(!is_separable_bd(&BellDiagonalParams::new(-0.2, 1.0, 0.2)));
        assert!(is_separable_bd(&BellDiagonalParams::new(0.5, 0.0, -0.5)));
    }

    #[test]
    fn thermal_state_cases() {
        let full = thermal_state(&ThermalParams::new(1.0, 1.0).unwrap());
        let want = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(full.matrix().approx_eq(&want, 0.0));

        let none = thermal_state(&ThermalParams::new(0.0, 0.0).unwrap());
        assert!(none
            .matrix()
            .approx_eq(DensityMatrix::maximally_mixed(4).unwrap().matrix(), 0.0));

        let eps = 1e-5;
        let nmr = thermal_state(&ThermalParams::new(eps, eps).unwrap());
        let p = (1.0 + eps) / 2.0;
        let q = (1.0 - eps) / 2.0;
        let d: Vec<f64> = (0..4).map(|i| nmr.matrix().get(i, i).re).collect();
        assert_eq!(d, vec![p * p, p * q, q * p, q * q]);

        let t = ThermalParams::new(0.3, 0.7).unwrap();
        let reduced = thermal_state(&t).partial_trace(Spin::I).unwrap();
        let want = ComplexMatrix::from_real_diagonal(&[0.65, 0.35]).unwrap();
        assert!(reduced.matrix().approx_eq(&want, 1e-15));

        assert!(ThermalParams::new(1.5, 0.0).is_err());
    }

    #[test]
    fn pseudo_pure_cases() {
        let phi = bell_state(BellKind::PhiMinus);
        assert!(pseudo_pure(1.0, &phi)
            .unwrap()
            .matrix()
            .approx_eq(phi.matrix(), 0.0));
        assert!(pseudo_pure(0.0, &phi)
            .unwrap()
            .matrix()
            .approx_eq(DensityMatrix::maximally_mixed(4).unwrap().matrix(), 0.0));
        let nmr = pseudo_pure(1e-5, &phi).unwrap();
        assert!(is_ppt(&nmr, &Tolerances::default()).unwrap());
        assert!(!is_ppt(&phi, &Tolerances::default()).unwrap());
        assert!(pseudo_pure(-0.1, &phi).is_err());
    }

    #[test]
    fn pauli_vector_cases() {
        assert_eq!(
            pauli_vector(&DensityMatrix::maximally_mixed(4).unwrap()).unwrap(),
            [0.0; 15]
        );

        let labels = pauli_labels();
        let p = BellDiagonalParams::new(0.3, -0.1, 0.2);
        let v = pauli_vector(&bell_diagonal(&p).unwrap()).unwrap();
        for (label, value) in labels.iter().zip(v) {
            let want = match label.as_str() {
                "XX" => 0.3,
                "YY" => -0.1,
                "ZZ" => 0.2,
                _ => 0.0,
            };
            assert!((value - want).abs() < 1e-15, "{label}");
        }

        let k00 = thermal_state(&ThermalParams::new(1.0, 1.0).unwrap());
        let v = pauli_vector(&k00).unwrap();
        for (label, value) in labels.iter().zip(v) {
            let want = if ["IZ", "ZI", "ZZ"].contains(&label.as_str()) {
                1.0
            } else {
                0.0
            };
            assert_eq!(value, want, "{label}");
        }
        assert_eq!(labels[0], "IX");
        assert_eq!(labels[14], "ZZ");
    }

    #[test]
    fn bell_kind_parsing() {
        for kind in BellKind::ALL {
            assert_eq!(kind.name().parse::<BellKind>().unwrap(), kind);
        }
        assert!("bell".parse::<BellKind>().is_err());
    }
}
