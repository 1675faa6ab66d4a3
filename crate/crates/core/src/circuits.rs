//! Gate-level simulation of superdense coding and of the sequence that
//! prepares the entangled state missed by `F`.

use serde::Serialize;

use crate::qmat::{pauli_string, ComplexMatrix, DensityMatrix, Pauli, C64, ONE, ZERO};
use crate::states::{thermal_state, BellKind, ThermalParams};
use crate::{Error, Result};

const UNITARITY_TOL: f64 = 1e-10;

/// Weight of `|00⟩` in the state produced by the optimized control pulse.
pub const GRAPE_WEIGHT_00: f64 = 0.6;

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    unitary: ComplexMatrix,
    label: String,
}

impl Gate {
    /// Fails when `U†U` differs from the identity by more than `1e-10`.
    pub fn new(unitary: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let id = ComplexMatrix::identity(unitary.dim())?;
        let defect = (&unitary.adjoint() * &unitary).max_abs_diff(&id);
        if defect > UNITARITY_TOL {
            return Err(Error::Numerical(format!(
                "gate is not unitary (|U†U - 1| = {defect:.3e})"
            )));
        }
        Ok(Gate {
            unitary,
            label: label.into(),
        })
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    pub fn adjoint(&self) -> Gate {
        Gate {
            unitary: self.unitary.adjoint(),
            label: format!("{}†", self.label),
        }
    }

    /// `self` after `first`, i.e. the unitary `self · first`.
    pub fn after(&self, first: &Gate) -> Gate {
        Gate {
            unitary: &self.unitary * &first.unitary,
            label: format!("{}·{}", self.label, first.label),
        }
    }

    /// `U ρ U†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        Ok(DensityMatrix::from_matrix_unchecked(
            rho.matrix().conjugate_by(&self.unitary),
        ))
    }

    pub fn apply_ket(&self, ket: &[C64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|r| (0..n).map(|c| self.unitary.get(r, c) * ket[c]).sum())
            .collect()
    }
}

fn gate_from_columns(columns: [[C64; 4]; 4], label: &str) -> Gate {
    let mut m = ComplexMatrix::zeros(4).expect("dim 4");
    for (c, col) in columns.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            m.set(r, c, v);
        }
    }
    Gate::new(m, label).expect("columns are an orthonormal basis")
}

fn basis_ket(index: usize) -> [C64; 4] {
    let mut k = [ZERO; 4];
    k[index] = ONE;
    k
}

/// `CNOT · (H ⊗ 𝕀)` with spin I as control: `|ab⟩ ↦ (|0,b⟩ + (−1)^a |1,b⊕1⟩)/√2`.
pub fn epr_gate() -> Gate {
    gate_from_columns(
        [
            BellKind::PhiPlus.ket(),
            BellKind::PsiPlus.ket(),
            BellKind::PhiMinus.ket(),
            BellKind::PsiMinus.ket(),
        ],
        "EPR",
    )
}

/// The NMR pseudo-EPR gate: `|00⟩→Φ−`, `|01⟩→Ψ−`, `|10⟩→Φ+`, `|11⟩→Ψ+`.
///
/// Only the images of `|00⟩` and `|11⟩` are fixed by the prepared target
/// state; the other two columns are a choice that makes the gate equal to
/// `EPR · (X ⊗ 𝕀)`.
pub fn pseudo_epr() -> Gate {
    gate_from_columns(
        [
            BellKind::PhiMinus.ket(),
            BellKind::PsiMinus.ket(),
            BellKind::PhiPlus.ket(),
            BellKind::PsiPlus.ket(),
        ],
        "pseudo-EPR",
    )
}

/// Two classical bits sent through one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Message {
    pub x: bool,
    pub z: bool,
}

impl Message {
    pub const ALL: [Message; 4] = [
        Message { x: false, z: false },
        Message { x: false, z: true },
        Message { x: true, z: false },
        Message { x: true, z: true },
    ];

    pub fn new(x: bool, z: bool) -> Self {
        Message { x, z }
    }

    /// From integer bits; anything other than 0 or 1 is rejected.
    pub fn from_bits(x: u8, z: u8) -> Result<Self> {
        let bit = |v: u8, name: &str| match v {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(Error::Domain(format!(
                "message bit {name} = {v} is not 0 or 1"
            ))),
        };
        Ok(Message {
            x: bit(x, "x")?,
            z: bit(z, "z")?,
        })
    }

    pub fn bits(&self) -> (u8, u8) {
        (self.x as u8, self.z as u8)
    }
}

/// `(Xˣ Zᶻ) ⊗ 𝕀`, acting on spin I only.
pub fn message_operator(m: Message) -> Gate {
    let mut u = ComplexMatrix::identity(2).expect("dim 2");
    if m.z {
        u = &Pauli::Z.matrix() * &u;
    }
    if m.x {
        u = &Pauli::X.matrix() * &u;
    }
    let full = u.kron(&Pauli::I.matrix()).expect("2x2 factors");
    let (x, z) = m.bits();
    Gate::new(full, format!("U{x}{z}")).expect("Pauli products are unitary")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperdenseRun {
    /// State after the EPR gate; Bell-diagonal for every thermal input.
    pub rho1: DensityMatrix,
    /// State after message encoding and decoding by the inverse EPR gate.
    pub rho_f: DensityMatrix,
    /// `⟨Z ⊗ 𝕀⟩` on `rho_f`; equals `(−1)ᶻ ε_I`.
    pub mz_i: f64,
    /// `⟨𝕀 ⊗ Z⟩` on `rho_f`; equals `(−1)ˣ ε_S`.
    pub mz_s: f64,
}

/// Runs the superdense-coding circuit on the thermal ensemble.
pub fn superdense_run(thermal: &ThermalParams, m: Message) -> Result<SuperdenseRun> {
    let epr = epr_gate();
    let rho1 = epr.apply(&thermal_state(thermal))?;
    let encoded = message_operator(m).apply(&rho1)?;
    let rho_f = epr.adjoint().apply(&encoded)?;
    let mz_i = rho_f
        .matrix()
        .trace_product(&pauli_string(Pauli::Z, Pauli::I))
        .re;
    let mz_s = rho_f
        .matrix()
        .trace_product(&pauli_string(Pauli::I, Pauli::Z))
        .re;
    Ok(SuperdenseRun {
        rho1,
        rho_f,
        mz_i,
        mz_s,
    })
}

/// Reads the message from the final magnetizations: `z` from the sign of
/// `⟨Z_I⟩`, `x` from the sign of `⟨Z_S⟩`. `None` when either magnitude is
/// within `tol` of zero.
pub fn decode_message(mz_i: f64, mz_s: f64, tol: f64) -> Option<Message> {
    if mz_i.abs() <= tol || mz_s.abs() <= tol {
        return None;
    }
    Some(Message {
        x: mz_s < 0.0,
        z: mz_i < 0.0,
    })
}

/// Probabilities of the computational-basis outcomes `|00⟩ … |11⟩`.
pub fn computational_probabilities(rho: &DensityMatrix) -> Vec<f64> {
    (0..rho.dim()).map(|i| rho.matrix().get(i, i).re).collect()
}

/// Abstract stand-in for the optimized control pulse: a rotation inside
/// `span{|00⟩, |11⟩}` with `|00⟩ ↦ √0.6|00⟩ + √0.4|11⟩`, identity on the rest.
pub fn grape_unitary() -> Gate {
    let a = C64::new(GRAPE_WEIGHT_00.sqrt(), 0.0);
    let b = C64::new((1.0 - GRAPE_WEIGHT_00).sqrt(), 0.0);
    gate_from_columns(
        [
            [a, ZERO, ZERO, b],
            basis_ket(1),
            basis_ket(2),
            [-b, ZERO, ZERO, a],
        ],
        "GRAPE",
    )
}

/// Field-gradient crusher: keeps only the computational-basis populations.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let diag: Vec<f64> = computational_probabilities(rho);
    DensityMatrix::from_matrix_unchecked(
        ComplexMatrix::from_real_diagonal(&diag).expect("dim from state"),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrapeStages {
    pub pseudo_pure: DensityMatrix,
    pub after_grape: DensityMatrix,
    pub dephased: DensityMatrix,
    pub output: DensityMatrix,
}

/// Every intermediate state of the preparation sequence. The pseudo-pure
/// stage is taken to emit `|00⟩⟨00|` directly.
pub fn grape_pipeline_stages() -> GrapeStages {
    let pseudo_pure = DensityMatrix::pure(&basis_ket(0)).expect("basis ket");
    let after_grape = grape_unitary().apply(&pseudo_pure).expect("dim 4");
    let dephased = dephase(&after_grape);
    let output = pseudo_epr().apply(&dephased).expect("dim 4");
    GrapeStages {
        pseudo_pure,
        after_grape,
        dephased,
        output,
    }
}

/// `|00⟩ → GRAPE → crusher → pseudo-EPR`; yields the Bell-diagonal state
/// with `c = (−0.2, 1.0, 0.2)`.
pub fn grape_target_pipeline() -> DensityMatrix {
    grape_pipeline_stages().output
}
