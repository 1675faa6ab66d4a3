//! Entanglement detection for two-qubit (NMR) systems.
//!
//! The crate covers the full chain from a thermal two-spin ensemble to an
//! entanglement verdict:
//!
//! - [`qmat`]: dense 2×2 / 4×4 complex Hermitian algebra, partial transpose,
//!   Jacobi eigensolver.
//! - [`states`]: thermal, pseudo-pure, Bell and Bell-diagonal states.
//! - [`circuits`]: superdense coding and the prepared-state pipeline at the
//!   unitary/channel level.
//! - [`witness`]: the nonlinear magnetization witness `F`, the Pauli-string
//!   witness family `W` and the Bell-diagonal detection map.
//! - [`optim`]: the witness-optimality linear program and the generalized
//!   robustness of entanglement.
//! - [`relax`]: T1/T2 relaxation channel and time sweeps.
//! - [`readout`]: NMR line intensities, correlation readout, Pauli tomography.
//! - [`cli`]: the `witnesslab` command-line front end.
//!
//! Spin `I` (the proton) is always the left tensor factor.

pub mod circuits;
pub mod cli;
mod error;
pub mod optim;
pub mod qmat;
pub mod readout;
pub mod relax;
pub mod states;
pub mod tolerance;
pub mod witness;

pub use error::{Error, Result};
pub use qmat::{ComplexMatrix, DensityMatrix, HermitianOp, Spectrum, Spin};
pub use states::{BellDiagonalParams, BellKind, ThermalParams};
pub use tolerance::Tolerances;
pub use witness::{BDClass, CorrelationPair, PauliWitness};
