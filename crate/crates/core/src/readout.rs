//! Simulated NMR readout: preparatory pulses, the two line intensities of
//! each nucleus, correlation extraction, Pauli-basis tomography and seeded
//! measurement noise.
//!
//! A spectrum of nucleus I measures `a = Tr(ρ Ĩ₋⊗𝕀)` and `b = Tr(ρ Ĩ₋⊗Z̃)`
//! with `I₋ = X − iY` and `Õ = U O U†` for the preparatory pulse `U`. The two
//! lines are related to these by
//!
//! ```text
//! a = low + high,   b = low − high
//! ```
//!
//! Intensities are in units where a fully polarized spin gives `|a| = 1`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::circuits::Gate;
use crate::qmat::{ComplexMatrix, DensityMatrix, Pauli, Spin, C64};
use crate::states::{from_pauli_vector, pauli_vector};
use crate::tolerance::Tolerances;
use crate::witness::CorrelationPair;
use crate::{Error, Result};

const EXPECTATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PulseAxis {
    X,
    Y,
}

impl PulseAxis {
    fn pauli(self) -> Pauli {
        match self {
            PulseAxis::X => Pauli::X,
            PulseAxis::Y => Pauli::Y,
        }
    }
}

/// A hard rotation `exp(−i·angle/2·σ_axis)` on each target spin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    axis: PulseAxis,
    angle: f64,
    targets: Vec<Spin>,
}

impl PulseSpec {
    pub fn new(axis: PulseAxis, angle: f64, targets: &[Spin]) -> Result<Self> {
        if !(angle > 0.0 && angle < 2.0 * PI) {
            return Err(Error::Domain(format!(
                "pulse angle {angle} outside (0, 2π)"
            )));
        }
        if targets.is_empty() {
            return Err(Error::Domain("pulse has no target spin".into()));
        }
        let mut targets = targets.to_vec();
        targets.sort_by_key(|s| matches!(s, Spin::S));
        targets.dedup();
        Ok(PulseSpec {
            axis,
            angle,
            targets,
        })
    }

    /// `(π/2)_y` on spin S: reads `⟨XX⟩` on I and `⟨ZZ⟩` on S.
    pub fn correlation_readout() -> Self {
        PulseSpec::new(PulseAxis::Y, PI / 2.0, &[Spin::S]).expect("valid")
    }

    /// `(π/2)_x` on spin S: reads `⟨YY⟩` on I.
    pub fn yy_readout() -> Self {
        PulseSpec::new(PulseAxis::X, PI / 2.0, &[Spin::S]).expect("valid")
    }

    pub fn axis(&self) -> PulseAxis {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn targets(&self) -> &[Spin] {
        &self.targets
    }
}

fn spin_rotation(axis: PulseAxis, angle: f64) -> ComplexMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    let id = ComplexMatrix::identity(2).expect("dim 2");
    &id.scale_real(c) + &axis.pauli().matrix().scale(C64::new(0.0, -s))
}

/// The 4×4 pulse unitary.
pub fn prep_pulse_unitary(p: &PulseSpec) -> Gate {
    let id = ComplexMatrix::identity(2).expect("dim 2");
    let r = spin_rotation(p.axis, p.angle);
    let on = |spin: Spin| if p.targets.contains(&spin) { r } else { id };
    let u = on(Spin::I).kron(&on(Spin::S)).expect("2x2 factors");
    let axis = match p.axis {
        PulseAxis::X => 'x',
        PulseAxis::Y => 'y',
    };
    let targets: String = p
        .targets
        .iter()
        .map(|s| match s {
            Spin::I => 'I',
            Spin::S => 'S',
        })
        .collect();
    Gate::new(u, format!("({:.4})_{axis}[{targets}]", p.angle)).expect("rotations are unitary")
}

/// Integrated intensities of the two lines of one nucleus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPair {
    pub nucleus: Spin,
    pub line_low: C64,
    pub line_high: C64,
}

impl SpectrumPair {
    /// Lines from `a = Tr(ρ Ĩ₋⊗𝕀)` and `b = Tr(ρ Ĩ₋⊗Z̃)`.
    pub fn from_observables(nucleus: Spin, a: C64, b: C64) -> Self {
        SpectrumPair {
            nucleus,
            line_low: (a + b) / 2.0,
            line_high: (a - b) / 2.0,
        }
    }

    /// `low + high = Tr(ρ Ĩ₋⊗𝕀)`.
    pub fn line_sum(&self) -> C64 {
        self.line_low + self.line_high
    }

    /// `low − high = Tr(ρ Ĩ₋⊗Z̃)`.
    pub fn line_difference(&self) -> C64 {
        self.line_low - self.line_high
    }
}

fn place(nucleus: Spin, observed: &ComplexMatrix, partner: &ComplexMatrix) -> ComplexMatrix {
    match nucleus {
        Spin::I => observed.kron(partner),
        Spin::S => partner.kron(observed),
    }
    .expect("2x2 factors")
}

/// Line intensities of `nucleus` after the optional preparatory pulse.
pub fn simulate_lines(
    rho: &DensityMatrix,
    nucleus: Spin,
    prep: Option<&PulseSpec>,
) -> Result<SpectrumPair> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: rho.dim(),
        });
    }
    let lowering = &Pauli::X.matrix() - &Pauli::Y.matrix().scale(C64::new(0.0, 1.0));
    let id = ComplexMatrix::identity(2)?;
    let mut obs_id = place(nucleus, &lowering, &id);
    let mut obs_z = place(nucleus, &lowering, &Pauli::Z.matrix());
    if let Some(p) = prep {
        let u = prep_pulse_unitary(p);
        obs_id = obs_id.conjugate_by(u.unitary());
        obs_z = obs_z.conjugate_by(u.unitary());
    }
    let a = rho.matrix().trace_product(&obs_id);
    let b = rho.matrix().trace_product(&obs_z);
    Ok(SpectrumPair::from_observables(nucleus, a, b))
}

/// `(⟨XX⟩, ⟨ZZ⟩)` from spectra taken after [`PulseSpec::correlation_readout`].
///
/// Under that pulse `Z_S` is carried to `X_S` and `X_S` to `−Z_S`, so the
/// nucleus-I line difference has real part `⟨XX⟩` and the nucleus-S line
/// difference has real part `−⟨ZZ⟩`.
pub fn read_correlations(spec_i: &SpectrumPair, spec_s: &SpectrumPair) -> Result<CorrelationPair> {
    if spec_i.nucleus != Spin::I || spec_s.nucleus != Spin::S {
        return Err(Error::Domain(
            "read_correlations expects the spectra of nucleus I and nucleus S, in that order"
                .into(),
        ));
    }
    CorrelationPair::new(spec_i.line_difference().re, -spec_s.line_difference().re)
}

/// Full readout pipeline: pulse, both spectra, correlations.
pub fn measure_correlations(rho: &DensityMatrix) -> Result<CorrelationPair> {
    let p = PulseSpec::correlation_readout();
    read_correlations(
        &simulate_lines(rho, Spin::I, Some(&p))?,
        &simulate_lines(rho, Spin::S, Some(&p))?,
    )
}

/// `⟨YY⟩` from the imaginary part of the nucleus-I line difference after
/// [`PulseSpec::yy_readout`] (which carries `Z_S` to `−Y_S`).
pub fn measure_yy(rho: &DensityMatrix) -> Result<f64> {
    let spec = simulate_lines(rho, Spin::I, Some(&PulseSpec::yy_readout()))?;
    Ok(spec.line_difference().im)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyResult {
    pub state: DensityMatrix,
    /// Frobenius distance between the linear inversion and `state`; zero
    /// when no projection was needed.
    pub projection_distance: f64,
}

/// Euclidean projection of `v` onto the probability simplex, as the shift
/// `θ` with `Σ max(vᵢ − θ, 0) = 1`.
fn simplex_shift(v: &[f64]) -> f64 {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let candidate = (cumsum - 1.0) / (j + 1) as f64;
        if uj - candidate > 0.0 {
            theta = candidate;
        }
    }
    theta
}

/// Linear inversion `ρ = ¼(𝕀 + Σ eₖPₖ)` from the 15 Pauli expectations, in
/// [`crate::states::pauli_basis`] order, followed by projection onto the
/// closest state when the inversion is not positive semidefinite.
pub fn pauli_tomography(e: &[f64; 15]) -> Result<TomographyResult> {
    pauli_tomography_with(e, &Tolerances::default())
}

pub fn pauli_tomography_with(e: &[f64; 15], tol: &Tolerances) -> Result<TomographyResult> {
    if let Some((k, v)) = e
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || v.abs() > 1.0 + EXPECTATION_SLACK)
    {
        return Err(Error::Domain(format!(
            "Pauli expectation #{k} = {v} lies outside [-1, 1]"
        )));
    }
    let raw = from_pauli_vector(e);
    let spectrum = raw.eig();
    if spectrum.eigenvalues[0] >= -tol.psd {
        return Ok(TomographyResult {
            state: DensityMatrix::from_matrix_unchecked(*raw.matrix()),
            projection_distance: 0.0,
        });
    }
    let theta = simplex_shift(&spectrum.eigenvalues);
    let projected = spectrum
        .map_eigenvalues(|l| (l - theta).max(0.0))
        .hermitian_part();
    let distance = (raw.matrix() - &projected).frobenius_norm();
    Ok(TomographyResult {
        state: DensityMatrix::from_matrix_unchecked(projected),
        projection_distance: distance,
    })
}

/// `value + N(0, σ²)` from a generator seeded with `seed`, clamped to
/// `[−1, 1]`.
pub fn add_noise(value: f64, sigma: f64, seed: u64) -> Result<f64> {
    let normal = normal(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((value + normal.sample(&mut rng)).clamp(-1.0, 1.0))
}

fn normal(sigma: f64) -> Result<Normal<f64>> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::Domain(format!(
            "noise sigma must be finite and ≥ 0, got {sigma}"
        )));
    }
    Normal::new(0.0, sigma).map_err(|e| Error::Domain(e.to_string()))
}

/// Pauli vector of `rho` with independent noise on each component, all drawn
/// from one generator seeded with `seed`.
pub fn noisy_pauli_vector(rho: &DensityMatrix, sigma: f64, seed: u64) -> Result<[f64; 15]> {
    let normal = normal(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(pauli_vector(rho)?.map(|v| (v + normal.sample(&mut rng)).clamp(-1.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::fidelity;
    use crate::states::{bell_diagonal, bell_state, BellDiagonalParams, BellKind};

    #[test]
    fn pulse_validation() {
        assert!(PulseSpec::new(PulseAxis::X, 0.0, &[Spin::I]).is_err());
        assert!(PulseSpec::new(PulseAxis::X, 2.0 * PI, &[Spin::I]).is_err());
        assert!(PulseSpec::new(PulseAxis::X, 1.0, &[]).is_err());
        let p = PulseSpec::new(PulseAxis::X, PI / 2.0, &[Spin::I]).unwrap();
        let u = prep_pulse_unitary(&p);
        assert!((&u.unitary().adjoint() * u.unitary())
            .approx_eq(&ComplexMatrix::identity(4).unwrap(), 1e-15));
    }

    #[test]
    fn y_pulse_on_s_rotates_z_into_x() {
        let u = prep_pulse_unitary(&PulseSpec::correlation_readout());
        let zs = crate::qmat::pauli_string(Pauli::I, Pauli::Z);
        let xs = crate::qmat::pauli_string(Pauli::I, Pauli::X);
        assert!(zs.conjugate_by(u.unitary()).approx_eq(&xs, 1e-15));
        let twice = u.after(&u);
        assert!(zs
            .conjugate_by(twice.unitary())
            .approx_eq(&zs.scale_real(-1.0), 1e-15));
    }

    #[test]
    fn lines_round_trip() {
        let (a, b) = (C64::new(0.3, -0.1), C64::new(-0.25, 0.4));
        let s = SpectrumPair::from_observables(Spin::I, a, b);
        assert!((s.line_sum() - a).norm() < 1e-15);
        assert!((s.line_difference() - b).norm() < 1e-15);
    }

    #[test]
    fn maximally_mixed_has_no_signal() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        for n in [Spin::I, Spin::S] {
            let s = simulate_lines(&rho, n, Some(&PulseSpec::correlation_readout())).unwrap();
            assert!(s.line_low.norm() < 1e-15 && s.line_high.norm() < 1e-15);
        }
    }

    #[test]
    fn readout_of_reference_states() {
        let cases = [
            (bell_state(BellKind::PhiMinus), (-1.0, 1.0), 1.0),
            (DensityMatrix::maximally_mixed(4).unwrap(), (0.0, 0.0), 0.0),
            (
                bell_diagonal(&BellDiagonalParams::new(-0.2, 1.0, 0.2)).unwrap(),
                (-0.2, 0.2),
                1.0,
            ),
        ];
        for (rho, (xx, zz), yy) in cases {
            let c = measure_correlations(&rho).unwrap();
            assert!(
                (c.w1 - xx).abs() < 1e-12 && (c.w2 - zz).abs() < 1e-12,
                "{c:?}"
            );
            assert!((measure_yy(&rho).unwrap() - yy).abs() < 1e-12);
        }
        let spec = simulate_lines(
            &bell_state(BellKind::PhiMinus),
            Spin::I,
            Some(&PulseSpec::correlation_readout()),
        )
        .unwrap();
        assert!((spec.line_difference().re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn read_correlations_checks_nuclei() {
        let rho = bell_state(BellKind::PhiPlus);
        let s = simulate_lines(&rho, Spin::S, None).unwrap();
        assert!(read_correlations(&s, &s).is_err());
    }

    #[test]
    fn tomography_cases() {
        let t = pauli_tomography(&[0.0; 15]).unwrap();
        assert!(t
            .state
            .matrix()
            .approx_eq(DensityMatrix::maximally_mixed(4).unwrap().matrix(), 0.0));
        assert_eq!(t.projection_distance, 0.0);
        let rho = bell_diagonal(&BellDiagonalParams::new(-0.2, 1.0, 0.2)).unwrap();
        let t = pauli_tomography(&pauli_vector(&rho).unwrap()).unwrap();
        assert!(t.state.matrix().approx_eq(rho.matrix(), 1e-12));
        assert!(pauli_tomography(&[1.5; 15]).is_err());
    }

    #[test]
    fn tomography_projects_unphysical_input() {
        // ⟨XX⟩ = ⟨YY⟩ = ⟨ZZ⟩ = 1 is not a state
        let mut e = [0.0; 15];
        for (k, (a, b)) in crate::states::pauli_basis().iter().enumerate() {
            if a == b {
                e[k] = 1.0;
            }
        }
        let t = pauli_tomography(&e).unwrap();
        assert!(t.projection_distance > 0.1);
        assert!(t.state.op().min_eigenvalue() >= -1e-12);
        assert!((t.state.op().trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_projection() {
        let theta = simplex_shift(&[0.5, 0.5, 0.5, -0.5]);
        assert!((theta - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(simplex_shift(&[0.25; 4]), 0.0);
    }

    #[test]
    fn noise_is_seeded() {
        assert_eq!(add_noise(0.3, 0.0, 5).unwrap(), 0.3);
        assert_eq!(
            add_noise(0.3, 0.1, 7).unwrap(),
            add_noise(0.3, 0.1, 7).unwrap()
        );
        assert_ne!(
            add_noise(0.3, 0.1, 7).unwrap(),
            add_noise(0.3, 0.1, 8).unwrap()
        );
        assert_eq!(add_noise(0.99, 10.0, 1).unwrap().abs(), 1.0);
        assert!(add_noise(0.0, -1.0, 0).is_err());
    }

    #[test]
    fn noisy_tomography_stays_close() {
        let phi = bell_state(BellKind::PhiMinus);
        for seed in 0..20 {
            let e = noisy_pauli_vector(&phi, 0.01, seed).unwrap();
            let t = pauli_tomography(&e).unwrap();
            assert!(fidelity(&t.state, &phi).unwrap() >= 0.98);
        }
    }
}
