//! T1/T2 relaxation of two independent spins and time sweeps of the
//! entanglement quantities.
//!
//! Each spin relaxes under generalized amplitude damping toward the maximally
//! mixed state (rate `1/T1` on the Bloch `z` component) followed by pure
//! dephasing, tuned so that transverse components decay at `1/T2`:
//!
//! ```text
//! x, y → x, y · e^{−t/T2}        z → z · e^{−t/T1}
//! ```

use serde::{Deserialize, Serialize};

use crate::optim::generalized_robustness;
use crate::qmat::{ComplexMatrix, DensityMatrix, C64};
use crate::witness::{eval_witness, f_witness_state, PauliWitness};
use crate::{Error, Result};

/// Longitudinal time used when only T2 is known, in seconds.
pub const DEFAULT_T1: f64 = 10.0;
/// Transverse relaxation of the proton in the reference sample, seconds.
pub const T2_HYDROGEN: f64 = 0.31;
/// Transverse relaxation of the carbon in the reference sample, seconds.
pub const T2_CARBON: f64 = 0.11;
/// GR below this counts as zero when locating the end of detection.
pub const GR_FLOOR: f64 = 1e-6;
/// Fit window: points below this fraction of the initial magnitude are dropped.
pub const FIT_FRACTION: f64 = 1e-3;
/// Equilibrium value of a Pauli witness on `𝕀/4` with `c_I = ½`.
const W_EQUILIBRIUM: f64 = 0.5;

/// Relaxation times in seconds. `t1_*` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationParams {
    pub t1_i: f64,
    pub t2_i: f64,
    pub t1_s: f64,
    pub t2_s: f64,
}

impl RelaxationParams {
    pub fn new(t1_i: f64, t2_i: f64, t1_s: f64, t2_s: f64) -> Result<Self> {
        for (name, t1, t2) in [("I", t1_i, t2_i), ("S", t1_s, t2_s)] {
            if t1.is_nan() || t1 <= 0.0 {
                return Err(Error::Domain(format!(
                    "T1 of spin {name} must be positive, got {t1}"
                )));
            }
            if !(t2.is_finite() && t2 > 0.0) {
                return Err(Error::Domain(format!(
                    "T2 of spin {name} must be positive and finite, got {t2}"
                )));
            }
            if t2 > 2.0 * t1 {
                return Err(Error::Domain(format!(
                    "spin {name}: T2 = {t2} s exceeds 2·T1 = {} s",
                    2.0 * t1
                )));
            }
        }
        Ok(RelaxationParams {
            t1_i,
            t2_i,
            t1_s,
            t2_s,
        })
    }

    /// Both T1 at [`DEFAULT_T1`].
    pub fn with_t2(t2_i: f64, t2_s: f64) -> Result<Self> {
        RelaxationParams::new(DEFAULT_T1, t2_i, DEFAULT_T1, t2_s)
    }

    /// The reference sample: T2 = 0.31 s (¹H) and 0.11 s (¹³C).
    pub fn reference_sample() -> Self {
        RelaxationParams::with_t2(T2_HYDROGEN, T2_CARBON).expect("valid constants")
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn mat2(a: f64, b: f64, cc: f64, d: f64) -> ComplexMatrix {
    ComplexMatrix::from_slice(2, &[c(a), c(b), c(cc), c(d)]).expect("2x2")
}

/// Kraus operators of the single-spin channel after time `t`.
pub fn spin_kraus(t: f64, t1: f64, t2: f64) -> Vec<ComplexMatrix> {
    let gamma = if t1.is_infinite() {
        0.0
    } else {
        1.0 - (-t / t1).exp()
    };
    let rate_phi = 1.0 / t2 - if t1.is_infinite() { 0.0 } else { 0.5 / t1 };
    let kappa = (-t * rate_phi).exp();
    let h = 0.5f64.sqrt();
    let keep = (1.0 - gamma).sqrt();
    let g = gamma.sqrt();
    let damping = [
        mat2(h, 0.0, 0.0, h * keep),
        mat2(0.0, h * g, 0.0, 0.0),
        mat2(h * keep, 0.0, 0.0, h),
        mat2(0.0, 0.0, h * g, 0.0),
    ];
    let a = ((1.0 + kappa) / 2.0).sqrt();
    let b = ((1.0 - kappa) / 2.0).sqrt();
    let dephasing = [mat2(a, 0.0, 0.0, a), mat2(b, 0.0, 0.0, -b)];
    let mut out = Vec::with_capacity(8);
    for p in &dephasing {
        for k in &damping {
            out.push(p * k);
        }
    }
    out
}

fn apply_kraus(rho: &ComplexMatrix, ops: &[ComplexMatrix]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(rho.dim()).expect("same dim");
    for k in ops {
        acc = &acc + &rho.conjugate_by(k);
    }
    acc
}

/// Relaxes a two-spin state for `t` seconds.
pub fn relax_channel(rho: &DensityMatrix, t: f64, p: &RelaxationParams) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: rho.dim(),
        });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!(
            "relaxation time must be finite and ≥ 0, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(*rho);
    }
    let id = ComplexMatrix::identity(2)?;
    let on_i: Vec<ComplexMatrix> = spin_kraus(t, p.t1_i, p.t2_i)
        .iter()
        .map(|k| k.kron(&id))
        .collect::<Result<_>>()?;
    let on_s: Vec<ComplexMatrix> = spin_kraus(t, p.t1_s, p.t2_s)
        .iter()
        .map(|k| id.kron(k))
        .collect::<Result<_>>()?;
    let out = apply_kraus(&apply_kraus(rho.matrix(), &on_i), &on_s);
    Ok(DensityMatrix::from_matrix_unchecked(out.hermitian_part()))
}

/// Quantities recorded along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    F,
    W,
    GR,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub times: Vec<f64>,
    pub f_values: Vec<f64>,
    pub w_values: Vec<f64>,
    pub gr_values: Vec<f64>,
    /// First zero crossing of `F`.
    pub tau_c: Option<f64>,
    /// 1/e time of the fitted GR decay.
    pub tau_r: Option<f64>,
    /// 1/e time of the fitted decay of `|W − ½|`.
    pub tau_w: Option<f64>,
}

impl SweepSeries {
    pub fn values(&self, q: Quantity) -> &[f64] {
        match q {
            Quantity::F => &self.f_values,
            Quantity::W => &self.w_values,
            Quantity::GR => &self.gr_values,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Last grid time with `GR > GR_FLOOR`.
    pub fn last_gr_detection(&self) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.gr_values)
            .rev()
            .find(|(_, &g)| g > GR_FLOOR)
            .map(|(&t, _)| t)
    }
}

/// Relaxes `rho0` on a uniform grid of `steps` points over `[0, t_max]` and
/// records `F`, `⟨W⟩` and GR at each point.
pub fn sweep(
    rho0: &DensityMatrix,
    p: &RelaxationParams,
    w: &PauliWitness,
    t_max: f64,
    steps: usize,
) -> Result<SweepSeries> {
    if steps < 2 {
        return Err(Error::Domain(format!(
            "a sweep needs at least 2 steps, got {steps}"
        )));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::Domain(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let times: Vec<f64> = (0..steps)
        .map(|k| t_max * k as f64 / (steps - 1) as f64)
        .collect();
    let mut f_values = Vec::with_capacity(steps);
    let mut w_values = Vec::with_capacity(steps);
    let mut gr_values = Vec::with_capacity(steps);
    for &t in &times {
        let at = |e: Error| Error::AtTime {
            time: t,
            source: Box::new(e),
        };
        let rho = relax_channel(rho0, t, p).map_err(at)?;
        f_values.push(f_witness_state(&rho).map_err(at)?);
        w_values.push(eval_witness(w, &rho).map_err(at)?);
        gr_values.push(generalized_robustness(&rho).map_err(at)?.value);
    }
    let w_excess: Vec<f64> = w_values.iter().map(|v| (v - W_EQUILIBRIUM).abs()).collect();
    let mut series = SweepSeries {
        tau_r: decay_time(&times, &gr_values),
        tau_w: decay_time(&times, &w_excess),
        times,
        f_values,
        w_values,
        gr_values,
        tau_c: None,
    };
    series.tau_c = crossing_time(&series, Quantity::F);
    Ok(series)
}

/// First sign change of `F` or `W`, or first descent of GR below
/// [`GR_FLOOR`], linearly interpolated between grid points.
pub fn crossing_time(series: &SweepSeries, q: Quantity) -> Option<f64> {
    let v = series.values(q);
    let t = &series.times;
    let level = if q == Quantity::GR { GR_FLOOR } else { 0.0 };
    for k in 0..v.len().saturating_sub(1) {
        let (a, b) = (v[k] - level, v[k + 1] - level);
        let crosses = match q {
            Quantity::GR => a > 0.0 && b <= 0.0,
            _ => (a < 0.0) != (b < 0.0),
        };
        if crosses {
            let frac = if a == b { 0.0 } else { a / (a - b) };
            return Some(t[k] + frac * (t[k + 1] - t[k]));
        }
    }
    None
}

/// `τ` of a least-squares fit of `ln y = ln A − t/τ` over the points where
/// `y` exceeds [`FIT_FRACTION`] of `|y(0)|`.
pub fn decay_time(times: &[f64], values: &[f64]) -> Option<f64> {
    let y0 = values.first()?.abs();
    if y0 == 0.0 {
        return None;
    }
    let (ts, ls): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(values)
        .filter(|(_, &y)| y > FIT_FRACTION * y0)
        .map(|(&t, &y)| (t, y.ln()))
        .unzip();
    if ts.len() < 2 {
        return None;
    }
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let ml = ls.iter().sum::<f64>() / n;
    let sxy: f64 = ts.iter().zip(&ls).map(|(t, l)| (t - mt) * (l - ml)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    let slope = sxy / sxx;
    (slope < 0.0).then(|| -1.0 / slope)
}
