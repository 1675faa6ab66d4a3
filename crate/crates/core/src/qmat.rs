//! Dense complex matrices of dimension 2 and 4.
//!
//! Storage is a fixed 16-entry row-major buffer; a 2×2 matrix uses the first
//! four slots with stride 2. Every operator in the crate (states, witnesses,
//! observables, gates) is carried by [`ComplexMatrix`], wrapped in
//! [`HermitianOp`] or [`DensityMatrix`] when those invariants are required.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::tolerance::Tolerances;
use crate::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I_UNIT: C64 = C64::new(0.0, 1.0);

const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 64;

/// One of the two spins. `I` is the left tensor factor, `S` the right one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Spin {
    I,
    S,
}

/// Single-qubit Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let e = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I_UNIT, I_UNIT, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::from_slice(2, &e).expect("static 2x2")
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: 4,
            found: dim,
        })
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(ComplexMatrix {
            dim,
            data: [ZERO; 16],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        Ok(m)
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let mut data = [ZERO; 16];
        data[..entries.len()].copy_from_slice(entries);
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, C64::new(d, 0.0));
        }
        Ok(m)
    }

    /// Outer product `|v⟩⟨v|`.
    pub fn projector(v: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(v.len())?;
        for r in 0..v.len() {
            for c in 0..v.len() {
                m.set(r, c, v[r] * v[c].conj());
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.dim + c] = v;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(r, c, self.get(c, r).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(r, c, self.get(c, r));
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Matrix product; fails on dimension mismatch.
    pub fn try_mul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &ComplexMatrix) -> Self {
        let n = self.dim;
        let mut out = ComplexMatrix {
            dim: n,
            data: [ZERO; 16],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    /// `Tr(self · rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &ComplexMatrix) -> C64 {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for r in 0..n {
            for c in 0..n {
                acc += self.data[r * n + c] * rhs.data[c * n + r];
            }
        }
        acc
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Kronecker product of two 2×2 matrices, `self` as the slow (left) factor.
    pub fn kron(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: self.dim,
            });
        }
        if rhs.dim != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: rhs.dim,
            });
        }
        let mut out = ComplexMatrix {
            dim: 4,
            data: [ZERO; 16],
        };
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.set(2 * i + k, 2 * j + l, self.get(i, j) * rhs.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: dim,
                found: self.dim,
            })
        }
    }

    /// Transpose on one tensor factor of a 4×4 matrix.
    pub fn partial_transpose(&self, spin: Spin) -> Result<Self> {
        self.require_dim(4)?;
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        // element ⟨i j| M |k l⟩
                        let v = self.get(2 * i + j, 2 * k + l);
                        let (r, c) = match spin {
                            Spin::I => (2 * k + j, 2 * i + l),
                            Spin::S => (2 * i + l, 2 * k + j),
                        };
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced 2×2 operator on `keep`.
    pub fn partial_trace(&self, keep: Spin) -> Result<Self> {
        self.require_dim(4)?;
        let mut out = ComplexMatrix {
            dim: 2,
            data: [ZERO; 16],
        };
        for a in 0..2 {
            for b in 0..2 {
                let v: C64 = (0..2)
                    .map(|t| match keep {
                        Spin::I => self.get(2 * a + t, 2 * b + t),
                        Spin::S => self.get(2 * t + a, 2 * t + b),
                    })
                    .sum();
                out.set(a, b, v);
            }
        }
        Ok(out)
    }

    /// `(self + self†) / 2`.
    pub(crate) fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut out = *self;
        for (o, a) in out.data.iter_mut().zip(adj.data.iter()) {
            *o = (*o + a) * 0.5;
        }
        out
    }

    /// Cholesky factor `L` with `self = L L†`, or `None` when the matrix is
    /// not numerically positive definite. Only the lower triangle is read.
    pub(crate) fn cholesky(&self) -> Option<ComplexMatrix> {
        let n = self.dim;
        let mut l = ComplexMatrix {
            dim: n,
            data: [ZERO; 16],
        };
        for j in 0..n {
            let mut d = self.get(j, j).re;
            for k in 0..j {
                d -= l.get(j, k).norm_sqr();
            }
            if !(d.is_finite() && d > 0.0) {
                return None;
            }
            let djj = d.sqrt();
            l.set(j, j, C64::new(djj, 0.0));
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k).conj();
                }
                l.set(i, j, s / djj);
            }
        }
        Some(l)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on dimension mismatch; use [`ComplexMatrix::try_mul`] for a
    /// checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let mut out = *self;
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o += r;
        }
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let mut out = *self;
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o -= r;
        }
        out
    }
}

/// Two-qubit Pauli string `a ⊗ b`.
pub fn pauli_string(a: Pauli, b: Pauli) -> ComplexMatrix {
    a.matrix().kron(&b.matrix()).expect("2x2 factors")
}

/// A Hermitian matrix (within `Tolerances::eq`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOp(ComplexMatrix);

impl HermitianOp {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, &Tolerances::default())
    }

    /// Non-Hermitian input is rejected, never symmetrized.
    pub fn with_tolerance(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let deviation = m.hermiticity_defect();
        if deviation > tol.eq {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(HermitianOp(m))
    }

    /// Wraps a matrix that is Hermitian by construction, dropping rounding
    /// asymmetry.
    pub(crate) fn from_hermitian_unchecked(m: ComplexMatrix) -> Self {
        HermitianOp(m.hermitian_part())
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Ok(HermitianOp(ComplexMatrix::identity(dim)?))
    }

    pub fn pauli(p: Pauli) -> Self {
        HermitianOp(p.matrix())
    }

    pub fn pauli_string(a: Pauli, b: Pauli) -> Self {
        HermitianOp(pauli_string(a, b))
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eig(&self) -> Spectrum {
        jacobi_eigen(&self.0)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eig().eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("non-empty spectrum")
    }

    pub fn partial_transpose(&self, spin: Spin) -> Result<HermitianOp> {
        Ok(HermitianOp(self.0.partial_transpose(spin)?))
    }

    pub fn partial_trace(&self, keep: Spin) -> Result<HermitianOp> {
        Ok(HermitianOp(self.0.partial_trace(keep)?))
    }

    pub fn scale(&self, s: f64) -> HermitianOp {
        HermitianOp(self.0.scale_real(s))
    }

    pub fn approx_eq(&self, other: &HermitianOp, tol: f64) -> bool {
        self.0.approx_eq(&other.0, tol)
    }
}

impl Add for &HermitianOp {
    type Output = HermitianOp;
    fn add(self, rhs: &HermitianOp) -> HermitianOp {
        HermitianOp(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianOp {
    type Output = HermitianOp;
    fn sub(self, rhs: &HermitianOp) -> HermitianOp {
        HermitianOp(&self.0 - &rhs.0)
    }
}

/// A unit-trace positive semidefinite Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(HermitianOp);

impl DensityMatrix {
    pub fn new(op: HermitianOp) -> Result<Self> {
        Self::with_tolerance(op, &Tolerances::default())
    }

    pub fn with_tolerance(op: HermitianOp, tol: &Tolerances) -> Result<Self> {
        let tr = op.0.trace();
        if (tr.re - 1.0).abs() > tol.eq || tr.im.abs() > tol.eq {
            return Err(Error::InvalidState(format!(
                "trace is {:.12}{:+.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        let min = op.min_eigenvalue();
        if min < -tol.psd {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:.3e} is negative"
            )));
        }
        Ok(DensityMatrix(op))
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianOp::new(m)?)
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        DensityMatrix(HermitianOp::from_hermitian_unchecked(m))
    }

    /// `|ψ⟩⟨ψ|` for a normalized ket of length 2 or 4.
    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("ket norm² is {norm}")));
        }
        Ok(DensityMatrix(HermitianOp(ComplexMatrix::projector(ket)?)))
    }

    /// `𝕀 / dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Ok(DensityMatrix(HermitianOp(
            ComplexMatrix::identity(dim)?.scale_real(1.0 / dim as f64),
        )))
    }

    #[inline]
    pub fn op(&self) -> &HermitianOp {
        &self.0
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0 .0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn purity(&self) -> f64 {
        self.matrix().trace_product(self.matrix()).re
    }

    pub fn partial_transpose(&self, spin: Spin) -> Result<HermitianOp> {
        self.0.partial_transpose(spin)
    }

    pub fn partial_trace(&self, keep: Spin) -> Result<DensityMatrix> {
        Ok(DensityMatrix(self.0.partial_trace(keep)?))
    }

    /// `Tr(ρ O)` for a Hermitian observable.
    pub fn expect(&self, obs: &HermitianOp) -> Result<f64> {
        expectation(self, obs)
    }
}

/// Ascending eigenvalues and matching orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|x| x)
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        let mut out = ComplexMatrix::zeros(n).expect("dim from spectrum");
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = v.get(r, k) * w;
                for c in 0..n {
                    let z = out.get(r, c) + vr * v.get(c, k).conj();
                    out.set(r, c, z);
                }
            }
        }
        out
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        (0..self.eigenvectors.dim())
            .map(|r| self.eigenvectors.get(r, k))
            .collect()
    }
}

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// a real Givens rotation, so the iterate stays Hermitian with a real
/// diagonal. Sweeps stop once the off-diagonal Frobenius norm drops below
/// `1e-12` (relative to the matrix norm when that exceeds 1).
fn jacobi_eigen(m: &ComplexMatrix) -> Spectrum {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n).expect("valid dim");
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = 0.5 * (2.0 * r).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // G = diag(1, e^{-iφ}) · [[c, -s], [s, c]]
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(-s, 0.0);
                let gqp = phase.conj() * s;
                let gqq = phase.conj() * c;

                // A ← A G
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * gpp + akq * gqp);
                    a.set(k, q, akp * gpq + akq * gqq);
                }
                // A ← G† A
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, gpp.conj() * apk + gqp.conj() * aqk);
                    a.set(q, k, gpq.conj() * apk + gqq.conj() * aqk);
                }
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                a.set(p, p, C64::new(a.get(p, p).re, 0.0));
                a.set(q, q, C64::new(a.get(q, q).re, 0.0));
                // V ← V G
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * gpp + vkq * gqp);
                    v.set(k, q, vkp * gpq + vkq * gqq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).re.total_cmp(&a.get(y, y).re));
    let eigenvalues = order.iter().map(|&k| a.get(k, k).re).collect();
    let mut vectors = ComplexMatrix::zeros(n).expect("valid dim");
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, new_col, v.get(r, old_col));
        }
    }
    Spectrum {
        eigenvalues,
        eigenvectors: vectors,
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a.get(r, c).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// `a ⊗ b` with `a` acting on spin I.
pub fn tensor(a: &HermitianOp, b: &HermitianOp) -> Result<HermitianOp> {
    Ok(HermitianOp(a.0.kron(&b.0)?))
}

pub fn partial_transpose(rho: &HermitianOp, spin: Spin) -> Result<HermitianOp> {
    rho.partial_transpose(spin)
}

pub fn partial_trace(rho: &HermitianOp, keep: Spin) -> Result<HermitianOp> {
    rho.partial_trace(keep)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(h: &HermitianOp) -> Spectrum {
    h.eig()
}

/// `Tr(ρ O)`. Imaginary residue above `1e-8` is reported as an error.
pub fn expectation(rho: &DensityMatrix, obs: &HermitianOp) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::Dimension {
            expected: rho.dim(),
            found: obs.dim(),
        });
    }
    let v = rho.matrix().trace_product(obs.matrix());
    if v.im.abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "expectation has imaginary part {:.3e}",
            v.im
        )));
    }
    Ok(v.re)
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let sqrt_rho = rho.op().eig().map_eigenvalues(|x| x.max(0.0).sqrt());
    let inner = &(&sqrt_rho * sigma.matrix()) * &sqrt_rho;
    let ev = jacobi_eigen(&inner).eigenvalues;
    // rounding noise of size ε would contribute √ε to the trace
    let floor = 1e-13 * ev.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let root_trace: f64 = ev
        .iter()
        .map(|&x| if x > floor { x.sqrt() } else { 0.0 })
        .sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}
