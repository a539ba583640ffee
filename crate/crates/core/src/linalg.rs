//! Dense complex matrix kernel: Hermitian eigendecomposition by cyclic
//! Jacobi rotations, PSD square roots, traces and (anti)commutators.
//!
//! Sizes of interest are small (d up to about 64), so everything is dense
//! and deterministic.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Absolute tolerance for Hermiticity, unit trace and positivity checks.
pub const STATE_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(0.0), -I, I, cr(0.0)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
}

/// Outer product |u><v|.
pub fn outer(u: &[Complex64], v: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

pub fn ensure_same_dim(a: &CMatrix, b: &CMatrix) -> Result<usize> {
    let d = ensure_square(a)?;
    let e = ensure_square(b)?;
    if d != e {
        return Err(Error::DimensionMismatch { expected: d, got: e });
    }
    Ok(d)
}

/// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn ensure_hermitian(m: &CMatrix, tol: f64) -> Result<usize> {
    let d = ensure_square(m)?;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let dev = hermitian_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    Ok(d)
}

/// `(m + m†)/2`, used to strip rounding noise before decomposing.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `Tr(AB)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    let d = ensure_same_dim(a, b)?;
    let mut acc = cr(0.0);
    for i in 0..d {
        for k in 0..d {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    Ok(acc)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral decomposition `H = V diag(w) V†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigh {
    /// Reassemble `V diag(f(w)) V†`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &w) in self.values.iter().enumerate() {
            let fw = f(w);
            for i in 0..n {
                scaled[(i, j)] *= fw;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_values(|w| w)
    }

    /// Matrix elements `<v_i| X |v_j>` in the eigenbasis.
    pub fn to_eigenbasis(&self, x: &CMatrix) -> CMatrix {
        self.vectors.adjoint() * x * &self.vectors
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh(h: &CMatrix) -> Result<Eigh> {
    let n = ensure_hermitian(h, STATE_TOL.max(1e-12 * frobenius(h)))?;
    let mut a = hermitian_part(h);
    let mut v = identity(n);
    let norm = frobenius(&a);
    let target = 1e-15 * norm.max(f64::MIN_POSITIVE);

    let off_norm = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += a[(p, q)].norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / r;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let se = phase * sn;
                // A <- A R, with R = [[c, s e], [-s conj(e), c]] on (p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs - akq * se.conj();
                    a[(k, q)] = akp * se + akq * cs;
                }
                // A <- R† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cs - aqk * se;
                    a[(q, k)] = apk * se.conj() + aqk * cs;
                }
                a[(p, q)] = cr(0.0);
                a[(q, p)] = cr(0.0);
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cs - vkq * se.conj();
                    v[(k, q)] = vkp * se + vkq * cs;
                }
            }
        }
        off = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| v[(r, order[col])]);
    Ok(Eigh { values, vectors })
}

/// Square root of a Hermitian PSD matrix; eigenvalues in `[-tol, 0)` are
/// clamped to zero, as are those at rounding level.
pub fn sqrt_hermitian_psd(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let e = eigh(m)?;
    if let Some(&w) = e.values.first() {
        if w < -tol {
            return Err(Error::NotPositive(w));
        }
    }
    let floor = rounding_floor(&e.values);
    Ok(e.map_values(|w| if w <= floor { 0.0 } else { w.sqrt() }))
}

fn rounding_floor(values: &[f64]) -> f64 {
    let top = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    4.0 * f64::EPSILON * values.len() as f64 * top
}

/// Spectrum with negative and rounding-level eigenvalues set to zero.
pub fn psd_floor(values: &[f64]) -> Vec<f64> {
    let floor = rounding_floor(values);
    values.iter().map(|&w| if w <= floor { 0.0 } else { w }).collect()
}

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, STATE_TOL)
    }

    /// Validate with a custom positivity tolerance (Hermiticity and trace
    /// keep the default).
    pub fn with_tolerance(m: CMatrix, psd_tol: f64) -> Result<Self> {
        ensure_hermitian(&m, STATE_TOL)?;
        let tr = trace(&m);
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let e = eigh(&m)?;
        let min = e.values.first().copied().unwrap_or(0.0);
        if min < -psd_tol {
            return Err(Error::NotPositive(min));
        }
        Ok(Self(hermitian_part(&m)))
    }

    /// Wrap without checks; callers guarantee validity.
    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        Self(m)
    }

    /// Projector onto the normalized vector `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("zero or non-finite state vector".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self(outer(&v, &v)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(identity(d).unscale(d as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn purity(&self) -> f64 {
        trace_product(&self.0, &self.0).map(|z| z.re).unwrap_or(f64::NAN)
    }

    pub fn eigh(&self) -> Result<Eigh> {
        eigh(&self.0)
    }
}

/// Principal square root of a state.
pub fn sqrt_psd(rho: &DensityMatrix) -> Result<CMatrix> {
    sqrt_hermitian_psd(rho.matrix(), STATE_TOL)
}
