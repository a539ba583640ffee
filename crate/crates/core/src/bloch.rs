//! Generalized Bloch vectors and channels as affine maps on them.
//!
//! A d-level state is written `rho = 1/d + (1/2) w . eta` with
//! `w_i = Tr(rho eta_i)`. A trace-preserving channel acts on `w` as
//! `w -> A w + c` with `A_ij = Tr(eta_i E(eta_j))/2` and
//! `c_i = Tr(eta_i E(1))/d`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::generators::GeneratorBasis;
use crate::linalg::{frobenius, identity, trace_product, CMatrix, DensityMatrix};

/// Positivity slack accepted when rebuilding a state from a Bloch vector.
pub const BLOCH_PSD_TOL: f64 = 1e-8;

/// Upper bound on `|w|` for a d-level state, reached by pure states.
pub fn max_radius(d: usize) -> f64 {
    (2.0 * (d as f64 - 1.0) / d as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    dim: usize,
    omega: DVector<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, omega: DVector<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dim}")));
        }
        if omega.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch { expected: dim * dim - 1, got: omega.len() });
        }
        Ok(Self { dim, omega })
    }

    pub fn from_slice(dim: usize, omega: &[f64]) -> Result<Self> {
        Self::new(dim, DVector::from_column_slice(omega))
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, omega: DVector::zeros(dim * dim - 1) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn omega(&self) -> &DVector<f64> {
        &self.omega
    }

    pub fn as_slice(&self) -> &[f64] {
        self.omega.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.omega.norm()
    }

    /// Distance of `|w|` below the pure-state radius.
    pub fn radius_gap(&self) -> f64 {
        max_radius(self.dim) - self.norm()
    }

    pub fn purity(&self) -> f64 {
        purity_from_bloch(self)
    }
}

/// `Tr(rho^2) = 1/d + |w|^2 / 2`.
pub fn purity_from_bloch(w: &BlochVector) -> f64 {
    1.0 / w.dim as f64 + 0.5 * w.omega.norm_squared()
}

fn ensure_basis(dim: usize, basis: &GeneratorBasis) -> Result<()> {
    if basis.dim() != dim {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: dim });
    }
    Ok(())
}

pub fn to_bloch(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<BlochVector> {
    ensure_basis(rho.dim(), basis)?;
    Ok(BlochVector { dim: rho.dim(), omega: bloch_components(rho.matrix(), basis)? })
}

/// `Tr(X eta_i)` for each generator (real parts; X assumed Hermitian).
pub fn bloch_components(x: &CMatrix, basis: &GeneratorBasis) -> Result<DVector<f64>> {
    let vals: Result<Vec<f64>> = basis.generators().iter().map(|eta| trace_product(x, eta).map(|z| z.re)).collect();
    Ok(DVector::from_vec(vals?))
}

/// `1/d + (1/2) w . eta` with no positivity check.
pub fn bloch_matrix(w: &BlochVector, basis: &GeneratorBasis) -> Result<CMatrix> {
    ensure_basis(w.dim, basis)?;
    let d = w.dim;
    let mut m = basis.combine(w.omega.as_slice())?.scale(0.5);
    m += identity(d).unscale(d as f64);
    Ok(m)
}

/// `(1/2) dw . eta`, the state derivative induced by a Bloch-vector derivative.
pub fn bloch_derivative_matrix(dw: &[f64], basis: &GeneratorBasis) -> Result<CMatrix> {
    Ok(basis.combine(dw)?.scale(0.5))
}

pub fn from_bloch(w: &BlochVector, basis: &GeneratorBasis) -> Result<DensityMatrix> {
    let m = bloch_matrix(w, basis)?;
    DensityMatrix::with_tolerance(m, BLOCH_PSD_TOL)
}

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let dim = kraus
            .first()
            .map(|k| k.nrows())
            .ok_or_else(|| Error::InvalidParameter("empty Kraus set".into()))?;
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &kraus {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: k.nrows().max(k.ncols()) });
            }
            sum += k.adjoint() * k;
        }
        let dev = frobenius(&(sum - identity(dim)));
        if dev > 1e-10 {
            return Err(Error::KrausIncomplete(dev));
        }
        Ok(Self { dim, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, kraus: vec![identity(dim)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// `sum_mu K X K†` for an arbitrary (not necessarily state) matrix.
    pub fn apply_matrix(&self, x: &CMatrix) -> CMatrix {
        self.kraus.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, k| acc + k * x * k.adjoint())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_kraus(self, rho)
    }
}

pub fn apply_kraus(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim {
        return Err(Error::DimensionMismatch { expected: ch.dim, got: rho.dim() });
    }
    let out = crate::linalg::hermitian_part(&ch.apply_matrix(rho.matrix()));
    Ok(DensityMatrix::new_unchecked(out))
}

/// Channel acting as `w -> A w + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineChannel {
    dim: usize,
    a: DMatrix<f64>,
    c: DVector<f64>,
}

impl AffineChannel {
    pub fn new(dim: usize, a: DMatrix<f64>, c: DVector<f64>) -> Result<Self> {
        let n = dim * dim - 1;
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.nrows().max(a.ncols()) });
        }
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: c.len() });
        }
        Ok(Self { dim, a, c })
    }

    pub fn identity(dim: usize) -> Self {
        let n = dim * dim - 1;
        Self { dim, a: DMatrix::identity(n, n), c: DVector::zeros(n) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.c
    }

    pub fn apply(&self, w: &BlochVector) -> Result<BlochVector> {
        apply_affine(self, w)
    }

    /// Image of a Bloch-vector derivative; channels are parameter
    /// independent, so only `A` acts.
    pub fn apply_derivative(&self, dw: &DVector<f64>) -> DVector<f64> {
        &self.a * dw
    }

    /// `self` after `first`: `w -> A2 (A1 w + c1) + c2`.
    pub fn after(&self, first: &AffineChannel) -> Result<AffineChannel> {
        if self.dim != first.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: first.dim });
        }
        Ok(Self { dim: self.dim, a: &self.a * &first.a, c: &self.a * &first.c + &self.c })
    }
}

pub fn apply_affine(ch: &AffineChannel, w: &BlochVector) -> Result<BlochVector> {
    if w.dim != ch.dim {
        return Err(Error::DimensionMismatch { expected: ch.dim, got: w.dim });
    }
    Ok(BlochVector { dim: ch.dim, omega: &ch.a * &w.omega + &ch.c })
}

pub fn kraus_to_affine(ch: &KrausChannel, basis: &GeneratorBasis) -> Result<AffineChannel> {
    ensure_basis(ch.dim, basis)?;
    let d = ch.dim;
    let n = basis.len();
    let images: Vec<CMatrix> = basis.generators().iter().map(|eta| ch.apply_matrix(eta)).collect();
    let mut a = DMatrix::zeros(n, n);
    for (i, eta_i) in basis.generators().iter().enumerate() {
        for (j, img) in images.iter().enumerate() {
            a[(i, j)] = 0.5 * trace_product(eta_i, img)?.re;
        }
    }
    let unit_image = ch.apply_matrix(&identity(d));
    let c = bloch_components(&unit_image, basis)?.unscale(d as f64);
    Ok(AffineChannel { dim: d, a, c })
}
