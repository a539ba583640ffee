//! GHZ Ramsey interferometry with N qubits under collective dephasing.
//!
//! The probe lives in the symmetric subspace `j = N/2`, a qudit of
//! dimension `d = N + 1` with basis `|j, m>` ordered by descending `m`
//! (index `i` carries `m = N/2 - i`). Collective dephasing with the `J_z`
//! Lindblad operator damps matrix elements as
//! `r_mn(t) = r_mn(0) exp(-(m - n)^2 gamma t)`, so the imprinted GHZ state
//! `(|N/2> + exp(iN phi)|-N/2>)/sqrt 2` keeps `F = N^2 exp(-2 N^2 gamma t)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::bloch::{bloch_derivative_matrix, from_bloch, to_bloch, AffineChannel, BlochVector};
use crate::error::{Error, Result};
use crate::fisher::{qfi_bloch_qudit, qfi_sld};
use crate::generators::{GeneratorBasis, GeneratorKind};
use crate::linalg::{c, cr, CMatrix, DensityMatrix};
use crate::output::{csv_table, format_g12};

/// Largest N for which the CSV driver evaluates the Bloch route; beyond it
/// the spectral route alone is used (the generator basis grows as `N^4`).
pub const BLOCH_ROUTE_MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct DickeSystem {
    n: usize,
    jz: CMatrix,
}

impl DickeSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        let d = n + 1;
        let jz = CMatrix::from_fn(d, d, |i, j| if i == j { cr(magnetic(n, i)) } else { cr(0.0) });
        Ok(Self { n, jz })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn jz(&self) -> &CMatrix {
        &self.jz
    }
}

/// `m` carried by basis index `i`.
pub fn magnetic(n: usize, i: usize) -> f64 {
    n as f64 / 2.0 - i as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyScenario {
    pub n: usize,
    pub phi: f64,
    pub gamma: f64,
    pub t: f64,
}

impl RamseyScenario {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        check_rate_time(self.gamma, self.t)
    }
}

fn check_rate_time(gamma: f64, t: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")));
    }
    Ok(())
}

fn ghz_vector(n: usize, phi: f64) -> Vec<num_complex::Complex64> {
    let d = n + 1;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![cr(0.0); d];
    v[0] = cr(r);
    let (s, co) = (n as f64 * phi).sin_cos();
    v[d - 1] = c(r * co, r * s);
    v
}

/// Phase-imprinted GHZ state.
pub fn ghz_state(n: usize, phi: f64) -> Result<DensityMatrix> {
    if n < 1 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    DensityMatrix::pure(&ghz_vector(n, phi))
}

/// `d rho / d phi` of the imprinted GHZ state, `-i [J_z, rho]`.
pub fn ghz_derivative(n: usize, phi: f64) -> Result<CMatrix> {
    let sys = DickeSystem::new(n)?;
    let rho = ghz_state(n, phi)?;
    let comm = sys.jz() * rho.matrix() - rho.matrix() * sys.jz();
    Ok(crate::linalg::hermitian_part(&(comm * c(0.0, -1.0))))
}

fn check_basis(n: usize, basis: &GeneratorBasis) -> Result<()> {
    if basis.dim() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, got: basis.dim() });
    }
    Ok(())
}

/// Diagonal affine map of the collective dephasing.
pub fn dephasing_affine(n: usize, gamma: f64, t: f64, basis: &GeneratorBasis) -> Result<AffineChannel> {
    check_rate_time(gamma, t)?;
    check_basis(n, basis)?;
    let diag = basis.kinds().iter().map(|k| match *k {
        GeneratorKind::Symmetric { m, n: q } | GeneratorKind::Antisymmetric { m, n: q } => {
            let gap = q as f64 - m as f64;
            (-gap * gap * gamma * t).exp()
        }
        GeneratorKind::Diagonal { .. } => 1.0,
    });
    let a = DMatrix::from_diagonal(&DVector::from_iterator(basis.len(), diag));
    AffineChannel::new(basis.dim(), a, DVector::zeros(basis.len()))
}

/// Dephasing applied to the matrix elements directly.
pub fn evolve_elementwise(rho0: &DensityMatrix, n: usize, gamma: f64, t: f64) -> Result<DensityMatrix> {
    check_rate_time(gamma, t)?;
    if rho0.dim() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, got: rho0.dim() });
    }
    let out = dephase_matrix(rho0.matrix(), gamma, t);
    DensityMatrix::new(out)
}

fn dephase_matrix(x: &CMatrix, gamma: f64, t: f64) -> CMatrix {
    CMatrix::from_fn(x.nrows(), x.ncols(), |i, j| {
        let gap = i as f64 - j as f64;
        x[(i, j)] * (-gap * gap * gamma * t).exp()
    })
}

/// Closed form `N^2 exp(-2 N^2 gamma t)`.
pub fn ramsey_qfi_closed(n: usize, gamma: f64, t: f64) -> f64 {
    let n2 = (n * n) as f64;
    n2 * (-2.0 * n2 * gamma * t).exp()
}

/// Closed form next to the Bloch-route and spectral-route values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyQfi {
    pub closed: f64,
    pub bloch: f64,
    pub spectral: f64,
}

impl RamseyQfi {
    /// Largest relative gap of the numeric routes to the closed form.
    pub fn relative_gap(&self) -> f64 {
        let rel = |x: f64| (x - self.closed).abs() / self.closed.abs().max(f64::MIN_POSITIVE);
        rel(self.bloch).max(rel(self.spectral))
    }
}

/// QFI of the dephased GHZ family through the affine map and
/// `qfi_bloch_qudit`, and through the dephased density matrix and
/// `qfi_sld`.
pub fn ramsey_qfi(n: usize, gamma: f64, t: f64, basis: &GeneratorBasis) -> Result<RamseyQfi> {
    ramsey_qfi_at(RamseyScenario { n, phi: 0.0, gamma, t }, basis)
}

pub fn ramsey_qfi_at(sc: RamseyScenario, basis: &GeneratorBasis) -> Result<RamseyQfi> {
    sc.validate()?;
    check_basis(sc.n, basis)?;
    let ch = dephasing_affine(sc.n, sc.gamma, sc.t, basis)?;
    let w0 = to_bloch(&ghz_state(sc.n, sc.phi)?, basis)?;
    let dw0 = crate::bloch::bloch_components(&ghz_derivative(sc.n, sc.phi)?, basis)?;
    let w = ch.apply(&w0)?;
    let dw = ch.apply_derivative(&dw0);
    let bloch = qfi_bloch_qudit(&w, dw.as_slice(), basis)?;
    let rho = from_bloch(&w, basis)?;
    let spectral = qfi_sld(&rho, &bloch_derivative_matrix(dw.as_slice(), basis)?)?.value;
    Ok(RamseyQfi { closed: ramsey_qfi_closed(sc.n, sc.gamma, sc.t), bloch, spectral })
}

/// Spectral-route QFI built from the dephased matrix elements, without a
/// generator basis.
pub fn ramsey_qfi_spectral(n: usize, gamma: f64, t: f64) -> Result<f64> {
    check_rate_time(gamma, t)?;
    let rho = evolve_elementwise(&ghz_state(n, 0.0)?, n, gamma, t)?;
    let drho = dephase_matrix(&ghz_derivative(n, 0.0)?, gamma, t);
    Ok(qfi_sld(&rho, &drho)?.value)
}

/// Cramer-Rao phase uncertainty `1 / sqrt(nu F)` with the closed-form F.
pub fn phase_uncertainty(n: usize, gamma: f64, t: f64, repetitions: u64) -> Result<f64> {
    check_rate_time(gamma, t)?;
    let f = ramsey_qfi_closed(n, gamma, t);
    Ok(crate::fisher::cramer_rao_bound(f, repetitions)?.sqrt())
}

/// Time `ln N / (2 N^2 gamma)` at which the QFI has fallen from the
/// Heisenberg value `N^2` to the shot-noise value `N`.
pub fn characteristic_time(n: usize, gamma: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("characteristic time needs N >= 2, got {n}")));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma must be > 0, got {gamma}")));
    }
    let nf = n as f64;
    Ok(nf.ln() / (2.0 * nf * nf * gamma))
}

/// Rows of the Ramsey sweep, one per `(N, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RamseyRow {
    pub n: usize,
    pub t: f64,
    pub f_closed: f64,
    pub f_numeric: f64,
    pub delta_phi: f64,
    pub t_c: Option<f64>,
}

/// Sweep `N = 1..=n_max` over `grid`. The numeric column uses the Bloch
/// route up to `BLOCH_ROUTE_MAX_N` and the spectral route beyond.
pub fn ramsey_sweep(n_max: usize, gamma: f64, grid: &[f64]) -> Result<Vec<RamseyRow>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    check_rate_time(gamma, 0.0)?;
    let per_n = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<RamseyRow>> {
            let basis = if n <= BLOCH_ROUTE_MAX_N { Some(GeneratorBasis::new(n + 1)?) } else { None };
            let t_c = if n >= 2 && gamma > 0.0 { Some(characteristic_time(n, gamma)?) } else { None };
            grid.iter()
                .map(|&t| {
                    let f_closed = ramsey_qfi_closed(n, gamma, t);
                    let f_numeric = match &basis {
                        Some(b) => ramsey_qfi(n, gamma, t, b)?.bloch,
                        None => ramsey_qfi_spectral(n, gamma, t)?,
                    };
                    let delta_phi = if f_closed > 0.0 { 1.0 / f_closed.sqrt() } else { f64::INFINITY };
                    Ok(RamseyRow { n, t, f_closed, f_numeric, delta_phi, t_c })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

pub fn ramsey_csv(rows: &[RamseyRow]) -> String {
    csv_table(
        &["N", "t", "F_closed", "F_numeric", "delta_phi", "t_c"],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                format_g12(r.t),
                format_g12(r.f_closed),
                format_g12(r.f_numeric),
                format_g12(r.delta_phi),
                r.t_c.map(format_g12).unwrap_or_default(),
            ]
        }),
    )
}

/// Bloch vector of the imprinted GHZ state.
pub fn ghz_bloch(n: usize, phi: f64, basis: &GeneratorBasis) -> Result<BlochVector> {
    check_basis(n, basis)?;
    to_bloch(&ghz_state(n, phi)?, basis)
}
