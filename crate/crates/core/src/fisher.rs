//! Fisher-information kernels.
//!
//! Two information quantities are provided for a one-parameter family
//! `rho(l)`:
//!
//! * the SLD quantum Fisher information `F = Tr(rho L^2)`, where the
//!   symmetric logarithmic derivative solves `d rho = {rho, L}/2`;
//! * the skew information `I = 4 Tr[(d sqrt(rho))^2]`, which for unitary
//!   families `exp(-iGl) rho exp(iGl)` equals `-4 Tr([sqrt(rho), G]^2)`.
//!
//! Each has a spectral route (the oracle, valid in any dimension), closed
//! forms for 2x2 matrices and qubit Bloch vectors, and a generalized Bloch
//! route for qudits. Both agree on pure states up to the factor `I = 2F`.
//!
//! In the eigenbasis `rho = sum_i p_i |i><i|` with `D = <i|d rho|j>` the
//! spectral sums are evaluated in the division-free form
//!
//! ```text
//! F = sum_{i,j} 2 |D_ij|^2 / (p_i + p_j)
//! I = sum_{i,j} 4 |D_ij|^2 / (sqrt(p_i) + sqrt(p_j))^2
//! ```
//!
//! whose diagonal terms form the classical part `sum_i D_ii^2 / p_i`. Pairs
//! with `p_i + p_j <= SUPPORT_EPS` are dropped.

use nalgebra::{DMatrix, DVector};

use crate::bloch::{bloch_derivative_matrix, from_bloch, max_radius, BlochVector};
use crate::error::{Error, Result};
use crate::generators::GeneratorBasis;
use crate::linalg::{
    commutator, ensure_hermitian, ensure_same_dim, frobenius, hermitian_part, psd_floor, sqrt_psd, trace, trace_product, CMatrix,
    DensityMatrix, Eigh, I,
};

/// Eigenvalue floor below which a direction counts as outside the support.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Tolerance on Hermiticity and tracelessness of a state derivative.
pub const DERIVATIVE_TOL: f64 = 1e-9;

/// Qubit Bloch formulas switch to the pure-state branch when
/// `1 - |w|^2` falls below this.
pub const QUBIT_PURE_GAP: f64 = 1e-9;

/// Qudit Bloch formulas switch to the pure-state branch when
/// `sqrt(2(d-1)/d) - |w|` falls below this.
pub const QUDIT_PURE_GAP: f64 = 1e-6;

/// Relative eigenvalue cutoff for the support-restricted inverse of `M`.
const M_SUPPORT_REL: f64 = 1e-10;

/// Components of `dw` outside the support of `M` larger than this are
/// rejected.
const M_SUPPORT_MISMATCH: f64 = 1e-8;

/// Default central-difference step for state derivatives.
pub const FD_STEP: f64 = 1e-6;

/// Central-difference step for the square-root coefficients.
pub const SQRT_FD_STEP: f64 = 1e-5;

/// Value of an information quantity split into its classical
/// (eigenvalue) and quantum (eigenvector) contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiResult {
    pub value: f64,
    pub classical_part: f64,
    pub quantum_part: f64,
}

/// Classical Fisher information `sum_i dp_i^2 / p_i` over the support.
pub fn classical_fisher(p: &[f64], dp: &[f64]) -> Result<f64> {
    if p.len() != dp.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), got: dp.len() });
    }
    if let Some(&neg) = p.iter().find(|&&x| x < 0.0) {
        return Err(Error::NotPositive(neg));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("probabilities sum to {total}")));
    }
    let dsum: f64 = dp.iter().sum();
    if dsum.abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("probability derivatives sum to {dsum}")));
    }
    Ok(p.iter().zip(dp).filter(|(&pi, _)| pi > SUPPORT_EPS).map(|(&pi, &di)| di * di / pi).sum())
}

fn check_derivative(rho: &DensityMatrix, drho: &CMatrix) -> Result<()> {
    ensure_same_dim(rho.matrix(), drho)?;
    ensure_hermitian(drho, DERIVATIVE_TOL)?;
    let tr = trace(drho);
    if tr.norm() > DERIVATIVE_TOL {
        return Err(Error::InvalidParameter(format!("state derivative has trace {:.3e}", tr.re)));
    }
    Ok(())
}

struct Spectral {
    probs: Vec<f64>,
    eig: Eigh,
    /// `<i| d rho |j>`
    elems: CMatrix,
}

fn spectral(rho: &DensityMatrix, drho: &CMatrix) -> Result<Spectral> {
    check_derivative(rho, drho)?;
    let eig = rho.eigh()?;
    let probs = psd_floor(&eig.values);
    let elems = eig.to_eigenbasis(&hermitian_part(drho));
    Ok(Spectral { probs, eig, elems })
}

fn spectral_sum(s: &Spectral, weight: impl Fn(f64, f64) -> f64) -> QfiResult {
    let n = s.probs.len();
    let mut classical = 0.0;
    let mut quantum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (pi, pj) = (s.probs[i], s.probs[j]);
            if pi + pj <= SUPPORT_EPS {
                continue;
            }
            let term = s.elems[(i, j)].norm_sqr() * weight(pi, pj);
            if i == j {
                classical += term;
            } else {
                quantum += term;
            }
        }
    }
    QfiResult { value: classical + quantum, classical_part: classical, quantum_part: quantum }
}

/// SLD quantum Fisher information from the spectral decomposition of `rho`.
pub fn qfi_sld(rho: &DensityMatrix, drho: &CMatrix) -> Result<QfiResult> {
    let s = spectral(rho, drho)?;
    Ok(spectral_sum(&s, |pi, pj| 2.0 / (pi + pj)))
}

/// Skew information from the spectral decomposition of `rho`.
pub fn skew_info(rho: &DensityMatrix, drho: &CMatrix) -> Result<QfiResult> {
    let s = spectral(rho, drho)?;
    Ok(spectral_sum(&s, |pi, pj| {
        let r = pi.sqrt() + pj.sqrt();
        4.0 / (r * r)
    }))
}

/// Symmetric logarithmic derivative `L` with `d rho = {rho, L}/2` on the
/// support of `rho`; `L` vanishes on the kernel.
pub fn sld_operator(rho: &DensityMatrix, drho: &CMatrix) -> Result<CMatrix> {
    let s = spectral(rho, drho)?;
    let n = s.probs.len();
    let mut l = CMatrix::zeros(n, n);
    let mut outside = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let sum = s.probs[i] + s.probs[j];
            if sum <= SUPPORT_EPS {
                outside = outside.max(s.elems[(i, j)].norm());
            } else {
                l[(i, j)] = s.elems[(i, j)] * (2.0 / sum);
            }
        }
    }
    if outside > 1e-8 {
        return Err(Error::SupportMismatch(outside));
    }
    Ok(hermitian_part(&(&s.eig.vectors * l * s.eig.vectors.adjoint())))
}

fn ensure_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: rho.dim() });
    }
    Ok(())
}

fn qubit_det(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re
}

/// `(Tr[(d rho)^2], Tr[(rho d rho)^2])` for the 2x2 closed forms.
fn qubit_traces(rho: &DensityMatrix, drho: &CMatrix) -> Result<(f64, f64)> {
    let t1 = trace_product(drho, drho)?.re;
    let rd = rho.matrix() * drho;
    let t2 = trace_product(&rd, &rd)?.re;
    Ok((t1, t2))
}

/// Closed form for mixed 2x2 states:
/// `F = Tr[(d rho)^2] + Tr[(rho d rho)^2] / det(rho)`.
pub fn qfi_dittmann_qubit(rho: &DensityMatrix, drho: &CMatrix) -> Result<f64> {
    ensure_qubit(rho)?;
    check_derivative(rho, drho)?;
    let det = qubit_det(rho);
    if det <= SUPPORT_EPS {
        return Err(Error::PureState(det));
    }
    let (t1, t2) = qubit_traces(rho, drho)?;
    Ok(t1 + t2 / det)
}

/// Closed form for mixed 2x2 states:
/// `I = alpha Tr[(d rho)^2] - beta Tr[(rho d rho)^2]`, with `alpha` and
/// `beta` functions of `det(rho)`.
pub fn skew_qubit_closed(rho: &DensityMatrix, drho: &CMatrix) -> Result<f64> {
    ensure_qubit(rho)?;
    check_derivative(rho, drho)?;
    let det = qubit_det(rho);
    if det <= SUPPORT_EPS {
        return Err(Error::PureState(det));
    }
    let (t1, t2) = qubit_traces(rho, drho)?;
    let sq = det.sqrt();
    let r2 = 1.0 - 4.0 * det;
    // At the maximally mixed point (r2 -> 0) both coefficients have finite
    // limits; use them when the prefactor is ill conditioned.
    let (alpha, beta) = if r2.abs() < 1e-6 {
        let q = 2.0 * sq;
        let beta = 4.0 / ((1.0 + q) * (1.0 + q)) - 1.0 / det;
        (4.0 / (1.0 + q) + beta * det, beta)
    } else {
        (
            (4.0 * (1.0 - 2.0 * det) / (1.0 + 2.0 * sq) - 1.0) / r2,
            (8.0 / (1.0 + 2.0 * sq) - 1.0 / det) / r2,
        )
    };
    Ok(alpha * t1 - beta * t2)
}

fn ensure_qubit_vectors(w: &BlochVector, dw: &[f64]) -> Result<()> {
    if w.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: w.dim() });
    }
    if dw.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: dw.len() });
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Qubit SLD QFI from the Bloch vector:
/// `|dw|^2 + (w.dw)^2 / (1 - |w|^2)` for mixed states, `|dw|^2` for pure.
pub fn qfi_bloch_qubit(w: &BlochVector, dw: &[f64]) -> Result<f64> {
    ensure_qubit_vectors(w, dw)?;
    let n2 = dot(dw, dw);
    let gap = 1.0 - w.omega().norm_squared();
    if gap <= QUBIT_PURE_GAP {
        return Ok(n2);
    }
    let wd = dot(w.as_slice(), dw);
    Ok(n2 + wd * wd / gap)
}

/// Qubit skew information from the Bloch vector:
/// `2|dw|^2 / (1 + sqrt(1-|w|^2)) + Theta (w.dw)^2` for mixed states,
/// `2|dw|^2` for pure.
pub fn skew_bloch_qubit(w: &BlochVector, dw: &[f64]) -> Result<f64> {
    ensure_qubit_vectors(w, dw)?;
    let n2 = dot(dw, dw);
    let gap = 1.0 - w.omega().norm_squared();
    if gap <= QUBIT_PURE_GAP {
        return Ok(2.0 * n2);
    }
    let q = gap.sqrt();
    let theta = 1.0 / gap - 1.0 / ((1.0 + q) * (1.0 + q));
    let wd = dot(w.as_slice(), dw);
    Ok(2.0 * n2 / (1.0 + q) + theta * wd * wd)
}

/// Real symmetric matrix `M = (2/d) 1 - w w^T + G` with
/// `G_jk = sum_i g_ijk w_i`.
pub fn m_matrix(w: &BlochVector, basis: &GeneratorBasis) -> Result<DMatrix<f64>> {
    if w.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: w.dim() });
    }
    let n = basis.len();
    let om = w.omega();
    let mut m = DMatrix::identity(n, n).scale(2.0 / w.dim() as f64) - om * om.transpose() + basis.g_contract(om.as_slice());
    m = (&m + m.transpose()).scale(0.5);
    Ok(m)
}

/// Qudit SLD QFI `dw^T M^+ dw`, with the inverse restricted to the support
/// of `M`; pure states use `|dw|^2`.
pub fn qfi_bloch_qudit(w: &BlochVector, dw: &[f64], basis: &GeneratorBasis) -> Result<f64> {
    let n = basis.len();
    if dw.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: dw.len() });
    }
    let m = m_matrix(w, basis)?;
    if w.radius_gap() <= QUDIT_PURE_GAP {
        return Ok(dot(dw, dw));
    }
    let eig = crate::linalg::eigh(&m.map(crate::linalg::cr))?;
    let max = eig.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let cutoff = M_SUPPORT_REL * max;
    let mut value = 0.0;
    let mut outside = 0.0;
    for (k, &mk) in eig.values.iter().enumerate() {
        // eigenvectors of a real symmetric matrix, up to a global phase
        let v = eig.vectors.column(k);
        let phase = v.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).map(|z| z.conj() / z.norm());
        let phase = phase.unwrap_or(crate::linalg::cr(1.0));
        let proj: f64 = v.iter().zip(dw).map(|(z, &x)| (z * phase).re * x).sum();
        if mk > cutoff {
            value += proj * proj / mk;
        } else {
            outside += proj * proj;
        }
    }
    if outside.sqrt() > M_SUPPORT_MISMATCH {
        return Err(Error::SupportMismatch(outside.sqrt()));
    }
    Ok(value.max(0.0))
}

/// Coefficients of `sqrt(rho) = y 1 + x . eta`, with the residuals of the
/// quadratic system they satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtCoeffs {
    pub y: f64,
    pub x: DVector<f64>,
    /// `y^2 + (2/d)|x|^2 - 1/d`
    pub trace_residual: f64,
    /// `max_k |2 y x_k + sum_ij g_ijk x_i x_j - w_k/2|`
    pub vector_residual: f64,
}

pub fn sqrt_rho_coeffs(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<SqrtCoeffs> {
    let d = rho.dim();
    if d != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: d });
    }
    let root = sqrt_psd(rho)?;
    let (y, x) = basis.expand_hermitian(&hermitian_part(&root))?;
    let omega = crate::bloch::bloch_components(rho.matrix(), basis)?;
    let trace_residual = y * y + 2.0 / d as f64 * x.norm_squared() - 1.0 / d as f64;
    let mut quad = x.scale(2.0 * y) - omega.scale(0.5);
    for (&(i, j, k), &g) in basis.g() {
        quad[k] += g * x[i] * x[j];
    }
    let vector_residual = quad.amax();
    let worst = trace_residual.abs().max(vector_residual);
    if worst > 1e-6 {
        return Err(Error::Consistency(worst));
    }
    Ok(SqrtCoeffs { y, x, trace_residual, vector_residual })
}

/// Central difference of `f` at `l`, extrapolated once (Richardson); the
/// step is halved up to three times when the stencil leaves the domain or
/// the two estimates disagree.
fn richardson<F>(f: F, l: f64, h0: f64) -> Result<DVector<f64>>
where
    F: Fn(f64) -> Result<DVector<f64>>,
{
    const REDUCTIONS: usize = 3;
    let central = |h: f64| -> Result<DVector<f64>> { Ok((f(l + h)? - f(l - h)?).unscale(2.0 * h)) };
    let mut h = h0;
    for _ in 0..=REDUCTIONS {
        if let (Ok(coarse), Ok(fine)) = (central(h), central(h / 2.0)) {
            let extrap = (fine.scale(4.0) - &coarse).unscale(3.0);
            let spread = (&fine - &coarse).amax();
            if spread <= 1e-4 * (1.0 + extrap.amax()) {
                return Ok(extrap);
            }
        }
        h /= 2.0;
    }
    Err(Error::StencilFailure(REDUCTIONS))
}

/// Qudit skew information for a Bloch-vector family at `l`, from the
/// derivatives of the square-root coefficients:
/// `I = 4 d (dy)^2 + 8 |dx|^2` for mixed states, `2|dw|^2` for pure ones.
pub fn skew_bloch_qudit<F>(family: F, l: f64, basis: &GeneratorBasis) -> Result<f64>
where
    F: Fn(f64) -> Result<BlochVector>,
{
    let w = family(l)?;
    let d = basis.dim();
    if w.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: w.dim() });
    }
    if w.radius_gap() <= QUDIT_PURE_GAP {
        let dw = richardson(|t| Ok(family(t)?.omega().clone()), l, FD_STEP)?;
        return Ok(2.0 * dw.norm_squared());
    }
    let coeffs = |t: f64| -> Result<DVector<f64>> {
        let rho = from_bloch(&family(t)?, basis)?;
        let s = sqrt_rho_coeffs(&rho, basis)?;
        let mut v = DVector::zeros(basis.len() + 1);
        v[0] = s.y;
        v.rows_mut(1, basis.len()).copy_from(&s.x);
        Ok(v)
    };
    let dv = richardson(coeffs, l, SQRT_FD_STEP)?;
    let dy = dv[0];
    let dx2 = dv.rows(1, basis.len()).norm_squared();
    Ok(4.0 * d as f64 * dy * dy + 8.0 * dx2)
}

/// Skew information of `rho` along the unitary orbit generated by `g`:
/// `I = -4 Tr([sqrt(rho), G]^2)`.
pub fn skew_info_observable(rho: &DensityMatrix, g: &CMatrix) -> Result<f64> {
    ensure_same_dim(rho.matrix(), g)?;
    ensure_hermitian(g, DERIVATIVE_TOL)?;
    let root = sqrt_psd(rho)?;
    let comm = commutator(&root, g);
    Ok(4.0 * frobenius(&comm).powi(2))
}

/// `d rho / dl` at `l = 0` for `exp(-iGl) rho exp(iGl)`, i.e. `-i[G, rho]`.
pub fn unitary_derivative(rho: &DensityMatrix, g: &CMatrix) -> Result<CMatrix> {
    ensure_same_dim(rho.matrix(), g)?;
    Ok(hermitian_part(&(commutator(g, rho.matrix()) * (-I))))
}

/// Uhlmann fidelity `Tr sqrt(sqrt(rho) sigma sqrt(rho))`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(rho.matrix(), sigma.matrix())?;
    let r = sqrt_psd(rho)?;
    let inner = hermitian_part(&(&r * sigma.matrix() * &r));
    let e = crate::linalg::eigh(&inner)?;
    Ok(psd_floor(&e.values).iter().map(|v| v.sqrt()).sum())
}

/// Quantum affinity `Tr(sqrt(rho) sqrt(sigma))`.
pub fn affinity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(rho.matrix(), sigma.matrix())?;
    Ok(trace_product(&sqrt_psd(rho)?, &sqrt_psd(sigma)?)?.re)
}

/// Squared Bures distance `2 (1 - fidelity)`.
pub fn bures_distance_sq(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((2.0 * (1.0 - fidelity(rho, sigma)?)).max(0.0))
}

pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(bures_distance_sq(rho, sigma)?.sqrt())
}

/// Squared quantum Hellinger distance `2 (1 - affinity)`.
pub fn hellinger_distance_sq(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((2.0 * (1.0 - affinity(rho, sigma)?)).max(0.0))
}

pub fn hellinger_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(hellinger_distance_sq(rho, sigma)?.sqrt())
}

/// Quantum Cramer-Rao bound `1 / (nu F)` on the estimator variance.
pub fn cramer_rao_bound(fisher: f64, repetitions: u64) -> Result<f64> {
    if !(fisher > 0.0) {
        return Err(Error::InvalidParameter(format!("Fisher information must be positive, got {fisher}")));
    }
    if repetitions == 0 {
        return Err(Error::InvalidParameter("number of repetitions must be positive".into()));
    }
    Ok(1.0 / (repetitions as f64 * fisher))
}

type StateFn<'a> = Box<dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'a>;
type DerivFn<'a> = Box<dyn Fn(f64) -> CMatrix + Send + Sync + 'a>;

/// How a family's derivative is obtained.
pub enum Derivative<'a> {
    Analytic(DerivFn<'a>),
    /// Central difference with the given step.
    FiniteDifference { step: f64 },
}

/// One-parameter family of states `l -> rho(l)`.
pub struct StateFamily<'a> {
    eval: StateFn<'a>,
    derivative: Derivative<'a>,
}

impl<'a> StateFamily<'a> {
    /// Family differentiated by central differences with the default step.
    pub fn new(eval: impl Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'a) -> Self {
        Self { eval: Box::new(eval), derivative: Derivative::FiniteDifference { step: FD_STEP } }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.derivative = Derivative::FiniteDifference { step };
        self
    }

    pub fn with_analytic(
        eval: impl Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'a,
        deriv: impl Fn(f64) -> CMatrix + Send + Sync + 'a,
    ) -> Self {
        Self { eval: Box::new(eval), derivative: Derivative::Analytic(Box::new(deriv)) }
    }

    /// Unitary orbit `exp(-iGl) rho exp(iGl)`.
    pub fn unitary(rho: DensityMatrix, g: CMatrix) -> Result<Self> {
        ensure_same_dim(rho.matrix(), &g)?;
        ensure_hermitian(&g, DERIVATIVE_TOL)?;
        let e = crate::linalg::eigh(&g)?;
        let e2 = e.clone();
        let rho2 = rho.clone();
        let rotate = move |eig: &Eigh, l: f64| -> CMatrix {
            let n = eig.values.len();
            let mut v = eig.vectors.clone();
            for (j, &w) in eig.values.iter().enumerate() {
                let ph = crate::linalg::c((w * l).cos(), -(w * l).sin());
                for i in 0..n {
                    v[(i, j)] *= ph;
                }
            }
            v * eig.vectors.adjoint()
        };
        let g2 = g.clone();
        Ok(Self::with_analytic(
            move |l| {
                let u = rotate(&e, l);
                Ok(DensityMatrix::new_unchecked(hermitian_part(&(&u * rho.matrix() * u.adjoint()))))
            },
            move |l| {
                let u = rotate(&e2, l);
                let r = DensityMatrix::new_unchecked(hermitian_part(&(&u * rho2.matrix() * u.adjoint())));
                hermitian_part(&(commutator(&g2, r.matrix()) * (-I)))
            },
        ))
    }

    pub fn state(&self, l: f64) -> Result<DensityMatrix> {
        (self.eval)(l)
    }

    pub fn derivative(&self, l: f64) -> Result<CMatrix> {
        match &self.derivative {
            Derivative::Analytic(f) => {
                let d = f(l);
                ensure_hermitian(&d, DERIVATIVE_TOL)?;
                let tr = trace(&d);
                if tr.norm() > DERIVATIVE_TOL {
                    return Err(Error::InvalidParameter(format!("analytic derivative has trace {:.3e}", tr.re)));
                }
                Ok(d)
            }
            Derivative::FiniteDifference { step } => {
                let h = *step;
                let plus = self.state(l + h)?;
                let minus = self.state(l - h)?;
                Ok(hermitian_part(&(plus.matrix() - minus.matrix()).unscale(2.0 * h)))
            }
        }
    }

    pub fn qfi(&self, l: f64) -> Result<QfiResult> {
        qfi_sld(&self.state(l)?, &self.derivative(l)?)
    }

    pub fn skew(&self, l: f64) -> Result<QfiResult> {
        skew_info(&self.state(l)?, &self.derivative(l)?)
    }
}

/// QFI of the state with Bloch vector `w` moving along `dw`, via the
/// spectral route. Convenience for cross-checks against the Bloch forms.
pub fn qfi_sld_bloch(w: &BlochVector, dw: &[f64], basis: &GeneratorBasis) -> Result<QfiResult> {
    let rho = from_bloch(w, basis)?;
    qfi_sld(&rho, &bloch_derivative_matrix(dw, basis)?)
}

pub fn skew_info_bloch(w: &BlochVector, dw: &[f64], basis: &GeneratorBasis) -> Result<QfiResult> {
    let rho = from_bloch(w, basis)?;
    skew_info(&rho, &bloch_derivative_matrix(dw, basis)?)
}

/// Whether `w` sits on the pure-state sphere under the qudit threshold.
pub fn is_pure_bloch(w: &BlochVector) -> bool {
    max_radius(w.dim()) - w.norm() <= QUDIT_PURE_GAP
}
