//! Dissipative qubit `H = w0 sz / 2` coupled through `sx` to a bosonic bath
//! with Lorentzian spectrum, so that the bath correlation function is
//! `C(t) = lambda exp(-(gamma + i w0) t)`.
//!
//! The hierarchy of auxiliary operators `r_n`, `n = (n1, n2)`, obeys
//!
//! ```text
//! dr_n/dt = -(i H^x + n.nu) r_n - i sum_k V^x r_{n+e_k}
//!           - i (lambda/2) sum_k n_k [V^x + (-1)^k V^o] r_{n-e_k}
//! ```
//!
//! with `nu = (gamma - i w0, gamma + i w0)`, `X^x = [X, .]`,
//! `X^o = {X, .}` and `r_(0,0)` the physical state. Internally the
//! auxiliaries are rescaled by `sqrt(lambda^|n| n1! n2!)`, which leaves
//! the physical state unchanged and balances the couplings. The hierarchy
//! is closed by setting `r_n = 0` for `n1 + n2 > L`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bloch::AffineChannel;
use crate::channels::{numeric_quantities, DynamicsSeries, Provenance};
use crate::error::{Error, Result};
use crate::linalg::{c, cr, CMatrix, DensityMatrix};

type M2 = Matrix2<Complex64>;

/// Changes below this when the depth is doubled count as converged.
pub const TRUNCATION_TOL: f64 = 1e-6;
/// Largest hierarchy depth tried by the automatic escalation.
pub const MAX_DEPTH: usize = 60;
/// Allowed drift of the physical trace during integration.
pub const TRACE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeomParams {
    pub omega0: f64,
    pub gamma: f64,
    pub lambda: f64,
    /// Truncation depth `L`: auxiliaries with `n1 + n2 <= L` are kept.
    pub depth: usize,
    /// Upper bound on the integrator step.
    pub dt: f64,
    pub t_max: f64,
    /// Number of output intervals on `[0, t_max]`.
    pub steps: usize,
}

impl HeomParams {
    /// `gamma = 0.2 w0` and `lambda = ratio * gamma`, on `[0, 50/w0]`.
    pub fn with_ratio(omega0: f64, ratio: f64) -> Self {
        let gamma = 0.2 * omega0;
        Self { omega0, gamma, lambda: ratio * gamma, depth: 4, dt: 1e-3 / omega0, t_max: 50.0 / omega0, steps: 500 }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("omega0", self.omega0), ("gamma", self.gamma), ("dt", self.dt), ("t_max", self.t_max)];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.depth < 1 {
            return Err(Error::InvalidParameter("truncation depth must be >= 1".into()));
        }
        if self.dt * self.omega0 > 0.01 + 1e-12 {
            return Err(Error::InvalidParameter(format!("dt * omega0 = {} exceeds 0.01", self.dt * self.omega0)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidParameter("need at least one output interval".into()));
        }
        Ok(())
    }

    /// Output grid `k t_max / steps`.
    pub fn times(&self) -> Vec<f64> {
        crate::output::time_grid(self.t_max, self.steps)
    }

    /// Integrator step at depth `L`, shrunk so that each output interval
    /// holds a whole number of steps.
    pub fn step_size(&self, depth: usize) -> (f64, usize) {
        let cap = self.dt.min(0.05 / (self.gamma * (2 * depth + 1) as f64));
        let interval = self.t_max / self.steps as f64;
        let n = (interval / cap).ceil().max(1.0) as usize;
        (interval / n as f64, n)
    }
}

/// Index bookkeeping of the truncated hierarchy.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    depth: usize,
    nodes: Vec<(usize, usize)>,
    /// Node index of `n + e_k`, if kept.
    up: Vec<[Option<usize>; 2]>,
    /// Node index of `n - e_k`, if `n_k > 0`.
    down: Vec<[Option<usize>; 2]>,
}

impl Hierarchy {
    pub fn new(depth: usize) -> Self {
        let mut nodes = Vec::new();
        for total in 0..=depth {
            for n1 in 0..=total {
                nodes.push((n1, total - n1));
            }
        }
        let index = |n1: usize, n2: usize| -> Option<usize> {
            let total = n1 + n2;
            (total <= depth).then(|| total * (total + 1) / 2 + n1)
        };
        let up = nodes.iter().map(|&(a, b)| [index(a + 1, b), index(a, b + 1)]).collect();
        let down = nodes
            .iter()
            .map(|&(a, b)| [a.checked_sub(1).and_then(|a1| index(a1, b)), b.checked_sub(1).and_then(|b1| index(a, b1))])
            .collect();
        Self { depth, nodes, up, down }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Full hierarchy state: one 2x2 block per node, node 0 physical.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyState {
    pub blocks: Vec<M2>,
}

impl HierarchyState {
    pub fn new(h: &Hierarchy, physical: M2) -> Self {
        let mut blocks = vec![M2::zeros(); h.len()];
        blocks[0] = physical;
        Self { blocks }
    }

    pub fn physical(&self) -> &M2 {
        &self.blocks[0]
    }
}

struct Rhs<'a> {
    h: &'a Hierarchy,
    hs: M2,
    sx: M2,
    nu: [Complex64; 2],
    lambda: f64,
}

impl Rhs<'_> {
    fn eval(&self, x: &[M2], out: &mut [M2]) {
        let i = c(0.0, 1.0);
        let sx = &self.sx;
        for (k, &(n1, n2)) in self.h.nodes.iter().enumerate() {
            let r = &x[k];
            let damp = self.nu[0] * n1 as f64 + self.nu[1] * n2 as f64;
            let mut d = -(self.hs * r - r * self.hs) * i - r * damp;
            let mut up_sum = M2::zeros();
            for (slot, nk) in self.h.up[k].iter().zip([n1, n2]) {
                if let Some(u) = slot {
                    up_sum += x[*u] * cr((self.lambda * (nk + 1) as f64).sqrt());
                }
            }
            d -= (sx * up_sum - up_sum * sx) * i;
            // V^x - V^o = -2 (. V) for k = 1, V^x + V^o = 2 (V .) for k = 2
            if let Some(dn) = self.h.down[k][0] {
                d += x[dn] * sx * (i * (self.lambda * n1 as f64).sqrt());
            }
            if let Some(dn) = self.h.down[k][1] {
                d -= sx * x[dn] * (i * (self.lambda * n2 as f64).sqrt());
            }
            out[k] = d;
        }
    }
}

fn axpy(y: &mut [M2], a: f64, x: &[M2], base: &[M2]) {
    for ((yi, xi), bi) in y.iter_mut().zip(x).zip(base) {
        *yi = bi + xi * cr(a);
    }
}

fn to_m2(m: &CMatrix) -> Result<M2> {
    if m.nrows() != 2 || m.ncols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: m.nrows().max(m.ncols()) });
    }
    Ok(M2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]))
}

fn from_m2(m: &M2) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]])
}

/// Integrate the hierarchy from `initial` (any 2x2 matrix; the equations
/// are linear) and return the physical block on the output grid.
pub fn propagate_operator(initial: &CMatrix, params: &HeomParams, depth: usize) -> Result<Vec<CMatrix>> {
    params.validate()?;
    let h = Hierarchy::new(depth);
    let rhs = Rhs {
        h: &h,
        hs: M2::new(cr(0.5 * params.omega0), cr(0.0), cr(0.0), cr(-0.5 * params.omega0)),
        sx: M2::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0)),
        nu: [c(params.gamma, -params.omega0), c(params.gamma, params.omega0)],
        lambda: params.lambda,
    };
    let mut state = HierarchyState::new(&h, to_m2(initial)?);
    let tr0 = state.physical().trace();
    let (dt, per_interval) = params.step_size(depth);
    let n = h.len();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![M2::zeros(); n], vec![M2::zeros(); n], vec![M2::zeros(); n], vec![M2::zeros(); n], vec![M2::zeros(); n]);
    let mut out = Vec::with_capacity(params.steps + 1);
    out.push(from_m2(state.physical()));
    for _ in 0..params.steps {
        for _ in 0..per_interval {
            let x = &mut state.blocks;
            rhs.eval(x, &mut k1);
            axpy(&mut tmp, 0.5 * dt, &k1, x);
            rhs.eval(&tmp, &mut k2);
            axpy(&mut tmp, 0.5 * dt, &k2, x);
            rhs.eval(&tmp, &mut k3);
            axpy(&mut tmp, dt, &k3, x);
            rhs.eval(&tmp, &mut k4);
            for j in 0..n {
                x[j] += (k1[j] + (k2[j] + k3[j]) * cr(2.0) + k4[j]) * cr(dt / 6.0);
            }
        }
        let phys = state.physical();
        let drift = (phys.trace() - tr0).norm();
        if !drift.is_finite() {
            return Err(Error::NonFinite);
        }
        if drift > TRACE_TOL {
            return Err(Error::TraceDrift(drift));
        }
        out.push(from_m2(phys));
    }
    Ok(out)
}

/// Physical state on the output grid at fixed depth.
pub fn heom_propagate(rho0: &DensityMatrix, params: &HeomParams) -> Result<Vec<DensityMatrix>> {
    if rho0.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: rho0.dim() });
    }
    let traj = propagate_operator(rho0.matrix(), params, params.depth)?;
    Ok(traj.into_iter().map(|m| DensityMatrix::new_unchecked(crate::linalg::hermitian_part(&m))).collect())
}

/// Affine maps reconstructed on the output grid.
#[derive(Debug, Clone)]
pub struct HeomRun {
    pub times: Vec<f64>,
    pub maps: Vec<AffineChannel>,
    /// Depth of the returned maps.
    pub depth: usize,
    /// Sup-norm change of the maps between the last two depths.
    pub change: f64,
}

fn pauli_halves() -> [CMatrix; 4] {
    let half = |m: CMatrix| m.scale(0.5);
    [
        half(crate::linalg::identity(2)),
        half(crate::linalg::pauli_x()),
        half(crate::linalg::pauli_y()),
        half(crate::linalg::pauli_z()),
    ]
}

/// Affine maps at fixed depth, from the images of `1/2` and `s_j/2`.
pub fn affine_at_depth(params: &HeomParams, depth: usize) -> Result<Vec<AffineChannel>> {
    let inputs = pauli_halves();
    let images: Vec<Vec<CMatrix>> =
        inputs.par_iter().map(|m| propagate_operator(m, params, depth)).collect::<Result<Vec<_>>>()?;
    let paulis = [crate::linalg::pauli_x(), crate::linalg::pauli_y(), crate::linalg::pauli_z()];
    (0..=params.steps)
        .map(|t| {
            let mut a = DMatrix::zeros(3, 3);
            let mut shift = DVector::zeros(3);
            for (i, s) in paulis.iter().enumerate() {
                shift[i] = crate::linalg::trace_product(s, &images[0][t])?.re;
                for j in 0..3 {
                    a[(i, j)] = crate::linalg::trace_product(s, &images[j + 1][t])?.re;
                }
            }
            AffineChannel::new(2, a, shift)
        })
        .collect()
}

fn map_distance(a: &[AffineChannel], b: &[AffineChannel]) -> f64 {
    a.iter().zip(b).map(|(x, y)| crate::channels::affine_distance(x, y)).fold(0.0, f64::max)
}

/// Affine maps with automatic truncation control: the depth is doubled
/// from `params.depth` until the maps change by less than
/// `TRUNCATION_TOL`.
pub fn heom_affine(params: &HeomParams) -> Result<HeomRun> {
    params.validate()?;
    let mut depth = params.depth;
    let mut current = affine_at_depth(params, depth)?;
    let mut change = f64::INFINITY;
    while depth * 2 <= MAX_DEPTH {
        let next = affine_at_depth(params, depth * 2)?;
        change = map_distance(&current, &next);
        log::debug!("heom depth {} -> {}: change {:.3e}", depth, depth * 2, change);
        depth *= 2;
        current = next;
        if change < TRUNCATION_TOL {
            return Ok(HeomRun { times: params.times(), maps: current, depth, change });
        }
    }
    Err(Error::Truncation { depth, change })
}

/// Amplitude factor of the excited state in the rotating-wave solution,
/// `exp(-gamma t/2) [cosh(d t/2) + (gamma/d) sinh(d t/2)]` with
/// `d = sqrt(gamma^2 - 4 lambda)`, continued to imaginary `d`.
pub fn rwa_h(t: f64, gamma: f64, lambda: f64) -> f64 {
    let d2 = gamma * gamma - 4.0 * lambda;
    let g = 0.5 * gamma * t;
    if d2 > 0.0 {
        let d = d2.sqrt();
        let x = 0.5 * d * t;
        // exp(-g) cosh(x) and exp(-g) sinh(x) without overflow
        let ep = (x - g).exp();
        let em = (-x - g).exp();
        0.5 * (ep + em) + gamma / d * 0.5 * (ep - em)
    } else if d2 < 0.0 {
        let w = (-d2).sqrt();
        let x = 0.5 * w * t;
        (-g).exp() * (x.cos() + gamma / w * x.sin())
    } else {
        (-g).exp() * (1.0 + g)
    }
}

/// Rotating-wave channel: amplitude damping of `|0>` (the excited state)
/// with amplitude `h(t)`.
pub fn rwa_channel(t: f64, gamma: f64, lambda: f64) -> Result<crate::bloch::KrausChannel> {
    let h = rwa_h(t, gamma, lambda);
    let mut k0 = CMatrix::zeros(2, 2);
    k0[(0, 0)] = cr(h);
    k0[(1, 1)] = cr(1.0);
    let mut k1 = CMatrix::zeros(2, 2);
    k1[(1, 0)] = cr((1.0 - h * h).max(0.0).sqrt());
    crate::bloch::KrausChannel::new(vec![k0, k1])
}

/// Affine form of the rotating-wave channel: `diag(h, h, h^2)` and shift
/// `(0, 0, -(1 - h^2))`.
pub fn rwa_affine(t: f64, gamma: f64, lambda: f64) -> AffineChannel {
    let h = rwa_h(t, gamma, lambda);
    AffineChannel::new(
        2,
        DMatrix::from_diagonal(&DVector::from_column_slice(&[h, h, h * h])),
        DVector::from_column_slice(&[0.0, 0.0, -(1.0 - h * h)]),
    )
    .expect("qubit shapes")
}

/// Rotating-wave map followed by the free rotation `exp(-i w0 t sz/2)`,
/// i.e. the rotating-wave prediction in the lab frame.
pub fn rwa_affine_lab(t: f64, params: &HeomParams) -> AffineChannel {
    let base = rwa_affine(t, params.gamma, params.lambda);
    let (s, co) = (params.omega0 * t).sin_cos();
    let rot = DMatrix::from_row_slice(3, 3, &[co, -s, 0.0, s, co, 0.0, 0.0, 0.0, 1.0]);
    let rot = AffineChannel::new(2, rot, DVector::zeros(3)).expect("qubit shapes");
    rot.after(&base).expect("same dimension")
}

/// Numeric (hierarchy) and rotating-wave series of the four quantities
/// for the probe at `(theta, phi)`.
pub fn heom_qfi_series(theta: f64, phi: f64, params: &HeomParams) -> Result<(DynamicsSeries, DynamicsSeries, HeomRun)> {
    let run = heom_affine(params)?;
    qfi_series_from_run(theta, phi, params, run)
}

pub fn qfi_series_from_run(
    theta: f64,
    phi: f64,
    params: &HeomParams,
    run: HeomRun,
) -> Result<(DynamicsSeries, DynamicsSeries, HeomRun)> {
    let numeric =
        run.maps.par_iter().map(|m| numeric_quantities(m, theta, phi)).collect::<Result<Vec<_>>>()?;
    let rwa = run
        .times
        .par_iter()
        .map(|&t| numeric_quantities(&rwa_affine(t, params.gamma, params.lambda), theta, phi))
        .collect::<Result<Vec<_>>>()?;
    let numeric = DynamicsSeries::from_rows(run.times.clone(), numeric, Provenance::Numeric)?;
    let rwa = DynamicsSeries::from_rows(run.times.clone(), rwa, Provenance::Analytic)?;
    Ok((numeric, rwa, run))
}

/// Sign change of the flow between grid points `index - 1` and `index`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignChange {
    pub index: usize,
    pub t: f64,
    /// `true` when the flow turns positive (information flowing back).
    pub to_positive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub sigma: Vec<f64>,
    pub events: Vec<SignChange>,
}

/// Flow values smaller than this are treated as zero when looking for
/// sign changes.
pub const FLOW_ZERO: f64 = 1e-12;

/// Time derivative of a series on a uniform grid: central differences
/// inside, one-sided at the ends.
pub fn qfi_flow(t: &[f64], values: &[f64]) -> Result<Flow> {
    if t.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: t.len(), got: values.len() });
    }
    let n = t.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!("flow needs at least 3 grid points, got {n}")));
    }
    let dt = t[1] - t[0];
    if !(dt > 0.0) || t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1.0)) {
        return Err(Error::InvalidParameter("flow needs a uniform ascending grid".into()));
    }
    let mut sigma = vec![0.0; n];
    sigma[0] = (values[1] - values[0]) / dt;
    sigma[n - 1] = (values[n - 1] - values[n - 2]) / dt;
    for k in 1..n - 1 {
        sigma[k] = (values[k + 1] - values[k - 1]) / (2.0 * dt);
    }
    let mut events = Vec::new();
    let mut last: Option<bool> = None;
    for (k, &s) in sigma.iter().enumerate() {
        if s.abs() <= FLOW_ZERO {
            continue;
        }
        let positive = s > 0.0;
        if let Some(prev) = last {
            if prev != positive {
                events.push(SignChange { index: k, t: t[k], to_positive: positive });
            }
        }
        last = Some(positive);
    }
    Ok(Flow { sigma, events })
}
