//! Single-qubit decoherence channels and the QFI dynamics they induce on
//! the pure probe `cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>`, whose
//! Bloch vector is `(sin t cos p, sin t sin p, cos t)`.
//!
//! | channel | A                         | c                      |
//! |---------|---------------------------|------------------------|
//! | PDC     | diag(s, s, 1)             | 0                      |
//! | DPC     | diag(s, s, s)             | 0                      |
//! | ADC     | diag(sqrt s, sqrt s, s)   | (0, 0, -p)             |
//! | GADC    | diag(sqrt s, sqrt s, s)   | (0, 0, -p (alpha - beta)) |
//!
//! with `p = 1 - s`, `alpha = (n+1)/(2n+1)`, `beta = n/(2n+1)`. The
//! amplitude-damping channels relax towards `|1>`, the `-z` pole.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::bloch::{kraus_to_affine, AffineChannel, BlochVector, KrausChannel};
use crate::error::{Error, Result};
use crate::fisher::{qfi_bloch_qubit, skew_bloch_qubit, QUBIT_PURE_GAP};
use crate::generators::GeneratorBasis;
use crate::linalg::{cr, identity, pauli_x, pauli_y, pauli_z, CMatrix};
use crate::output::{csv_table, format_g12};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Pdc,
    Dpc,
    Adc,
    Gadc,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 4] = [ChannelKind::Pdc, ChannelKind::Dpc, ChannelKind::Adc, ChannelKind::Gadc];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Pdc => "pdc",
            ChannelKind::Dpc => "dpc",
            ChannelKind::Adc => "adc",
            ChannelKind::Gadc => "gadc",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pdc" => Ok(ChannelKind::Pdc),
            "dpc" => Ok(ChannelKind::Dpc),
            "adc" => Ok(ChannelKind::Adc),
            "gadc" => Ok(ChannelKind::Gadc),
            other => Err(Error::InvalidParameter(format!("unknown channel `{other}`"))),
        }
    }
}

/// The four information quantities tracked along a dynamics run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    FTheta,
    FPhi,
    ITheta,
    IPhi,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::FTheta, Quantity::FPhi, Quantity::ITheta, Quantity::IPhi];

    pub fn column(self) -> &'static str {
        match self {
            Quantity::FTheta => "F_theta",
            Quantity::FPhi => "F_phi",
            Quantity::ITheta => "I_theta",
            Quantity::IPhi => "I_phi",
        }
    }
}

/// Named channel with its clock. `s(t) = exp(-gamma t / 2)` for PDC and
/// DPC, `s(t) = exp(-gamma t (2n + 1) / 2)` for ADC and GADC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub gamma: f64,
    pub nbar: f64,
    /// Override of the DPC clock rate, in units of `gamma`.
    pub dpc_rate: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, gamma: f64, nbar: f64) -> Result<Self> {
        let spec = Self { kind, gamma, nbar, dpc_rate: 1.0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_dpc_rate(mut self, rate: f64) -> Result<Self> {
        self.dpc_rate = rate;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if !(self.nbar >= 0.0) || !self.nbar.is_finite() {
            return Err(Error::InvalidParameter(format!("nbar must be >= 0, got {}", self.nbar)));
        }
        if self.kind != ChannelKind::Gadc && self.nbar != 0.0 {
            return Err(Error::InvalidParameter(format!("nbar applies to gadc only, not {}", self.kind)));
        }
        if !(self.dpc_rate > 0.0) || !self.dpc_rate.is_finite() {
            return Err(Error::InvalidParameter(format!("dpc rate must be > 0, got {}", self.dpc_rate)));
        }
        Ok(())
    }

    /// Survival parameter `s` (or `s-bar` for GADC) at time `t`.
    pub fn s(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")));
        }
        let rate = match self.kind {
            ChannelKind::Pdc => 0.5 * self.gamma,
            ChannelKind::Dpc => 0.5 * self.gamma * self.dpc_rate,
            ChannelKind::Adc | ChannelKind::Gadc => 0.5 * self.gamma * (2.0 * self.nbar + 1.0),
        };
        Ok((-rate * t).exp())
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("s must lie in [0, 1], got {s}")));
    }
    Ok(())
}

fn check_nbar(nbar: f64) -> Result<()> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::InvalidParameter(format!("nbar must be >= 0, got {nbar}")));
    }
    Ok(())
}

fn thermal_weights(nbar: f64) -> (f64, f64) {
    let den = 2.0 * nbar + 1.0;
    ((nbar + 1.0) / den, nbar / den)
}

fn ket_bra(i: usize, j: usize, z: num_complex::Complex64) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(i, j)] = z;
    m
}

/// Kraus operators at survival parameter `s`.
pub fn kraus_operators(kind: ChannelKind, s: f64, nbar: f64) -> Result<KrausChannel> {
    check_s(s)?;
    check_nbar(nbar)?;
    let p = 1.0 - s;
    let ops = match kind {
        ChannelKind::Pdc => vec![
            identity(2).scale(s.sqrt()),
            ket_bra(0, 0, cr(p.sqrt())),
            ket_bra(1, 1, cr(p.sqrt())),
        ],
        ChannelKind::Dpc => vec![
            identity(2).scale((1.0 + 3.0 * s).sqrt() / 2.0),
            pauli_x().scale(p.sqrt() / 2.0),
            pauli_y().scale(p.sqrt() / 2.0),
            pauli_z().scale(p.sqrt() / 2.0),
        ],
        ChannelKind::Adc => gadc_kraus(s, 1.0, 0.0),
        ChannelKind::Gadc => {
            let (alpha, beta) = thermal_weights(nbar);
            gadc_kraus(s, alpha, beta)
        }
    };
    KrausChannel::new(ops)
}

fn gadc_kraus(s: f64, alpha: f64, beta: f64) -> Vec<CMatrix> {
    let p = 1.0 - s;
    let diag = |a: f64, b: f64| {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = cr(a);
        m[(1, 1)] = cr(b);
        m
    };
    let mut ops = vec![
        diag(s.sqrt(), 1.0).scale(alpha.sqrt()),
        ket_bra(1, 0, cr((alpha * p).sqrt())),
    ];
    if beta > 0.0 {
        ops.push(diag(1.0, s.sqrt()).scale(beta.sqrt()));
        ops.push(ket_bra(0, 1, cr((beta * p).sqrt())));
    }
    ops
}

/// Affine form written out directly.
pub fn affine_closed(kind: ChannelKind, s: f64, nbar: f64) -> Result<AffineChannel> {
    check_s(s)?;
    check_nbar(nbar)?;
    let p = 1.0 - s;
    let (diag, shift) = match kind {
        ChannelKind::Pdc => ([s, s, 1.0], 0.0),
        ChannelKind::Dpc => ([s, s, s], 0.0),
        ChannelKind::Adc => ([s.sqrt(), s.sqrt(), s], -p),
        ChannelKind::Gadc => {
            let (alpha, beta) = thermal_weights(nbar);
            ([s.sqrt(), s.sqrt(), s], -p * (alpha - beta))
        }
    };
    AffineChannel::new(
        2,
        DMatrix::from_diagonal(&DVector::from_column_slice(&diag)),
        DVector::from_column_slice(&[0.0, 0.0, shift]),
    )
}

/// Kraus form and its affine image at time `t`.
pub fn make_channel(spec: &ChannelSpec, t: f64) -> Result<(KrausChannel, AffineChannel)> {
    spec.validate()?;
    let s = spec.s(t)?;
    let kraus = kraus_operators(spec.kind, s, spec.nbar)?;
    let basis = GeneratorBasis::new(2)?;
    let affine = kraus_to_affine(&kraus, &basis)?;
    Ok((kraus, affine))
}

/// Probe Bloch vector and its derivatives in theta and phi.
pub fn probe(theta: f64, phi: f64) -> (BlochVector, DVector<f64>, DVector<f64>) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let w = BlochVector::from_slice(2, &[st * cp, st * sp, ct]).expect("qubit vector");
    let dtheta = DVector::from_column_slice(&[ct * cp, ct * sp, -st]);
    let dphi = DVector::from_column_slice(&[-st * sp, st * cp, 0.0]);
    (w, dtheta, dphi)
}

/// The four quantities after sending the probe through `ch`, with the
/// parameter derivatives propagated as `A dw`.
pub fn numeric_quantities(ch: &AffineChannel, theta: f64, phi: f64) -> Result<[f64; 4]> {
    let (w, dth, dph) = probe(theta, phi);
    let out = ch.apply(&w)?;
    let dth = ch.apply_derivative(&dth);
    let dph = ch.apply_derivative(&dph);
    Ok([
        qfi_bloch_qubit(&out, dth.as_slice())?,
        qfi_bloch_qubit(&out, dph.as_slice())?,
        skew_bloch_qubit(&out, dth.as_slice())?,
        skew_bloch_qubit(&out, dph.as_slice())?,
    ])
}

/// Closed-form value of one quantity after the channel, as a function of
/// the probe angle and the survival parameter (`s-bar` for GADC).
pub fn table1_analytic(kind: ChannelKind, q: Quantity, theta: f64, s: f64, nbar: f64) -> Result<f64> {
    if !(-1e-12..=PI + 1e-12).contains(&theta) {
        return Err(Error::InvalidParameter(format!("theta must lie in [0, pi], got {theta}")));
    }
    check_s(s)?;
    check_nbar(nbar)?;
    let (st, ct) = theta.sin_cos();
    let s2 = st * st;
    let value = match kind {
        ChannelKind::Pdc => {
            let x = st * (1.0 - s * s).sqrt();
            match q {
                Quantity::FTheta => 1.0,
                Quantity::FPhi => s * s * s2,
                Quantity::ITheta => {
                    (3.0 + 4.0 * x + 2.0 * s * s * ct * ct - (2.0 * theta).cos()) / (2.0 * (1.0 + x) * (1.0 + x))
                }
                Quantity::IPhi => 2.0 * s * s * s2 / (1.0 + x),
            }
        }
        ChannelKind::Dpc => {
            let r = (1.0 - s * s).sqrt();
            match q {
                Quantity::FTheta => s * s,
                Quantity::FPhi => s * s * s2,
                Quantity::ITheta => 2.0 - 2.0 * r,
                Quantity::IPhi => 2.0 * s * s * s2 / (1.0 + r),
            }
        }
        ChannelKind::Adc => {
            let y = 2.0 * (theta / 2.0).cos().powi(2) * (s * (1.0 - s)).sqrt();
            match q {
                Quantity::FTheta => s,
                Quantity::FPhi => s * s2,
                Quantity::ITheta => {
                    s * (3.0 + 4.0 * y + 2.0 * s * s2 + (2.0 * theta).cos()) / (2.0 * (1.0 + y) * (1.0 + y))
                }
                Quantity::IPhi => 2.0 * s * s2 / (1.0 + y),
            }
        }
        ChannelKind::Gadc => {
            let (alpha, beta) = thermal_weights(nbar);
            let p = 1.0 - s;
            let ab = alpha - beta;
            let z2 = (1.0 - s * s2 - (p * ab - s * ct).powi(2)).max(0.0);
            // on the pure boundary the second terms are 0/0 and drop out
            let pure = z2 <= QUBIT_PURE_GAP;
            let z = if pure { 0.0 } else { z2.sqrt() };
            let r1 = s * (1.0 + s + p * (2.0 * theta).cos());
            let r2 = p * p * s * s * (ab + ct).powi(2) * s2;
            match q {
                Quantity::FTheta if pure => r1 / 2.0,
                Quantity::FTheta => r1 / 2.0 + r2 / z2,
                Quantity::FPhi => s * s2,
                Quantity::ITheta if pure => r1 / (1.0 + z),
                Quantity::ITheta => r1 / (1.0 + z) + r2 * (1.0 / z2 - 1.0 / ((1.0 + z) * (1.0 + z))),
                Quantity::IPhi => 2.0 * s * s2 / (1.0 + z),
            }
        }
    };
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Numeric,
    Both,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(Mode::Analytic),
            "numeric" => Ok(Mode::Numeric),
            "both" => Ok(Mode::Both),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Numeric,
}

/// Time series of the four quantities on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsSeries {
    pub t: Vec<f64>,
    pub f_theta: Vec<f64>,
    pub f_phi: Vec<f64>,
    pub i_theta: Vec<f64>,
    pub i_phi: Vec<f64>,
    pub provenance: Provenance,
}

impl DynamicsSeries {
    pub fn from_rows(t: Vec<f64>, rows: Vec<[f64; 4]>, provenance: Provenance) -> Result<Self> {
        if t.len() != rows.len() {
            return Err(Error::DimensionMismatch { expected: t.len(), got: rows.len() });
        }
        if let Some(bad) = rows.iter().flatten().find(|&&v| v < -1e-9 || !v.is_finite()) {
            return Err(Error::Consistency(*bad));
        }
        let col = |k: usize| rows.iter().map(|r| r[k]).collect();
        Ok(Self { f_theta: col(0), f_phi: col(1), i_theta: col(2), i_phi: col(3), t, provenance })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn get(&self, q: Quantity) -> &[f64] {
        match q {
            Quantity::FTheta => &self.f_theta,
            Quantity::FPhi => &self.f_phi,
            Quantity::ITheta => &self.i_theta,
            Quantity::IPhi => &self.i_phi,
        }
    }

    pub fn row(&self, k: usize) -> [f64; 4] {
        [self.f_theta[k], self.f_phi[k], self.i_theta[k], self.i_phi[k]]
    }

    /// Largest absolute difference over all quantities and grid points.
    pub fn max_deviation(&self, other: &DynamicsSeries) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        Ok((0..self.len())
            .flat_map(|k| {
                let (a, b) = (self.row(k), other.row(k));
                (0..4).map(move |i| (a[i] - b[i]).abs())
            })
            .fold(0.0, f64::max))
    }
}

/// Output of a dynamics run: primary series plus an optional analytic
/// overlay and their deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct Dynamics {
    pub primary: DynamicsSeries,
    pub overlay: Option<DynamicsSeries>,
    pub max_deviation: Option<f64>,
}

/// Agreement required between the pipelines in `both` mode.
pub const PIPELINE_TOL: f64 = 1e-8;

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty time grid".into()));
    }
    if grid[0] < 0.0 {
        return Err(Error::InvalidParameter(format!("time grid starts at {} < 0", grid[0])));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("time grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Evaluate the four quantities along `grid`.
///
/// ADC runs are evaluated as GADC with `nbar = 0`, which is the same
/// channel, so the two produce identical output.
pub fn channel_dynamics(spec: &ChannelSpec, theta: f64, phi: f64, grid: &[f64], mode: Mode) -> Result<Dynamics> {
    spec.validate()?;
    check_grid(grid)?;
    let spec = if spec.kind == ChannelKind::Adc { ChannelSpec { kind: ChannelKind::Gadc, ..*spec } } else { *spec };
    let numeric = || -> Result<DynamicsSeries> {
        let rows = grid
            .par_iter()
            .map(|&t| {
                let (_, affine) = make_channel(&spec, t)?;
                numeric_quantities(&affine, theta, phi)
            })
            .collect::<Result<Vec<_>>>()?;
        DynamicsSeries::from_rows(grid.to_vec(), rows, Provenance::Numeric)
    };
    let analytic = || -> Result<DynamicsSeries> {
        let rows = grid
            .par_iter()
            .map(|&t| {
                let s = spec.s(t)?;
                let mut row = [0.0; 4];
                for (k, q) in Quantity::ALL.iter().enumerate() {
                    row[k] = table1_analytic(spec.kind, *q, theta, s, spec.nbar)?;
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        DynamicsSeries::from_rows(grid.to_vec(), rows, Provenance::Analytic)
    };
    match mode {
        Mode::Numeric => Ok(Dynamics { primary: numeric()?, overlay: None, max_deviation: None }),
        Mode::Analytic => Ok(Dynamics { primary: analytic()?, overlay: None, max_deviation: None }),
        Mode::Both => {
            let (num, an) = rayon::join(numeric, analytic);
            let (num, an) = (num?, an?);
            let dev = num.max_deviation(&an)?;
            if dev > PIPELINE_TOL {
                return Err(Error::Consistency(dev));
            }
            Ok(Dynamics { primary: num, overlay: Some(an), max_deviation: Some(dev) })
        }
    }
}

impl Dynamics {
    /// CSV with columns `t,F_theta,F_phi,I_theta,I_phi`, followed by the
    /// same names suffixed `_an` when an overlay is present, then any
    /// `extra` columns.
    pub fn to_csv_with(&self, extra: &[(&str, &[f64])]) -> Result<String> {
        let mut header: Vec<String> = vec!["t".into()];
        header.extend(Quantity::ALL.iter().map(|q| q.column().to_string()));
        if self.overlay.is_some() {
            header.extend(Quantity::ALL.iter().map(|q| format!("{}_an", q.column())));
        }
        for (name, col) in extra {
            if col.len() != self.primary.len() {
                return Err(Error::DimensionMismatch { expected: self.primary.len(), got: col.len() });
            }
            header.push(name.to_string());
        }
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = (0..self.primary.len()).map(|k| {
            let mut row = vec![format_g12(self.primary.t[k])];
            row.extend(self.primary.row(k).iter().map(|&v| format_g12(v)));
            if let Some(ov) = &self.overlay {
                row.extend(ov.row(k).iter().map(|&v| format_g12(v)));
            }
            row.extend(extra.iter().map(|(_, col)| format_g12(col[k])));
            row
        });
        Ok(csv_table(&header_refs, rows))
    }

    pub fn to_csv(&self) -> String {
        self.to_csv_with(&[]).expect("no extra columns")
    }
}

/// `(A, c)` of a qubit channel compared entrywise.
pub fn affine_distance(a: &AffineChannel, b: &AffineChannel) -> f64 {
    (a.matrix() - b.matrix()).amax().max((a.shift() - b.shift()).amax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{apply_kraus, from_bloch, to_bloch};
    use crate::linalg::DensityMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const THETAS: [f64; 4] = [0.1, PI / 4.0, PI / 2.0, 2.0];

    fn s_grid() -> Vec<f64> {
        (0..=20).map(|k| k as f64 / 20.0).collect()
    }

    #[test]
    fn kraus_sets_are_complete() {
        for kind in ChannelKind::ALL {
            for s in s_grid() {
                for nbar in [0.0, 1.0, 3.5] {
                    let k = kraus_operators(kind, s, nbar).unwrap();
                    let sum = k.operators().iter().fold(CMatrix::zeros(2, 2), |a, m| a + m.adjoint() * m);
                    assert!(crate::linalg::frobenius(&(sum - identity(2))) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn affine_forms_match_kraus() {
        let b = GeneratorBasis::new(2).unwrap();
        for kind in ChannelKind::ALL {
            for s in s_grid() {
                for nbar in [0.0, 1.0] {
                    let k = kraus_operators(kind, s, nbar).unwrap();
                    let from_kraus = kraus_to_affine(&k, &b).unwrap();
                    let closed = affine_closed(kind, s, nbar).unwrap();
                    assert!(affine_distance(&from_kraus, &closed) < 1e-14, "{kind} s={s}");
                }
            }
        }
    }

    #[test]
    fn examples_of_affine_forms() {
        let a = affine_closed(ChannelKind::Pdc, 0.3, 0.0).unwrap();
        assert_eq!(a.matrix().diagonal().as_slice(), &[0.3, 0.3, 1.0]);
        assert_eq!(a.shift().amax(), 0.0);
        let a = affine_closed(ChannelKind::Dpc, 0.6, 0.0).unwrap();
        assert_eq!(a.matrix(), &DMatrix::identity(3, 3).scale(0.6));
        let a = affine_closed(ChannelKind::Adc, 0.25, 0.0).unwrap();
        assert_eq!(a.matrix().diagonal().as_slice(), &[0.5, 0.5, 0.25]);
        assert_eq!(a.shift()[2], -0.75);
        // n = 1 thermal weights 2/3 and 1/3
        let a = affine_closed(ChannelKind::Gadc, 0.5, 1.0).unwrap();
        assert!((a.shift()[2] + 0.5 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn gadc_at_zero_temperature_is_adc() {
        for s in s_grid() {
            let g = kraus_operators(ChannelKind::Gadc, s, 0.0).unwrap();
            let a = kraus_operators(ChannelKind::Adc, s, 0.0).unwrap();
            assert_eq!(g.operators(), a.operators());
        }
        let grid = crate::output::time_grid(5.0, 50);
        let adc = ChannelSpec::new(ChannelKind::Adc, 1.0, 0.0).unwrap();
        let gadc = ChannelSpec::new(ChannelKind::Gadc, 1.0, 0.0).unwrap();
        for mode in [Mode::Analytic, Mode::Numeric, Mode::Both] {
            let x = channel_dynamics(&adc, 1.1, 0.4, &grid, mode).unwrap();
            let y = channel_dynamics(&gadc, 1.1, 0.4, &grid, mode).unwrap();
            assert_eq!(x.to_csv(), y.to_csv());
        }
    }

    #[test]
    fn amplitude_damping_relaxes_to_the_south_pole() {
        let b = GeneratorBasis::new(2).unwrap();
        let k = kraus_operators(ChannelKind::Adc, 0.0, 0.0).unwrap();
        let out = apply_kraus(&k, &DensityMatrix::pure(&[cr(1.0), cr(0.0)]).unwrap()).unwrap();
        let w = to_bloch(&out, &b).unwrap();
        assert!((w.as_slice()[2] + 1.0).abs() < 1e-15);
        // thermal fixed point of the GADC has w_z = -(alpha - beta)
        let k = kraus_operators(ChannelKind::Gadc, 0.0, 2.0).unwrap();
        let out = apply_kraus(&k, &DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((to_bloch(&out, &b).unwrap().as_slice()[2] + 0.2).abs() < 1e-15);
    }

    #[test]
    fn table_matches_pipeline() {
        for kind in ChannelKind::ALL {
            for nbar in [0.0, 1.0] {
                for &theta in &THETAS {
                    for s in s_grid() {
                        let ch = affine_closed(kind, s, nbar).unwrap();
                        let num = numeric_quantities(&ch, theta, 0.3).unwrap();
                        for (k, q) in Quantity::ALL.iter().enumerate() {
                            let an = table1_analytic(kind, *q, theta, s, nbar).unwrap();
                            assert!((an - num[k]).abs() <= 1e-8, "{kind} {q:?} theta={theta} s={s} nbar={nbar}: {an} vs {}", num[k]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn table_examples() {
        for s in s_grid() {
            let r = (1.0 - s * s).sqrt();
            let h = PI / 2.0;
            let val = |kind, q| table1_analytic(kind, q, h, s, 0.0).unwrap();
            assert_eq!(val(ChannelKind::Pdc, Quantity::FTheta), 1.0);
            assert!((val(ChannelKind::Pdc, Quantity::FPhi) - s * s).abs() < 1e-15);
            assert!((val(ChannelKind::Pdc, Quantity::IPhi) - (2.0 - 2.0 * r)).abs() < 1e-14);
            assert!((val(ChannelKind::Pdc, Quantity::ITheta) - 2.0 / (1.0 + r)).abs() < 1e-14);
            assert!((val(ChannelKind::Adc, Quantity::FTheta) - s).abs() < 1e-15);
            assert!((val(ChannelKind::Adc, Quantity::FPhi) - s).abs() < 1e-15);
        }
        assert!(table1_analytic(ChannelKind::Pdc, Quantity::FTheta, 4.0, 0.5, 0.0).is_err());
        assert!(table1_analytic(ChannelKind::Pdc, Quantity::FTheta, 1.0, 1.5, 0.0).is_err());
        assert!(table1_analytic(ChannelKind::Gadc, Quantity::FTheta, 1.0, 0.5, -1.0).is_err());
    }

    #[test]
    fn initial_values_are_the_pure_state_ones() {
        let grid = [0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in ChannelKind::ALL {
            let nbar = if kind == ChannelKind::Gadc { 1.0 } else { 0.0 };
            let spec = ChannelSpec::new(kind, 0.7, nbar).unwrap();
            let theta = rng.gen_range(0.05..3.0);
            let d = channel_dynamics(&spec, theta, 0.2, &grid, Mode::Both).unwrap();
            let s2 = theta.sin().powi(2);
            let expect = [1.0, s2, 2.0, 2.0 * s2];
            for (a, b) in d.primary.row(0).iter().zip(expect) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pdc_behaviour() {
        let spec = ChannelSpec::new(ChannelKind::Pdc, 1.0, 0.0).unwrap();
        let grid = crate::output::time_grid(60.0, 600);
        let d = channel_dynamics(&spec, PI / 2.0, 0.0, &grid, Mode::Both).unwrap();
        assert!(d.primary.f_theta.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        assert!(d.primary.f_phi.windows(2).all(|w| w[1] < w[0]));
        assert!(*d.primary.f_phi.last().unwrap() < 1e-12);
        assert!((d.primary.i_theta[0] - 2.0).abs() < 1e-12);
        assert!((d.primary.i_theta.last().unwrap() - 1.0).abs() < 1e-6);
        assert!(d.max_deviation.unwrap() <= PIPELINE_TOL);
        let csv = d.to_csv();
        assert!(csv.starts_with("t,F_theta,F_phi,I_theta,I_phi,F_theta_an,F_phi_an,I_theta_an,I_phi_an\n"));
        assert_eq!(csv.lines().nth(1).unwrap().split(',').nth(1).unwrap(), "1");
    }

    #[test]
    fn hotter_bath_loses_information_faster() {
        let grid = crate::output::time_grid(4.0, 40);
        let cold = channel_dynamics(&ChannelSpec::new(ChannelKind::Gadc, 1.0, 0.0).unwrap(), 1.0, 0.0, &grid, Mode::Numeric)
            .unwrap()
            .primary;
        let hot = channel_dynamics(&ChannelSpec::new(ChannelKind::Gadc, 1.0, 1.0).unwrap(), 1.0, 0.0, &grid, Mode::Numeric)
            .unwrap()
            .primary;
        for q in Quantity::ALL {
            for k in 1..grid.len() {
                assert!(hot.get(q)[k] < cold.get(q)[k], "{q:?} at t={}", grid[k]);
            }
        }
    }

    #[test]
    fn monotone_in_time() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = crate::output::time_grid(6.0, 120);
        for kind in ChannelKind::ALL {
            let nbar = if kind == ChannelKind::Gadc { 0.5 } else { 0.0 };
            let spec = ChannelSpec::new(kind, 1.0, nbar).unwrap();
            for _ in 0..5 {
                let theta = rng.gen_range(0.01..PI - 0.01);
                let d = channel_dynamics(&spec, theta, rng.gen_range(0.0..6.0), &grid, Mode::Numeric).unwrap();
                for q in Quantity::ALL {
                    assert!(d.primary.get(q).windows(2).all(|w| w[1] <= w[0] + 1e-9), "{kind} {q:?}");
                }
            }
        }
    }

    #[test]
    fn channel_output_matches_kraus_on_random_states() {
        let b = GeneratorBasis::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kind in ChannelKind::ALL {
            let spec = ChannelSpec::new(kind, 0.8, if kind == ChannelKind::Gadc { 1.0 } else { 0.0 }).unwrap();
            let (k, a) = make_channel(&spec, 1.3).unwrap();
            for _ in 0..20 {
                let rho = crate::testutil::random_state(2, 2, &mut rng);
                let via_kraus = to_bloch(&apply_kraus(&k, &rho).unwrap(), &b).unwrap();
                let via_affine = a.apply(&to_bloch(&rho, &b).unwrap()).unwrap();
                assert!((via_kraus.omega() - via_affine.omega()).amax() < 1e-10);
                assert!(from_bloch(&via_affine, &b).is_ok());
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(ChannelSpec::new(ChannelKind::Gadc, 1.0, -0.5).is_err());
        assert!(ChannelSpec::new(ChannelKind::Pdc, -1.0, 0.0).is_err());
        assert!(ChannelSpec::new(ChannelKind::Pdc, 1.0, 1.0).is_err());
        assert!("xyz".parse::<ChannelKind>().is_err());
        assert_eq!("GADC".parse::<ChannelKind>().unwrap(), ChannelKind::Gadc);
        let spec = ChannelSpec::new(ChannelKind::Pdc, 1.0, 0.0).unwrap();
        assert!(spec.s(-1.0).is_err());
        assert_eq!(spec.s(0.0).unwrap(), 1.0);
        assert!(channel_dynamics(&spec, 1.0, 0.0, &[0.0, 0.0], Mode::Numeric).is_err());
        assert!(channel_dynamics(&spec, 1.0, 0.0, &[], Mode::Numeric).is_err());
        let dpc = ChannelSpec::new(ChannelKind::Dpc, 1.0, 0.0).unwrap().with_dpc_rate(2.0).unwrap();
        assert!((dpc.s(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
    }
}
