//! Orthonormal su(d) generator basis and its structure constants.
//!
//! The basis consists of the symmetric off-diagonal matrices
//! `S_{m,n} = |m><n| + |n><m|`, the antisymmetric ones
//! `A_{m,n} = -i(|m><n| - |n><m|)`, and the diagonal matrices `D_k`,
//! normalized so that `Tr(eta_i eta_j) = 2 delta_ij`. The structure constants
//! are defined through
//!
//! ```text
//! [eta_i, eta_j] = 2i sum_k f_ijk eta_k
//! {eta_i, eta_j} = (4/d) delta_ij 1 + 2 sum_k g_ijk eta_k
//! ```

use std::collections::BTreeMap;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{anticommutator, commutator, cr, ensure_hermitian, trace, trace_product, CMatrix, I};

/// Threshold below which structure-constant entries are not stored.
const TENSOR_CUTOFF: f64 = 1e-14;

/// Order in which the off-diagonal index pairs `(m, n)`, `m < n`, are laid
/// out inside the `S` and `A` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairOrder {
    /// Largest separation `n - m` first, ties broken by ascending `m`.
    /// For d = 3 this reproduces the usual Gell-Mann listing
    /// `(1,3), (1,2), (2,3)`, and the extremal coherence `(1, d)` always
    /// occupies the leading slot of each block.
    #[default]
    Separation,
    /// Plain lexicographic `(m, n)` order.
    Lexicographic,
}

impl PairOrder {
    /// Zero-based pairs `(m, n)` with `m < n < d`.
    pub fn pairs(self, d: usize) -> Vec<(usize, usize)> {
        let mut pairs = Vec::with_capacity(d * (d - 1) / 2);
        match self {
            PairOrder::Lexicographic => {
                for m in 0..d {
                    for n in (m + 1)..d {
                        pairs.push((m, n));
                    }
                }
            }
            PairOrder::Separation => {
                for sep in (1..d).rev() {
                    for m in 0..(d - sep) {
                        pairs.push((m, m + sep));
                    }
                }
            }
        }
        pairs
    }
}

/// Which family a generator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Symmetric { m: usize, n: usize },
    Antisymmetric { m: usize, n: usize },
    Diagonal { k: usize },
}

/// Sparse rank-3 tensor keyed by `(i, j, k)`.
pub type Tensor3 = BTreeMap<(usize, usize, usize), f64>;

#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    order: PairOrder,
    generators: Vec<CMatrix>,
    kinds: Vec<GeneratorKind>,
    f: Tensor3,
    g: Tensor3,
}

impl GeneratorBasis {
    /// Basis for dimension `d` in the default pair order.
    pub fn new(d: usize) -> Result<Self> {
        Self::with_order(d, PairOrder::default())
    }

    pub fn with_order(d: usize, order: PairOrder) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!("generator dimension must be >= 2, got {d}")));
        }
        let pairs = order.pairs(d);
        let mut generators = Vec::with_capacity(d * d - 1);
        let mut kinds = Vec::with_capacity(d * d - 1);
        for &(m, n) in &pairs {
            let mut s = CMatrix::zeros(d, d);
            s[(m, n)] = cr(1.0);
            s[(n, m)] = cr(1.0);
            generators.push(s);
            kinds.push(GeneratorKind::Symmetric { m, n });
        }
        for &(m, n) in &pairs {
            let mut a = CMatrix::zeros(d, d);
            a[(m, n)] = -I;
            a[(n, m)] = I;
            generators.push(a);
            kinds.push(GeneratorKind::Antisymmetric { m, n });
        }
        for k in 1..d {
            let norm = (2.0 / (k * (k + 1)) as f64).sqrt();
            let mut dm = CMatrix::zeros(d, d);
            for m in 0..k {
                dm[(m, m)] = cr(norm);
            }
            dm[(k, k)] = cr(-(k as f64) * norm);
            generators.push(dm);
            kinds.push(GeneratorKind::Diagonal { k });
        }
        let (f, g) = compute_structure_constants(&generators);
        Ok(Self { dim: d, order, generators, kinds, f, g })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `d^2 - 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn order(&self) -> PairOrder {
        self.order
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &CMatrix {
        &self.generators[i]
    }

    pub fn kinds(&self) -> &[GeneratorKind] {
        &self.kinds
    }

    /// Position of `S_{m,n}` (zero-based, `m < n`).
    pub fn symmetric_index(&self, m: usize, n: usize) -> Option<usize> {
        self.kinds.iter().position(|k| *k == GeneratorKind::Symmetric { m, n })
    }

    /// Position of `A_{m,n}` (zero-based, `m < n`).
    pub fn antisymmetric_index(&self, m: usize, n: usize) -> Option<usize> {
        self.kinds.iter().position(|k| *k == GeneratorKind::Antisymmetric { m, n })
    }

    /// Antisymmetric structure constants `f_ijk`.
    pub fn f(&self) -> &Tensor3 {
        &self.f
    }

    /// Symmetric structure constants `g_ijk`.
    pub fn g(&self) -> &Tensor3 {
        &self.g
    }

    pub fn f_at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.f.get(&(i, j, k)).copied().unwrap_or(0.0)
    }

    pub fn g_at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.g.get(&(i, j, k)).copied().unwrap_or(0.0)
    }

    /// `sum_k coeffs_k eta_k`.
    pub fn combine(&self, coeffs: &[f64]) -> Result<CMatrix> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: coeffs.len() });
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (eta, &x) in self.generators.iter().zip(coeffs) {
            if x != 0.0 {
                out += eta.scale(x);
            }
        }
        Ok(out)
    }

    /// Expand a Hermitian matrix as `t0 1 + sum_k x_k eta_k` with
    /// `t0 = Tr(X)/d` and `x_k = Tr(X eta_k)/2`.
    pub fn expand_hermitian(&self, x: &CMatrix) -> Result<(f64, DVector<f64>)> {
        let d = ensure_hermitian(x, 1e-10)?;
        if d != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: d });
        }
        let t0 = trace(x).re / d as f64;
        let coeffs = self.generators.iter().map(|eta| 0.5 * trace_product(x, eta).unwrap().re);
        Ok((t0, DVector::from_iterator(self.len(), coeffs)))
    }

    /// Inverse of [`expand_hermitian`](Self::expand_hermitian).
    pub fn reconstruct(&self, t0: f64, coeffs: &[f64]) -> Result<CMatrix> {
        let mut out = self.combine(coeffs)?;
        for i in 0..self.dim {
            out[(i, i)] += cr(t0);
        }
        Ok(out)
    }

    /// Symmetric matrix `G_jk = sum_i g_ijk w_i`.
    pub fn g_contract(&self, w: &[f64]) -> nalgebra::DMatrix<f64> {
        let n = self.len();
        let mut gm = nalgebra::DMatrix::zeros(n, n);
        for (&(i, j, k), &v) in &self.g {
            gm[(j, k)] += v * w[i];
        }
        gm
    }
}

fn compute_structure_constants(eta: &[CMatrix]) -> (Tensor3, Tensor3) {
    let n = eta.len();
    let mut f = Tensor3::new();
    let mut g = Tensor3::new();
    for i in 0..n {
        for j in 0..n {
            let comm = commutator(&eta[i], &eta[j]);
            let anti = anticommutator(&eta[i], &eta[j]);
            for k in 0..n {
                let fv = (trace_product(&comm, &eta[k]).unwrap() / (4.0 * I)).re;
                if fv.abs() > TENSOR_CUTOFF {
                    f.insert((i, j, k), fv);
                }
                let gv = trace_product(&anti, &eta[k]).unwrap().re / 4.0;
                if gv.abs() > TENSOR_CUTOFF {
                    g.insert((i, j, k), gv);
                }
            }
        }
    }
    (f, g)
}
