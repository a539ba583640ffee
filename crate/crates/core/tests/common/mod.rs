//! Random states, families and channels for the integration suites.
#![allow(dead_code)]

use bloch_qfi::linalg::{c, hermitian_part, trace};
use bloch_qfi::{CMatrix, DensityMatrix, KrausChannel};
use rand::Rng;

pub fn random_complex(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// State and exact derivative of `B(l) B(l)† / Tr(...)` with `B(l) = b0 + l b1`.
pub fn family_at(b0: &CMatrix, b1: &CMatrix) -> (DensityMatrix, CMatrix) {
    let m = b0 * b0.adjoint();
    let dm = b1 * b0.adjoint() + b0 * b1.adjoint();
    let t = trace(&m).re;
    let dt = trace(&dm).re;
    let rho = hermitian_part(&m.unscale(t));
    let drho = hermitian_part(&(dm.unscale(t) - rho.scale(dt / t)));
    (DensityMatrix::new(rho).unwrap(), drho)
}

/// Rank-`rank` family generators `(b0, b1)`.
pub fn random_generators(d: usize, rank: usize, rng: &mut impl Rng) -> (CMatrix, CMatrix) {
    (random_complex(d, rank, rng), random_complex(d, rank, rng))
}

pub fn random_family(d: usize, rank: usize, rng: &mut impl Rng) -> (DensityMatrix, CMatrix) {
    let (b0, b1) = random_generators(d, rank, rng);
    family_at(&b0, &b1)
}

pub fn state_at(b0: &CMatrix, b1: &CMatrix, l: f64) -> DensityMatrix {
    family_at(&(b0 + b1.scale(l)), b1).0
}

pub fn random_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    random_complex(d, d, rng).qr().q()
}

/// Channel with `k` Kraus operators cut from a random isometry.
pub fn random_channel(d: usize, k: usize, rng: &mut impl Rng) -> KrausChannel {
    let q = random_complex(k * d, d, rng).qr().q();
    let ops = (0..k).map(|i| q.rows(i * d, d).into_owned()).collect();
    KrausChannel::new(ops).unwrap()
}

pub fn random_pure_vector(d: usize, rng: &mut impl Rng) -> Vec<num_complex::Complex64> {
    let v = random_complex(d, 1, rng);
    let v = v.unscale(v.norm());
    v.iter().copied().collect()
}
