//! Random states and families shared by the unit tests.

use rand::Rng;

use crate::linalg::{c, hermitian_part, trace, CMatrix, DensityMatrix};

pub fn random_complex(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `G G† / Tr(G G†)` with `G` a random d x rank matrix.
pub fn random_state(d: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = random_complex(d, rank, rng);
    let m = &g * g.adjoint();
    let tr = trace(&m).re;
    DensityMatrix::new(hermitian_part(&m.unscale(tr))).unwrap()
}

/// State and exact derivative at `lambda = 0` of the family
/// `B(l) B(l)† / Tr(B(l) B(l)†)` with `B(l) = B0 + l B1`.
pub fn random_family(d: usize, rank: usize, rng: &mut impl Rng) -> (DensityMatrix, CMatrix) {
    let b0 = random_complex(d, rank, rng);
    let b1 = random_complex(d, rank, rng);
    family_at(&b0, &b1)
}

pub fn family_at(b0: &CMatrix, b1: &CMatrix) -> (DensityMatrix, CMatrix) {
    let m = b0 * b0.adjoint();
    let dm = b1 * b0.adjoint() + b0 * b1.adjoint();
    let t = trace(&m).re;
    let dt = trace(&dm).re;
    let rho = hermitian_part(&m.unscale(t));
    let drho = hermitian_part(&(dm.unscale(t) - rho.scale(dt / t)));
    (DensityMatrix::new(rho).unwrap(), drho)
}
