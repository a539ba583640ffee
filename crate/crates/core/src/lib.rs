//! Quantum Fisher information (SLD based) and skew information for qubit
//! and qudit states in the generalized Bloch representation, decoherence
//! channels as affine Bloch maps, hierarchy-equation dynamics of a
//! dissipative qubit, and GHZ Ramsey interferometry under collective
//! dephasing.

pub mod bloch;
pub mod channels;
pub mod error;
pub mod fisher;
pub mod generators;
pub mod heom;
pub mod linalg;
pub mod matrix_io;
pub mod output;
pub mod ramsey;

#[cfg(test)]
pub(crate) mod testutil;

pub use bloch::{AffineChannel, BlochVector, KrausChannel};
pub use error::{Error, Result};
pub use generators::{GeneratorBasis, PairOrder};
pub use linalg::{CMatrix, DensityMatrix};
