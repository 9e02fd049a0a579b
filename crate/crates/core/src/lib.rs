//! Operator-range calculus on dense complex Hermitian matrices.
//!
//! Everything here works at "desk scale" (dimensions up to a few hundred):
//! positive-semidefinite operators with cached spectral data, orthonormal
//! frames for subspaces, Douglas factorization, parallel addition, Kreĭn
//! shorting, square-root compressions, operator liftings, resolvent-backed
//! nonnegative self-adjoint relations with semigroup/Euler/Trotter
//! experiments, and Friedrichs/Kreĭn extensions of divergence forms.

pub mod acceptance;
pub mod cmat;
pub mod compress;
pub mod divergence;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod lifting;
mod par;
pub mod psd;
pub mod range;
pub mod relation;
pub mod sampling;
pub mod shorting;
pub mod tol;

pub use error::{Error, Result};
pub use psd::{Contraction, PsdOperator, Subspace};
pub use tol::ToleranceContext;
