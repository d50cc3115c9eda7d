//! Pseudo-Hilbert modules over matrix *-algebras, at desk scale.
//!
//! The toolkit models the space `H = Z^n` over `Z = M_d(C)` with its
//! `Z`-valued inner product (the *gramian*), classifies partial gramian
//! isometries, and constructs, for any two gramian selfadjoint
//! projections `P`, `Q` with `||P - Q|| < 1`, a partial isometry
//! `T = Q A^{-1/2} P` (where `A = I + P(Q - P)P`) whose initial and
//! final projections are exactly `P` and `Q`. Every identity used along
//! the way is certified as a numerical residual in a [`construction::ProofTrace`].
//!
//! Modules:
//! - [`matrix`]: dense complex kernels (Hermitian eigendecomposition,
//!   Loewner order, spectral norm, two independent square-root routes);
//! - [`space`]: the module `H = Z^n`, gramians, adjointable operators,
//!   boundedness certificates;
//! - [`isometry`]: partial-isometry classification with initial/final/
//!   kernel/range projections;
//! - [`construction`]: the projection-pair construction and its
//!   residual trace;
//! - [`lab`]: deterministic generators (projection pairs with prescribed
//!   gap, random partial isometries, the norm-one counterexample) and a
//!   batch suite runner.

pub mod construction;
pub mod error;
pub mod isometry;
pub mod lab;
pub mod matrix;
pub mod space;

pub use error::{GramianError, Result};
pub use matrix::{ComplexMatrix, Tolerances};
pub use space::{GramianOperator, GramianVector, SpaceShape};
