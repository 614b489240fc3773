//! Norm discretization of spherical polynomials on `S^q`.
//!
//! - [`sphkernels`]: ultraspherical recurrences and the localized
//!   reproducing kernel with its bound checks.
//! - [`geometry`]: points, uniform sampling, equal-area partitions and
//!   compatible point/partition pairs.
//! - [`gram`]: sample-size budgets and extremal Gram eigenvalues.
//! - [`mz`]: quadrature, `L_p` norms and the two-sided sandwich checks.
//!
//! All randomness is addressed through [`rng`], so results depend only on
//! the seed and never on the thread count.

pub mod error;
pub mod geometry;
pub mod gram;
pub mod harmonics;
pub mod io;
pub mod mz;
pub mod quad;
pub mod rng;
pub mod sphkernels;
pub mod stats;

pub use error::{MzError, Result};
