//! Fixed inputs shared by the benchmarks.

use mz_sphere::geometry::{sample_uniform, PointSet};
use mz_sphere::gram::budget_tropp;
use mz_sphere::mz::{random_polynomial, SpherePolynomial};

pub const SEED: u64 = 7;

/// The degree-8 sample of the eigenvalue experiment on `S^2`.
pub fn tropp_sample() -> PointSet {
    let n = budget_tropp(8, 2, 0.9, 0.01).expect("valid budget") as usize;
    sample_uniform(2, n, SEED)
}

pub fn polynomial(q: usize, n: usize) -> SpherePolynomial {
    random_polynomial(q, n, SEED).expect("valid degree")
}
