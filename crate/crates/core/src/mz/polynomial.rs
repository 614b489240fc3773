use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{MzError, Result};
use crate::geometry::{dot, sample_uniform, PointSet};
use crate::gram::dim_usize;
use crate::harmonics::{q2_basis_len, HarmonicsQ2};
use crate::rng::{derive_key, label, substream};
use crate::sphkernels::UltrasphericalEvaluator;

#[derive(Debug, Clone)]
enum Repr {
    /// Coefficients over the σ_2-orthonormal real harmonics.
    Harmonic { basis: HarmonicsQ2, coeffs: Vec<f64> },
    /// `Σ_i c_i K_n(x · z_i)`.
    Zonal { eval: UltrasphericalEvaluator, centers: PointSet, coeffs: Vec<f64> },
}

/// An element of `Π_n^q`.
#[derive(Debug, Clone)]
pub struct SpherePolynomial {
    q: usize,
    n: usize,
    repr: Repr,
}

impl SpherePolynomial {
    /// `Σ_k c_k e_k` on `S^2`; needs `(n+1)²` coefficients.
    pub fn harmonic(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != q2_basis_len(n) {
            return Err(MzError::LengthMismatch { left: q2_basis_len(n), right: coeffs.len() });
        }
        Ok(Self { q: 2, n, repr: Repr::Harmonic { basis: HarmonicsQ2::new(n), coeffs } })
    }

    /// `Σ_i c_i K_n(x · z_i)` on `S^q`.
    pub fn zonal(n: usize, centers: PointSet, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != centers.len() {
            return Err(MzError::LengthMismatch { left: centers.len(), right: coeffs.len() });
        }
        let q = centers.q();
        let eval = UltrasphericalEvaluator::new(q, n)?;
        Ok(Self { q, n, repr: Repr::Zonal { eval, centers, coeffs } })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Harmonic coefficients, if this is a q = 2 harmonic expansion.
    pub fn coefficients(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Harmonic { coeffs, .. } => Some(coeffs),
            Repr::Zonal { .. } => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut scratch = Vec::new();
        self.eval_with(x, &mut scratch)
    }

    /// [`Self::eval`] reusing `scratch` for the harmonic values.
    pub fn eval_with(&self, x: &[f64], scratch: &mut Vec<f64>) -> f64 {
        match &self.repr {
            Repr::Harmonic { basis, coeffs } => {
                scratch.resize(coeffs.len(), 0.0);
                basis.eval_into(x, scratch);
                dot(scratch, coeffs)
            }
            Repr::Zonal { eval, centers, coeffs } => centers
                .rows()
                .zip(coeffs)
                .map(|(z, c)| c * eval.cd_kernel(self.n, dot(x, z)).expect("degree fixed at construction"))
                .sum(),
        }
    }

    /// Values at every point of `points`, in order.
    pub fn eval_many(&self, points: &PointSet) -> Vec<f64> {
        (0..points.len())
            .into_par_iter()
            .map_init(Vec::new, |buf, i| self.eval_with(points.row(i), buf))
            .collect()
    }
}

/// Test polynomial for seed `seed`. On `S^2`: i.i.d. standard normal
/// harmonic coefficients. Otherwise `2 d_q(n)` uniform centers with
/// standard normal weights on `K_n`.
pub fn random_polynomial(q: usize, n: usize, seed: u64) -> Result<SpherePolynomial> {
    let mut rng = substream(seed, &[label::POLYNOMIAL]);
    if q == 2 {
        let coeffs = (0..q2_basis_len(n)).map(|_| rng.sample(StandardNormal)).collect();
        return SpherePolynomial::harmonic(n, coeffs);
    }
    let count = 2 * dim_usize(q, n)?;
    let centers = sample_uniform(q, count, derive_key(seed, &[label::POLYNOMIAL, 1]));
    let coeffs = (0..count).map(|_| rng.sample(StandardNormal)).collect();
    SpherePolynomial::zonal(n, centers, coeffs)
}
