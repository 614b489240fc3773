use rayon::prelude::*;
use serde::Serialize;

use super::budgets::budget_tropp;
use super::eigs::{extremal_eigs, normal_extremal_eigs_q2, ExtremalEigs};
use super::matrix::{dim_usize, gram_matrix};
use crate::error::{domain, MzError, Result};
use crate::geometry::sample_uniform;
use crate::rng::{derive_key, label};
use crate::stats::Summary;

/// Extremal eigenvalues of `(1/N) L*L` over independent repetitions.
#[derive(Debug, Clone, Serialize)]
pub struct EigStats {
    pub q: usize,
    pub n: usize,
    pub points: usize,
    pub reps: usize,
    pub seed: u64,
    pub lambda_min: Vec<f64>,
    pub lambda_max: Vec<f64>,
    pub min: Summary,
    pub max: Summary,
}

impl EigStats {
    pub const CSV_HEADER: &'static str = "n,lMin1,lMinM,lMin99,lMax1,lMaxM,lMax99";

    pub fn from_values(q: usize, n: usize, points: usize, seed: u64, values: &[ExtremalEigs]) -> Self {
        let lambda_min: Vec<f64> = values.iter().map(|e| e.lambda_min).collect();
        let lambda_max: Vec<f64> = values.iter().map(|e| e.lambda_max).collect();
        Self {
            q,
            n,
            points,
            reps: values.len(),
            seed,
            min: Summary::of(&lambda_min),
            max: Summary::of(&lambda_max),
            lambda_min,
            lambda_max,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n, self.min.q01, self.min.mean, self.min.q99, self.max.q01, self.max.mean, self.max.q99
        )
    }

    /// Every observed eigenvalue lies in `[1-η, 1+η]`.
    pub fn within(&self, eta: f64) -> bool {
        self.lambda_min.iter().all(|&l| l >= 1.0 - eta) && self.lambda_max.iter().all(|&l| l <= 1.0 + eta)
    }
}

/// Extremal eigenvalues for one sample of `points` uniform points.
pub fn sample_extremal_eigs(q: usize, n: usize, points: usize, seed: u64) -> Result<ExtremalEigs> {
    let pts = sample_uniform(q, points, seed);
    if q == 2 {
        normal_extremal_eigs_q2(&pts, n)
    } else {
        extremal_eigs(&gram_matrix(&pts, n)?, dim_usize(q, n)?)
    }
}

/// Repetition `r` samples with root seed `derive_key(seed, [EIG_REP, r])`.
pub fn eig_experiment_with_points(q: usize, n: usize, points: usize, reps: usize, seed: u64) -> Result<EigStats> {
    if reps == 0 {
        return Err(domain("reps must be at least 1"));
    }
    if points == 0 {
        return Err(MzError::EmptyPointSet);
    }
    let values = (0..reps)
        .into_par_iter()
        .map(|r| sample_extremal_eigs(q, n, points, derive_key(seed, &[label::EIG_REP, r as u64])))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigStats::from_values(q, n, points, seed, &values))
}

/// Eigenvalue concentration at the sample size `budget_tropp(n, q, η, ε)`.
pub fn eig_experiment(n: usize, q: usize, eta: f64, eps: f64, reps: usize, seed: u64) -> Result<EigStats> {
    let points = usize::try_from(budget_tropp(n, q, eta, eps)?).map_err(|_| MzError::Overflow("sample size"))?;
    eig_experiment_with_points(q, n, points, reps, seed)
}
