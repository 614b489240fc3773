use serde::Serialize;

use super::check::{assemble_report, sandwich_ratios, MzReport, TrialSpec};
use super::norms::Measure;
use crate::error::{domain, MzError, Result};
use crate::geometry::{build_compatible_pair, constants, equal_area_partition, sample_uniform, PairOutcome};
use crate::gram::check_open_unit;
use crate::stats::compensated_sum;

/// Default ceiling on the number of sampled points.
pub const DEFAULT_POINT_CAP: u64 = 10_000_000;

/// `5 C_q α_q (N / (2 log(N/ε)))^{-1/q} (n + q²)`.
pub fn random_precondition_lhs(n: usize, q: usize, eps: f64, points: u64) -> Result<f64> {
    let c = constants(q)?;
    let nf = points as f64;
    let ratio = nf / (2.0 * (nf / eps).ln());
    Ok(5.0 * c.c_thm * c.alpha * ratio.powf(-1.0 / q as f64) * (n + q * q) as f64)
}

/// Smallest `N ≥ 3` with `pred(N)` for a predicate that is monotone on
/// `N ≥ 3`: doubling, then bisection.
pub fn first_true_from_three<F: FnMut(u64) -> bool>(mut pred: F) -> Result<u64> {
    let mut hi = 3u64;
    while !pred(hi) {
        hi = hi.checked_mul(2).filter(|&h| h < 1 << 62).ok_or(MzError::Overflow("budget search"))?;
    }
    let mut lo = (hi / 2).max(2);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest `N` with `5 C_q α_q (N/(2 log(N/ε)))^{-1/q} (n+q²) < η`. The
/// left side decreases for `N ≥ 3` whenever `ε < 1`, so the search starts
/// at 3; the answer is verified by substitution.
pub fn budget_coupon(n: usize, q: usize, eta: f64, eps: f64) -> Result<u64> {
    check_open_unit("eta", eta)?;
    check_open_unit("eps", eps)?;
    constants(q)?;
    let pred = |m: u64| random_precondition_lhs(n, q, eps, m).map(|v| v < eta).unwrap_or(false);
    let found = first_true_from_three(pred)?;
    debug_assert!(pred(found) && (found == 3 || !pred(found - 1)));
    Ok(found)
}

/// Patch count `⌊N / log(N/ε)⌋`, at least one.
pub fn patch_count(points: u64, eps: f64) -> u64 {
    let nf = points as f64;
    ((nf / (nf / eps).ln()).floor() as u64).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomMzConfig {
    pub q: usize,
    pub eps: f64,
    pub trial: TrialSpec,
    /// Sample size; `None` uses [`budget_coupon`].
    pub points: Option<u64>,
    pub cap: u64,
}

impl RandomMzConfig {
    pub fn new(q: usize, eps: f64, trial: TrialSpec) -> Self {
        Self { q, eps, trial, points: None, cap: DEFAULT_POINT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RandomMzOutcome {
    Checked {
        points: u64,
        patches: u64,
        /// `Σ_j w_j`; one up to rounding.
        weight_sum: f64,
        /// `1 - 1/N`, the success probability in the statement.
        prob_statement: f64,
        /// `1 - ε`, the success probability the proof reaches.
        prob_proof: f64,
        report: MzReport,
    },
    OccupancyFailure {
        points: u64,
        patches: u64,
        empty_patches: usize,
    },
    Infeasible {
        required_points: u64,
        cap: u64,
    },
}

impl RandomMzOutcome {
    /// Checked and every ratio inside `[1-η, 1+η]`.
    pub fn passed(&self) -> bool {
        matches!(self, RandomMzOutcome::Checked { report, .. } if report.pass)
    }
}

/// End to end: `N` i.i.d. points, `M = ⌊N/log(N/ε)⌋` equal-area patches,
/// weights `w_j = 1/(M m_j)`, compared against `‖·‖_{σ_q,p}`.
pub fn random_mz_experiment(config: &RandomMzConfig) -> Result<RandomMzOutcome> {
    let RandomMzConfig { q, eps, ref trial, points, cap } = *config;
    check_open_unit("eta", trial.eta)?;
    check_open_unit("eps", eps)?;
    let count = match points {
        Some(0) => return Err(domain("points must be positive")),
        Some(k) => k,
        None => budget_coupon(trial.n, q, trial.eta, eps)?,
    };
    if count > cap {
        return Ok(RandomMzOutcome::Infeasible { required_points: count, cap });
    }
    let patches = patch_count(count, eps);
    let sample = sample_uniform(q, count as usize, trial.seed);
    let partition = equal_area_partition(q, patches as usize)?;
    let pair = match build_compatible_pair(&sample, &partition)? {
        PairOutcome::Complete(p) => p,
        PairOutcome::Incomplete(f) => {
            return Ok(RandomMzOutcome::OccupancyFailure { points: count, patches, empty_patches: f.empty.len() })
        }
    };
    let weights = pair.occupancy_weights();
    let weight_sum = compensated_sum(weights.iter().copied());
    let per_p = sandwich_ratios(&sample, &weights, Measure::Probability, trial)?;
    let lhs = random_precondition_lhs(trial.n, q, eps, count)?;
    let report = assemble_report(q, sample.len(), trial, Measure::Probability, lhs, pair.partition_norm, per_p);
    Ok(RandomMzOutcome::Checked {
        points: count,
        patches,
        weight_sum,
        prob_statement: 1.0 - 1.0 / count as f64,
        prob_proof: 1.0 - eps,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mz::Exponent;

    #[test]
    fn budget_is_minimal() {
        for &(n, q, eta, eps) in &[(1, 2, 0.9, 0.5), (0, 2, 0.9, 0.1), (2, 3, 0.5, 0.01)] {
            let b = budget_coupon(n, q, eta, eps).unwrap();
            assert!(random_precondition_lhs(n, q, eps, b).unwrap() < eta);
            assert!(random_precondition_lhs(n, q, eps, b - 1).unwrap() >= eta);
        }
    }

    #[test]
    fn infeasible_budget_is_reported() {
        let trial = TrialSpec { n: 1, eta: 0.9, p_list: vec![Exponent::Finite(2.0)], trials: 1, seed: 1 };
        let out = random_mz_experiment(&RandomMzConfig::new(2, 0.5, trial)).unwrap();
        assert!(matches!(out, RandomMzOutcome::Infeasible { .. }));
    }

    #[test]
    fn degree_zero_ratios_are_one() {
        let trial = TrialSpec { n: 0, eta: 0.5, p_list: Exponent::default_list(), trials: 2, seed: 4 };
        let mut cfg = RandomMzConfig::new(2, 0.5, trial);
        cfg.points = Some(400);
        match random_mz_experiment(&cfg).unwrap() {
            RandomMzOutcome::Checked { weight_sum, report, .. } => {
                assert!((weight_sum - 1.0).abs() < 1e-12);
                assert!((report.worst_lower - 1.0).abs() < 1e-12);
                assert!((report.worst_upper - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
