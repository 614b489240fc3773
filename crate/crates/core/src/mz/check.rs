use rayon::prelude::*;
use serde::Serialize;

use super::norms::{continuous_norm, discrete_norm_of_values, Exponent, Measure};
use super::polynomial::random_polynomial;
use crate::error::{domain, Result};
use crate::geometry::{constants, equal_area_partition, CompatiblePair, PointSet};
use crate::rng::{derive_key, label};

/// Extremal ratios `discrete / continuous` for one exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRange {
    pub p: Exponent,
    pub worst_lower: f64,
    pub worst_upper: f64,
}

/// Outcome of a two-sided norm comparison over random test polynomials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MzReport {
    pub q: usize,
    pub n: usize,
    pub eta: f64,
    /// Left side of the sufficient condition `… ≤ η`.
    pub precondition_lhs: f64,
    pub precondition_holds: bool,
    pub partition_norm: f64,
    pub measure: Measure,
    pub points: usize,
    pub p: Vec<Exponent>,
    pub per_p: Vec<RatioRange>,
    pub worst_lower: f64,
    pub worst_upper: f64,
    pub trials: usize,
    /// Every ratio lies in `[1-η, 1+η]`.
    pub pass: bool,
}

/// Parameters shared by the sandwich checkers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSpec {
    pub n: usize,
    pub eta: f64,
    pub p_list: Vec<Exponent>,
    pub trials: usize,
    pub seed: u64,
}

fn ratio(disc: f64, cont: f64) -> f64 {
    if cont == 0.0 {
        if disc == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        disc / cont
    }
}

/// Ratios for every trial polynomial and exponent. Trial `t` uses the
/// polynomial of seed `(seed, MZ_TRIAL, t)`.
pub fn sandwich_ratios(
    points: &PointSet,
    weights: &[f64],
    measure: Measure,
    spec: &TrialSpec,
) -> Result<Vec<RatioRange>> {
    if spec.p_list.is_empty() || spec.trials == 0 {
        return Err(domain("need at least one exponent and one trial"));
    }
    let q = points.q();
    let per_trial = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let poly = random_polynomial(q, spec.n, derive_key(spec.seed, &[label::MZ_TRIAL, t as u64]))?;
            let values = poly.eval_many(points);
            spec.p_list
                .iter()
                .map(|&p| Ok(ratio(discrete_norm_of_values(&values, p, weights)?, continuous_norm(&poly, p, measure)?)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(spec
        .p_list
        .iter()
        .enumerate()
        .map(|(k, &p)| RatioRange {
            p,
            worst_lower: per_trial.iter().map(|r| r[k]).fold(f64::INFINITY, f64::min),
            worst_upper: per_trial.iter().map(|r| r[k]).fold(f64::NEG_INFINITY, f64::max),
        })
        .collect())
}

pub(crate) fn assemble_report(
    q: usize,
    points: usize,
    spec: &TrialSpec,
    measure: Measure,
    precondition_lhs: f64,
    partition_norm: f64,
    per_p: Vec<RatioRange>,
) -> MzReport {
    let worst_lower = per_p.iter().map(|r| r.worst_lower).fold(f64::INFINITY, f64::min);
    let worst_upper = per_p.iter().map(|r| r.worst_upper).fold(f64::NEG_INFINITY, f64::max);
    MzReport {
        q,
        n: spec.n,
        eta: spec.eta,
        precondition_lhs,
        precondition_holds: precondition_lhs <= spec.eta,
        partition_norm,
        measure,
        points,
        p: spec.p_list.clone(),
        per_p,
        worst_lower,
        worst_upper,
        trials: spec.trials,
        pass: worst_lower >= 1.0 - spec.eta && worst_upper <= 1.0 + spec.eta,
    }
}

/// `5 C_q (n + q²) ‖𝒵‖`, the left side of the deterministic precondition.
pub fn det_precondition_lhs(q: usize, n: usize, partition_norm: f64) -> Result<f64> {
    Ok(5.0 * constants(q)?.c_thm * (n + q * q) as f64 * partition_norm)
}

/// Compares `(Σ_ξ μ_q(Z_ξ) |P(ξ)|^p)^{1/p}` with `‖P‖_{μ_q,p}` using the
/// representatives of `pair`. The check runs whether or not the
/// precondition holds; the report records which.
pub fn det_mz_check(pair: &CompatiblePair, points: &PointSet, spec: &TrialSpec) -> Result<MzReport> {
    let q = points.q();
    let reps = pair.representative_points(points);
    let per_p = sandwich_ratios(&reps, &pair.patch_areas, Measure::Surface, spec)?;
    let lhs = det_precondition_lhs(q, spec.n, pair.partition_norm)?;
    Ok(assemble_report(q, reps.len(), spec, Measure::Surface, lhs, pair.partition_norm, per_p))
}

/// Smallest `M ≤ cap` whose equal-area partition satisfies
/// `5 C_q (n + q²) ‖𝒵‖ ≤ η`, assuming the norm bound decreases in `M`
/// (the returned `M` itself is verified). `None` if no `M ≤ cap` works.
pub fn det_required_patches(q: usize, n: usize, eta: f64, cap: usize) -> Result<Option<usize>> {
    let ok = |m: usize| -> Result<bool> {
        let norm = equal_area_partition(q, m)?.partition_norm_bound();
        Ok(det_precondition_lhs(q, n, norm)? <= eta)
    };
    let mut hi = 2usize;
    while !ok(hi)? {
        if hi >= cap {
            return Ok(None);
        }
        hi = (hi * 2).min(cap);
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_compatible_pair, sample_uniform};

    #[test]
    fn constants_give_exact_ratios() {
        let part = equal_area_partition(2, 30).unwrap();
        let centers = part.centers();
        let pair = build_compatible_pair(&centers, &part).unwrap().complete().unwrap();
        let spec = TrialSpec { n: 0, eta: 0.1, p_list: Exponent::default_list(), trials: 3, seed: 1 };
        let r = det_mz_check(&pair, &centers, &spec).unwrap();
        assert!((r.worst_lower - 1.0).abs() < 1e-12 && (r.worst_upper - 1.0).abs() < 1e-12);
        assert!(r.pass);
        assert!(!r.precondition_holds);
    }

    #[test]
    fn report_is_deterministic() {
        let part = equal_area_partition(2, 200).unwrap();
        let pts = sample_uniform(2, 3000, 2);
        let pair = build_compatible_pair(&pts, &part).unwrap().complete().unwrap();
        let spec = TrialSpec { n: 2, eta: 0.5, p_list: Exponent::default_list(), trials: 4, seed: 9 };
        assert_eq!(det_mz_check(&pair, &pts, &spec).unwrap(), det_mz_check(&pair, &pts, &spec).unwrap());
    }
}
