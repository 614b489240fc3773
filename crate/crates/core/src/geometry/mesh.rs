use rayon::prelude::*;
use serde::Serialize;

use super::partition::equal_area_partition;
use super::point::{dot, PointSet};
use crate::error::{MzError, Result};

/// Index of the point of `points` closest to `x`, with its geodesic
/// distance. Ties go to the lower index.
pub fn nearest(points: &PointSet, x: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, r) in points.rows().enumerate() {
        let d = dot(r, x);
        if d > best.1 {
            best = (i, d);
        }
    }
    (best.0, best.1.clamp(-1.0, 1.0).acos())
}

/// Probe-grid estimate of the mesh norm `δ = max_x min_ξ d(x, ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshNormEstimate {
    /// Largest nearest-point distance over the probes; never exceeds `δ`.
    pub estimate: f64,
    /// `δ ≤ estimate + uncertainty`: the probe partition's norm bound.
    pub uncertainty: f64,
    pub probes: usize,
}

/// Probes are the centers of an equal-area partition with `resolution`
/// patches. Brute-force nearest neighbours, `O(N · resolution)`.
pub fn mesh_norm_estimate(points: &PointSet, resolution: usize) -> Result<MeshNormEstimate> {
    if points.is_empty() {
        return Err(MzError::EmptyPointSet);
    }
    let grid = equal_area_partition(points.q(), resolution)?;
    let probes = grid.centers();
    let estimate = (0..probes.len())
        .into_par_iter()
        .map(|j| nearest(points, probes.row(j)).1)
        .reduce(|| 0.0, f64::max);
    Ok(MeshNormEstimate { estimate, uncertainty: grid.partition_norm_bound(), probes: resolution })
}
