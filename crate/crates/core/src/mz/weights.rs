use rayon::prelude::*;
use serde::Serialize;

use crate::error::{MzError, Result};
use crate::geometry::{
    constants, equal_area_partition, geodesic_raw, nearest, CompatiblePair, MeshNormEstimate, PointSet,
};

/// Area weights from a nearest-point partition of the sphere.
#[derive(Debug, Clone, Serialize)]
pub struct MeshWeights {
    /// `a_ξ` per input point; zero for points that own no cell.
    pub weights: Vec<f64>,
    /// Points with positive weight, in input order.
    pub selected: Vec<usize>,
    /// The induced partition over `selected`: one cell per selected point.
    pub pair: CompatiblePair,
    pub mesh: MeshNormEstimate,
    /// `40 C_q q √(2q(q+1)) (n + q²) δ` with `δ` the upper mesh-norm estimate.
    pub precondition_lhs: f64,
    pub precondition_holds: bool,
}

/// Weights `a_ξ` realized on a fine equal-area grid of `resolution` cells.
///
/// Each point first claims the grid cell containing it (earlier points win);
/// every other cell goes to the point nearest its center (lower index on
/// ties). `a_ξ` is the total area of the cells a point owns, so duplicates
/// of a point get weight zero and the weights sum to `ω_q`.
pub fn mesh_norm_weights(points: &PointSet, n: usize, eta: f64, resolution: usize) -> Result<MeshWeights> {
    if points.is_empty() {
        return Err(MzError::EmptyPointSet);
    }
    let q = points.q();
    let grid = equal_area_partition(q, resolution)?;
    let centers = grid.centers();
    let cell_area = grid.area_each();
    let cell_diam = grid.partition_norm_bound();

    let nearest_to_center: Vec<(usize, f64)> =
        (0..resolution).into_par_iter().map(|c| nearest(points, centers.row(c))).collect();
    let mut owner: Vec<usize> = nearest_to_center.iter().map(|&(i, _)| i).collect();
    let mut claimed = vec![false; resolution];
    for (i, x) in points.rows().enumerate() {
        let c = grid.index_of(x);
        if !claimed[c] {
            claimed[c] = true;
            owner[c] = i;
        }
    }

    let mut cells = vec![0usize; points.len()];
    let mut reach = vec![0.0f64; points.len()];
    for (c, &i) in owner.iter().enumerate() {
        cells[i] += 1;
        let r = geodesic_raw(points.row(i), centers.row(c)) + cell_diam;
        reach[i] = reach[i].max(r);
    }
    let weights: Vec<f64> = cells.iter().map(|&k| k as f64 * cell_area).collect();
    let selected: Vec<usize> = (0..points.len()).filter(|&i| cells[i] > 0).collect();
    let partition_norm = selected.iter().map(|&i| 2.0 * reach[i]).fold(0.0, f64::max).min(std::f64::consts::PI);
    let areas: Vec<f64> = selected.iter().map(|&i| weights[i]).collect();
    let pair = CompatiblePair::from_labels((0..selected.len()).collect(), areas, partition_norm)?
        .complete()
        .expect("every selected point owns its cell");

    let estimate = nearest_to_center.iter().map(|&(_, d)| d).fold(0.0, f64::max);
    let mesh = MeshNormEstimate { estimate, uncertainty: cell_diam, probes: resolution };
    let qf = q as f64;
    let c = constants(q)?.c_thm;
    let precondition_lhs =
        40.0 * c * qf * (2.0 * qf * (qf + 1.0)).sqrt() * (n + q * q) as f64 * (mesh.estimate + mesh.uncertainty);
    Ok(MeshWeights {
        weights,
        selected,
        pair,
        mesh,
        precondition_lhs,
        precondition_holds: precondition_lhs <= eta,
    })
}
