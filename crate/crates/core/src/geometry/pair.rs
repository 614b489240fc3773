use serde::Serialize;

use super::partition::EqualAreaPartition;
use super::point::PointSet;
use crate::error::{MzError, Result};

/// A partition together with sample points such that every patch holds at
/// least one point. The first point seen in each patch is its representative.
#[derive(Debug, Clone, Serialize)]
pub struct CompatiblePair {
    /// Patch of each point.
    pub labels: Vec<usize>,
    /// Index of the representative point of each patch.
    pub representatives: Vec<usize>,
    /// Points per patch, `m_j ≥ 1`.
    pub occupancy: Vec<usize>,
    /// Measure `μ_q(Z_j)` of each patch.
    pub patch_areas: Vec<f64>,
    /// Upper bound on the largest patch diameter.
    pub partition_norm: f64,
}

/// Patches that received no point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccupancyFailure {
    pub patches: usize,
    pub empty: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum PairOutcome {
    Complete(CompatiblePair),
    Incomplete(OccupancyFailure),
}

impl PairOutcome {
    pub fn complete(self) -> Option<CompatiblePair> {
        match self {
            PairOutcome::Complete(p) => Some(p),
            PairOutcome::Incomplete(_) => None,
        }
    }
}

impl CompatiblePair {
    /// Pairs points with any partition given each point's patch label.
    pub fn from_labels(labels: Vec<usize>, patch_areas: Vec<f64>, partition_norm: f64) -> Result<PairOutcome> {
        let m = patch_areas.len();
        let mut occupancy = vec![0usize; m];
        let mut representatives = vec![usize::MAX; m];
        for (i, &l) in labels.iter().enumerate() {
            if l >= m {
                return Err(MzError::Domain(format!("label {l} outside {m} patches")));
            }
            if occupancy[l] == 0 {
                representatives[l] = i;
            }
            occupancy[l] += 1;
        }
        let empty: Vec<usize> = (0..m).filter(|&j| occupancy[j] == 0).collect();
        if !empty.is_empty() {
            return Ok(PairOutcome::Incomplete(OccupancyFailure { patches: m, empty }));
        }
        Ok(PairOutcome::Complete(Self { labels, representatives, occupancy, patch_areas, partition_norm }))
    }

    pub fn patches(&self) -> usize {
        self.occupancy.len()
    }

    pub fn representative_points(&self, points: &PointSet) -> PointSet {
        points.select(&self.representatives)
    }

    /// Per-point weights `1 / (M m_j)`; they sum to one.
    pub fn occupancy_weights(&self) -> Vec<f64> {
        let m = self.patches() as f64;
        self.labels.iter().map(|&l| 1.0 / (m * self.occupancy[l] as f64)).collect()
    }
}

pub fn build_compatible_pair(points: &PointSet, partition: &EqualAreaPartition) -> Result<PairOutcome> {
    if points.q() != partition.q() {
        return Err(MzError::DimensionMismatch { expected: partition.q(), found: points.q() });
    }
    let labels = points.rows().map(|r| partition.index_of(r)).collect();
    let areas = vec![partition.area_each(); partition.len()];
    CompatiblePair::from_labels(labels, areas, partition.partition_norm_bound())
}
