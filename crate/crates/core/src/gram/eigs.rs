use faer::{Mat, MatRef, Side};
use serde::Serialize;

use super::matrix::{dim_usize, weighted_normal_matrix_q2, GramMatrix};
use crate::error::{MzError, Result};
use crate::geometry::PointSet;

/// Eigenvalues of a symmetric matrix (lower triangle read), ascending.
pub fn symmetric_eigenvalues(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower).map_err(|_| MzError::Eigensolver)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalEigs {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `N < d`: `(1/N) L*L` is singular and `lambda_min` is reported as 0.
    pub rank_deficient: bool,
}

/// Extremal eigenvalues of `(1/N) L*L` from the `N × N` Gram matrix: the
/// largest eigenvalue, and the `d`-th largest.
pub fn extremal_eigs(g: &GramMatrix, d: usize) -> Result<ExtremalEigs> {
    let ev = symmetric_eigenvalues(g.entries())?;
    let count = ev.len();
    let lambda_max = ev[count - 1];
    if d > count {
        return Ok(ExtremalEigs { lambda_min: 0.0, lambda_max, rank_deficient: true });
    }
    Ok(ExtremalEigs { lambda_min: ev[count - d], lambda_max, rank_deficient: false })
}

/// Extremal eigenvalues of `(1/N) L*L` through the explicit `d × d` normal
/// matrix (q = 2 only).
pub fn normal_extremal_eigs_q2(points: &PointSet, n: usize) -> Result<ExtremalEigs> {
    let d = dim_usize(2, n)?;
    let normal: Mat<f64> = weighted_normal_matrix_q2(points, None, n)?;
    let ev = symmetric_eigenvalues(normal.as_ref())?;
    let rank_deficient = points.len() < d;
    Ok(ExtremalEigs {
        lambda_min: if rank_deficient { 0.0 } else { ev[0] },
        lambda_max: ev[d - 1],
        rank_deficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_uniform, SpherePoint};
    use crate::gram::gram_matrix;

    #[test]
    fn single_point_constant_space() {
        let pts = PointSet::from_points(2, &[SpherePoint::north_pole(2)]).unwrap();
        let e = extremal_eigs(&gram_matrix(&pts, 0).unwrap(), 1).unwrap();
        assert!((e.lambda_min - 1.0).abs() < 1e-14 && (e.lambda_max - 1.0).abs() < 1e-14);
        assert!(!e.rank_deficient);
    }

    #[test]
    fn too_few_points_are_flagged() {
        let pts = sample_uniform(2, 5, 1);
        let e = extremal_eigs(&gram_matrix(&pts, 2).unwrap(), 9).unwrap();
        assert!(e.rank_deficient);
        assert_eq!(e.lambda_min, 0.0);
        assert!(normal_extremal_eigs_q2(&pts, 2).unwrap().rank_deficient);
    }
}
