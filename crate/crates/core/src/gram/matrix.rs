use faer::linalg::matmul::triangular::{matmul, BlockStructure};
use faer::{Accum, Mat, MatRef, Par};
use rayon::prelude::*;

use crate::error::{MzError, Result};
use crate::geometry::PointSet;
use crate::harmonics::{require_q2, HarmonicsQ2};
use crate::sphkernels::{poly_space_dim, UltrasphericalEvaluator};

/// Rows of the explicit basis matrix materialized at a time.
const ROW_BLOCK: usize = 2048;

/// `Σ_{ℓ ≤ n} h_q(ℓ) R_ℓ(u)`, the reproducing kernel of `Π_n^q` for the
/// normalized measure `σ_q`.
pub fn addition_kernel(q: usize, n: usize, u: f64) -> Result<f64> {
    UltrasphericalEvaluator::new(q, n)?.addition_sum(n, u)
}

/// `G = (1/N) L L*`, assembled from the addition formula.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    q: usize,
    n: usize,
    entries: Mat<f64>,
}

impl GramMatrix {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> MatRef<'_, f64> {
        self.entries.as_ref()
    }

    pub fn trace(&self) -> f64 {
        (0..self.len()).map(|i| self.entries[(i, i)]).sum()
    }
}

pub fn gram_matrix(points: &PointSet, n: usize) -> Result<GramMatrix> {
    if points.is_empty() {
        return Err(MzError::EmptyPointSet);
    }
    let q = points.q();
    let eval = UltrasphericalEvaluator::new(q, n)?;
    let count = points.len();
    let scale = 1.0 / count as f64;
    let diag = eval.addition_sum(n, 1.0)? * scale;
    let rows: Vec<Vec<f64>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let xi = points.row(i);
            (0..i)
                .map(|j| {
                    let t: f64 = xi.iter().zip(points.row(j)).map(|(a, b)| a * b).sum();
                    eval.addition_sum(n, t).expect("degree within evaluator range") * scale
                })
                .collect()
        })
        .collect();
    let mut entries = Mat::<f64>::zeros(count, count);
    for (i, row) in rows.iter().enumerate() {
        entries[(i, i)] = diag;
        for (j, &v) in row.iter().enumerate() {
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    Ok(GramMatrix { q, n, entries })
}

/// `L` with `L_jk = e_k(ξ_j)` for the σ_2-orthonormal real harmonics.
pub fn explicit_basis_matrix_q2(points: &PointSet, n: usize) -> Result<Mat<f64>> {
    require_q2(points.q())?;
    let basis = HarmonicsQ2::new(n);
    let rows = basis_rows(&basis, points, 0, points.len());
    Ok(MatRef::from_row_major_slice(&rows, points.len(), basis.len()).to_owned())
}

fn basis_rows(basis: &HarmonicsQ2, points: &PointSet, start: usize, end: usize) -> Vec<f64> {
    let d = basis.len();
    let mut rows = vec![0.0; (end - start) * d];
    rows.par_chunks_mut(d)
        .enumerate()
        .for_each(|(i, row)| basis.eval_into(points.row(start + i), row));
    rows
}

/// `L* W L` with `W = diag(weights)`; `None` means `W = I / N`. The basis
/// matrix is streamed in row blocks, so memory stays `O(d²)`.
pub fn weighted_normal_matrix_q2(points: &PointSet, weights: Option<&[f64]>, n: usize) -> Result<Mat<f64>> {
    require_q2(points.q())?;
    if points.is_empty() {
        return Err(MzError::EmptyPointSet);
    }
    if let Some(w) = weights {
        if w.len() != points.len() {
            return Err(MzError::LengthMismatch { left: points.len(), right: w.len() });
        }
    }
    let basis = HarmonicsQ2::new(n);
    let d = basis.len();
    let uniform = (1.0 / points.len() as f64).sqrt();
    let mut acc = Mat::<f64>::zeros(d, d);
    let mut start = 0;
    while start < points.len() {
        let end = (start + ROW_BLOCK).min(points.len());
        let mut rows = basis_rows(&basis, points, start, end);
        rows.par_chunks_mut(d).enumerate().for_each(|(i, row)| {
            let s = weights.map_or(uniform, |w| w[start + i].sqrt());
            row.iter_mut().for_each(|v| *v *= s);
        });
        // column-major blocks pack faster in the rank-k update
        let block: Mat<f64> = MatRef::from_row_major_slice(&rows, end - start, d).to_owned();
        matmul(
            acc.as_mut(),
            BlockStructure::TriangularLower,
            Accum::Add,
            block.transpose(),
            BlockStructure::Rectangular,
            block.as_ref(),
            BlockStructure::Rectangular,
            1.0,
            Par::Seq,
        );
        start = end;
    }
    for j in 0..d {
        for i in 0..j {
            acc[(i, j)] = acc[(j, i)];
        }
    }
    Ok(acc)
}

/// Dimension `d_q(n)` as `usize`.
pub(crate) fn dim_usize(q: usize, n: usize) -> Result<usize> {
    usize::try_from(poly_space_dim(q, n)?).map_err(|_| MzError::Overflow("d_q(n) as usize"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_uniform, SpherePoint};

    #[test]
    fn addition_kernel_examples() {
        assert!((addition_kernel(2, 8, 1.0).unwrap() - 81.0).abs() < 1e-12);
        assert_eq!(addition_kernel(3, 0, 0.3).unwrap(), 1.0);
        assert_eq!(addition_kernel(2, 1, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn small_gram_matrices() {
        let p = SpherePoint::axis(2, 1);
        let one = PointSet::from_points(2, std::slice::from_ref(&p)).unwrap();
        assert_eq!(gram_matrix(&one, 3).unwrap().get(0, 0), 16.0);
        let two = PointSet::from_points(2, &[p.clone(), p]).unwrap();
        let g = gram_matrix(&two, 1).unwrap();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!((g.get(i, j) - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn basis_rows_carry_the_dimension() {
        let pts = sample_uniform(2, 20, 2);
        let l = explicit_basis_matrix_q2(&pts, 5).unwrap();
        for i in 0..20 {
            let s: f64 = (0..36).map(|k| l[(i, k)] * l[(i, k)]).sum();
            assert!((s - 36.0).abs() < 1e-11);
        }
        let l0 = explicit_basis_matrix_q2(&pts, 0).unwrap();
        assert!((0..20).all(|i| l0[(i, 0)] == 1.0));
        assert!(explicit_basis_matrix_q2(&sample_uniform(3, 2, 1), 1).is_err());
    }

    #[test]
    fn streamed_normal_matrix_matches_dense_product() {
        let pts = sample_uniform(2, 2 * ROW_BLOCK + 17, 9);
        let n = 3;
        let l = explicit_basis_matrix_q2(&pts, n).unwrap();
        let dense = l.transpose() * &l * (1.0 / pts.len() as f64);
        let streamed = weighted_normal_matrix_q2(&pts, None, n).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                assert!((dense[(i, j)] - streamed[(i, j)]).abs() < 1e-12);
            }
        }
    }
}
