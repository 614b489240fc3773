use std::f64::consts::PI;

use crate::error::{MzError, Result};
use crate::geometry::{PointSet, MAX_PARTITION_DIM};
use crate::quad::gauss_jacobi_symmetric;

/// Positive-weight product rule on `S^q` exact for `Π_D^q`.
///
/// Built from `dμ_q = (1-t²)^{q/2-1} dt dμ_{q-1}`: a Gauss rule in
/// `t = x_q` with `⌈(D+1)/2⌉` nodes times the rule on `S^{q-1}`, ending in
/// `D+1` equispaced angles on the circle.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    degree: usize,
    nodes: PointSet,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn q(&self) -> usize {
        self.nodes.q()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &PointSet {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.rows().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }
}

fn circle_rule(degree: usize) -> (Vec<f64>, Vec<f64>) {
    let m = degree + 1;
    let w = 2.0 * PI / m as f64;
    let mut nodes = Vec::with_capacity(2 * m);
    for k in 0..m {
        let phi = k as f64 * w;
        nodes.extend([phi.cos(), phi.sin()]);
    }
    (nodes, vec![w; m])
}

pub fn quadrature_rule(q: usize, degree: usize) -> Result<QuadratureRule> {
    if q == 0 || q > MAX_PARTITION_DIM {
        return Err(MzError::UnsupportedDimension { q, reason: "product quadrature is built for 1 ≤ q ≤ 4" });
    }
    let (mut nodes, mut weights) = circle_rule(degree);
    let m = (degree + 1).div_ceil(2);
    for k in 2..=q {
        let gauss = gauss_jacobi_symmetric(m, k as f64 / 2.0 - 1.0)?;
        let mut next_nodes = Vec::with_capacity(nodes.len() / k * (k + 1) * m);
        let mut next_weights = Vec::with_capacity(weights.len() * m);
        for (t, wt) in gauss.nodes.iter().zip(&gauss.weights) {
            let s = (1.0 - t * t).max(0.0).sqrt();
            for (y, wy) in nodes.chunks_exact(k).zip(&weights) {
                next_nodes.extend(y.iter().map(|c| s * c));
                next_nodes.push(*t);
                next_weights.push(wt * wy);
            }
        }
        nodes = next_nodes;
        weights = next_weights;
    }
    Ok(QuadratureRule { degree, nodes: PointSet::from_raw(q, nodes), weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_uniform;
    use crate::gram::addition_kernel;
    use crate::sphkernels::{sphere_area, ultraspherical_norm_sq, UltrasphericalEvaluator};

    #[test]
    fn constants_integrate_to_area() {
        for q in 1..=4 {
            let rule = quadrature_rule(q, 7).unwrap();
            let total: f64 = rule.weights().iter().sum();
            let omega = sphere_area(q).unwrap();
            assert!((total - omega).abs() < 1e-12 * omega, "q {q}");
            assert!(rule.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn zonal_products_give_norms() {
        for q in 2..=4 {
            let omega = sphere_area(q).unwrap();
            let lateral = sphere_area(q - 1).unwrap();
            let eval = UltrasphericalEvaluator::new(q, 6).unwrap();
            let z = sample_uniform(q, 1, 3);
            let z = z.row(0);
            let rule = quadrature_rule(q, 12).unwrap();
            for l in 0..=6 {
                for m in 0..=6 {
                    let v = rule.integrate(|x| {
                        let t: f64 = x.iter().zip(z).map(|(a, b)| a * b).sum();
                        eval.eval(l, t).unwrap() * eval.eval(m, t).unwrap()
                    });
                    let expect = if l == m { lateral * ultraspherical_norm_sq(q, l).unwrap() } else { 0.0 };
                    assert!((v - expect).abs() < 1e-11 * omega, "q {q} l {l} m {m}: {v} vs {expect}");
                }
            }
        }
    }

    #[test]
    fn addition_kernel_integrates_to_area() {
        for q in 2..=4 {
            let omega = sphere_area(q).unwrap();
            let d = 9;
            let rule = quadrature_rule(q, d).unwrap();
            for z in sample_uniform(q, 3, 17).rows() {
                let v = rule.integrate(|x| {
                    let t: f64 = x.iter().zip(z).map(|(a, b)| a * b).sum();
                    addition_kernel(q, d, t).unwrap()
                });
                assert!((v - omega).abs() < 1e-11 * omega);
            }
        }
    }
}
