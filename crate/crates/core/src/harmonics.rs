//! Real spherical harmonics on `S^2`, orthonormal under the normalized
//! measure `σ_2` (mean square one over the sphere).
//!
//! `e_{l,0} = Q_l^0(t)`, `e_{l,±m} = √2 Q_l^m(t) · {cos, sin}(mφ)` with `t = x_2`
//! and `Q_l^m` the fully normalized associated Legendre functions. The
//! factor `sin^m θ` is carried by `Re/Im (x_0 + i x_1)^m`, so no division
//! by `sin θ` occurs near the poles.

use crate::error::{MzError, Result};

/// Number of harmonics of degree at most `n`: `(n+1)²`.
pub fn q2_basis_len(n: usize) -> usize {
    (n + 1) * (n + 1)
}

/// Column of `e_{l,m}`, `-l ≤ m ≤ l`; negative `m` are the sine terms.
pub fn q2_column(l: usize, m: isize) -> usize {
    ((l * l + l) as isize + m) as usize
}

/// Precomputed recurrence constants for degree `n`.
#[derive(Debug, Clone)]
pub struct HarmonicsQ2 {
    n: usize,
    /// `Q̃_m^m = Q_m^m / sin^m θ`, constant in `t`.
    diag: Vec<f64>,
    /// `(a_lm, b_lm)` for `l ≥ m + 2`, flattened by `(m, l)`.
    coeffs: Vec<Vec<(f64, f64)>>,
}

impl HarmonicsQ2 {
    pub fn new(n: usize) -> Self {
        let mut diag = vec![1.0; n + 1];
        for m in 1..=n {
            let mf = m as f64;
            diag[m] = diag[m - 1] * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
        }
        let coeffs = (0..=n)
            .map(|m| {
                let mf = m as f64;
                ((m + 2)..=n)
                    .map(|l| {
                        let lf = l as f64;
                        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                        let lm1 = lf - 1.0;
                        let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
                        (a, b)
                    })
                    .collect()
            })
            .collect();
        Self { n, diag, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        q2_basis_len(self.n)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Writes `e_k(x)` for all `(n+1)²` harmonics into `out`.
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), 3);
        debug_assert_eq!(out.len(), self.len());
        let (x0, x1, t) = (x[0], x[1], x[2]);
        let sqrt2 = std::f64::consts::SQRT_2;
        // (c, s) = Re, Im of (x0 + i x1)^m
        let (mut c, mut s) = (1.0, 0.0);
        for m in 0..=self.n {
            if m > 0 {
                (c, s) = (c * x0 - s * x1, c * x1 + s * x0);
            }
            let mut prev = 0.0;
            let mut cur = self.diag[m];
            for l in m..=self.n {
                if l == m + 1 {
                    prev = cur;
                    cur *= (2.0 * m as f64 + 3.0).sqrt() * t;
                } else if l > m + 1 {
                    let (a, b) = self.coeffs[m][l - m - 2];
                    let next = a * (t * cur - b * prev);
                    prev = cur;
                    cur = next;
                }
                let base = l * l + l;
                if m == 0 {
                    out[base] = cur;
                } else {
                    out[base + m] = sqrt2 * cur * c;
                    out[base - m] = sqrt2 * cur * s;
                }
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.eval_into(x, &mut out);
        out
    }
}

pub(crate) fn require_q2(q: usize) -> Result<()> {
    if q != 2 {
        return Err(MzError::UnsupportedDimension { q, reason: "the explicit harmonic basis is built for q = 2" });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn low_degree_closed_forms() {
        let h = HarmonicsQ2::new(2);
        let x = [0.48, -0.6, 0.64];
        let e = h.eval(&x);
        let r3 = 3f64.sqrt();
        assert!((e[0] - 1.0).abs() < 1e-15);
        assert!((e[q2_column(1, 0)] - r3 * x[2]).abs() < 1e-15);
        assert!((e[q2_column(1, 1)] - r3 * x[0]).abs() < 1e-15);
        assert!((e[q2_column(1, -1)] - r3 * x[1]).abs() < 1e-15);
        let p2 = 5f64.sqrt() * (3.0 * x[2] * x[2] - 1.0) / 2.0;
        assert!((e[q2_column(2, 0)] - p2).abs() < 1e-14);
        let xy = 15f64.sqrt() * x[0] * x[1];
        assert!((e[q2_column(2, -2)] - xy).abs() < 1e-14);
    }

    #[test]
    fn addition_theorem_on_the_diagonal() {
        let n = 30;
        let h = HarmonicsQ2::new(n);
        for &phi in &[0.0, 1.3, 4.0] {
            for &theta in &[0.0, 0.2, PI / 2.0, 3.0, PI] {
                let x = [theta.sin() * f64::cos(phi), theta.sin() * f64::sin(phi), theta.cos()];
                let sq: f64 = h.eval(&x).iter().map(|v| v * v).sum();
                assert!((sq - q2_basis_len(n) as f64).abs() < 1e-9 * sq);
            }
        }
    }
}
