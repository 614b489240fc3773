use super::dims::sphere_area;
use super::ultraspherical::UltrasphericalEvaluator;
use crate::error::Result;

/// Generalized de la Vallée Poussin kernel
/// `v_n(t) = K_{⌊n/2⌋}(t) K_{⌊3n/2⌋}(t) / (ω_{q-1} K_{⌊n/2⌋}(1))`.
///
/// Reproduces `Π_n^q` under spherical convolution; as a polynomial in `t`
/// its degree is `⌊n/2⌋ + ⌊3n/2⌋ ≤ 2n`.
#[derive(Debug, Clone)]
pub struct DlvpKernel {
    n: usize,
    low: usize,
    high: usize,
    eval: UltrasphericalEvaluator,
    scale: f64,
}

impl DlvpKernel {
    pub fn new(q: usize, n: usize) -> Result<Self> {
        let low = n / 2;
        let high = 3 * n / 2;
        let eval = UltrasphericalEvaluator::new(q, high)?;
        let k_low_one = eval.cd_kernel(low, 1.0)?;
        let scale = 1.0 / (sphere_area(q - 1)? * k_low_one);
        Ok(Self { n, low, high, eval, scale })
    }

    pub fn q(&self) -> usize {
        self.eval.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Polynomial degree `⌊n/2⌋ + ⌊3n/2⌋`.
    pub fn degree(&self) -> usize {
        self.low + self.high
    }

    pub fn evaluator(&self) -> &UltrasphericalEvaluator {
        &self.eval
    }

    pub fn eval(&self, t: f64) -> f64 {
        let [ka, _, kb, _] = self
            .eval
            .cd_kernel_pair(self.low, self.high, t)
            .expect("degrees fixed at construction");
        self.scale * ka * kb
    }

    /// `v_n'(t)` by the product rule on the two Christoffel–Darboux factors.
    pub fn deriv(&self, t: f64) -> f64 {
        let [ka, dka, kb, dkb] = self
            .eval
            .cd_kernel_pair(self.low, self.high, t)
            .expect("degrees fixed at construction");
        self.scale * (dka * kb + ka * dkb)
    }
}

pub fn dlvp_eval(kernel: &DlvpKernel, t: f64) -> f64 {
    kernel.eval(t)
}

pub fn dlvp_deriv_eval(kernel: &DlvpKernel, t: f64) -> f64 {
    kernel.deriv(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn degree_zero_kernel_is_constant() {
        let k = DlvpKernel::new(2, 0).unwrap();
        for &t in &[-1.0, -0.2, 0.0, 0.7, 1.0] {
            assert!((k.eval(t) - 1.0 / (4.0 * PI)).abs() < 1e-16);
            assert_eq!(k.deriv(t), 0.0);
        }
    }

    #[test]
    fn degree_one_kernel_is_cd_kernel() {
        // low = 0, high = 1: v_1 = K_1 / ω_{q-1}
        for q in 2..=4 {
            let k = DlvpKernel::new(q, 1).unwrap();
            let e = UltrasphericalEvaluator::new(q, 1).unwrap();
            let w = sphere_area(q - 1).unwrap();
            for &t in &[-0.5, 0.1, 0.9] {
                assert!((k.eval(t) - e.cd_kernel(1, t).unwrap() / w).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let k = DlvpKernel::new(3, 9).unwrap();
        let h = 1e-6;
        for &t in &[-0.8, -0.1, 0.4, 0.95] {
            let fd = (k.eval(t + h) - k.eval(t - h)) / (2.0 * h);
            assert!((k.deriv(t) - fd).abs() < 1e-5 * (1.0 + fd.abs()));
        }
        assert_eq!(k.degree(), 4 + 13);
    }
}
