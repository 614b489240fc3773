use super::dims::{harmonic_dim, sphere_area};
use crate::error::{MzError, Result};

/// Three-term recurrence engine for the ultraspherical polynomials `R_n`
/// of the weight `w_q(t) = (1 - t²)^{q/2 - 1}`, normalized so `R_n(1) = 1`.
///
/// With Gegenbauer index `λ = (q-1)/2` the normalized family satisfies
/// `R_{k+1}(t) = a_k t R_k(t) - b_k R_{k-1}(t)`,
/// `a_k = 2(k+λ)/(k+2λ)`, `b_k = k/(k+2λ)`.
#[derive(Debug, Clone)]
pub struct UltrasphericalEvaluator {
    q: usize,
    max_degree: usize,
    recurrence: Vec<(f64, f64)>,
    harmonic_dims: Vec<f64>,
    /// `ω_{q-1} / ω_q`, the Christoffel–Darboux prefactor.
    cd_factor: f64,
}

impl UltrasphericalEvaluator {
    pub fn new(q: usize, max_degree: usize) -> Result<Self> {
        let lambda = (q as f64 - 1.0) / 2.0;
        let harmonic_dims = (0..=max_degree)
            .map(|l| harmonic_dim(q, l).map(|h| h as f64))
            .collect::<Result<Vec<_>>>()?;
        let recurrence = (0..max_degree)
            .map(|k| {
                let k = k as f64;
                let den = k + 2.0 * lambda;
                (2.0 * (k + lambda) / den, k / den)
            })
            .collect();
        let cd_factor = sphere_area(q - 1)? / sphere_area(q)?;
        Ok(Self { q, max_degree, recurrence, harmonic_dims, cd_factor })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `ω_{q-1} / ω_q`.
    pub fn cd_factor(&self) -> f64 {
        self.cd_factor
    }

    /// `h_q(ℓ)` as a float, for `ℓ ≤ max_degree`.
    pub fn harmonic_dim(&self, l: usize) -> f64 {
        self.harmonic_dims[l]
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            return Err(MzError::DegreeExceeded { requested: n, max: self.max_degree });
        }
        Ok(())
    }

    /// Fills `out[k] = R_k(t)` for `k < out.len()`. Arguments outside
    /// `[-1, 1]` are clamped; the endpoints are returned exactly.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        if out.is_empty() {
            return Ok(());
        }
        self.check(out.len() - 1)?;
        let t = t.clamp(-1.0, 1.0);
        if t == 1.0 || t == -1.0 {
            let mut s = 1.0;
            for v in out.iter_mut() {
                *v = s;
                s *= t;
            }
            return Ok(());
        }
        out[0] = 1.0;
        if out.len() > 1 {
            out[1] = t;
        }
        for k in 1..out.len().saturating_sub(1) {
            let (a, b) = self.recurrence[k];
            out[k + 1] = a * t * out[k] - b * out[k - 1];
        }
        Ok(())
    }

    /// `R_n(t)`.
    pub fn eval(&self, n: usize, t: f64) -> Result<f64> {
        self.check(n)?;
        let t = t.clamp(-1.0, 1.0);
        if t == 1.0 {
            return Ok(1.0);
        }
        if t == -1.0 {
            return Ok(if n.is_multiple_of(2) { 1.0 } else { -1.0 });
        }
        let (mut prev, mut cur) = (1.0, t);
        if n == 0 {
            return Ok(1.0);
        }
        for k in 1..n {
            let (a, b) = self.recurrence[k];
            let next = a * t * cur - b * prev;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// `(R_n(t), R_n'(t))`, the derivative from differentiating the recurrence.
    pub fn eval_with_derivative(&self, n: usize, t: f64) -> Result<(f64, f64)> {
        self.check(n)?;
        let t = t.clamp(-1.0, 1.0);
        if n == 0 {
            return Ok((1.0, 0.0));
        }
        let (mut p0, mut p1) = (1.0, t);
        let (mut d0, mut d1) = (0.0, 1.0);
        for k in 1..n {
            let (a, b) = self.recurrence[k];
            let p2 = a * t * p1 - b * p0;
            let d2 = a * (p1 + t * d1) - b * d0;
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
        }
        Ok((p1, d1))
    }

    /// Addition-formula sum `Σ_{ℓ≤n} h_q(ℓ) R_ℓ(t)`; equals `d_q(n)` at `t = 1`.
    pub fn addition_sum(&self, n: usize, t: f64) -> Result<f64> {
        self.check(n)?;
        let t = t.clamp(-1.0, 1.0);
        let h = &self.harmonic_dims;
        let mut acc = h[0];
        if n == 0 {
            return Ok(acc);
        }
        let (mut prev, mut cur) = (1.0, t);
        acc += h[1] * cur;
        for k in 1..n {
            let (a, b) = self.recurrence[k];
            let next = a * t * cur - b * prev;
            prev = cur;
            cur = next;
            acc += h[k + 1] * cur;
        }
        Ok(acc)
    }

    /// Christoffel–Darboux kernel `K_n(t) = Σ_{k≤n} ‖R_k‖⁻² R_k(t)` with the
    /// `w_q`-weighted norm, i.e. `(ω_{q-1}/ω_q) Σ h_q(k) R_k(t)`.
    pub fn cd_kernel(&self, n: usize, t: f64) -> Result<f64> {
        Ok(self.cd_factor * self.addition_sum(n, t)?)
    }

    /// Christoffel–Darboux kernels for two degrees `lo ≤ hi` and their
    /// derivatives from a single recurrence pass:
    /// `(K_lo, K_lo', K_hi, K_hi')`.
    pub fn cd_kernel_pair(&self, lo: usize, hi: usize, t: f64) -> Result<[f64; 4]> {
        debug_assert!(lo <= hi);
        self.check(hi)?;
        let t = t.clamp(-1.0, 1.0);
        let h = &self.harmonic_dims;
        let (mut p0, mut p1) = (1.0, t);
        let (mut d0, mut d1) = (0.0, 1.0);
        let mut s = h[0];
        let mut ds = 0.0;
        let mut out = [0.0; 4];
        if lo == 0 {
            out[0] = s;
            out[1] = ds;
        }
        if hi >= 1 {
            s += h[1] * p1;
            ds += h[1] * d1;
            if lo == 1 {
                out[0] = s;
                out[1] = ds;
            }
        }
        for k in 1..hi {
            let (a, b) = self.recurrence[k];
            let p2 = a * t * p1 - b * p0;
            let d2 = a * (p1 + t * d1) - b * d0;
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
            s += h[k + 1] * p1;
            ds += h[k + 1] * d1;
            if k + 1 == lo {
                out[0] = s;
                out[1] = ds;
            }
        }
        out[2] = s;
        out[3] = ds;
        for v in &mut out {
            *v *= self.cd_factor;
        }
        Ok(out)
    }
}

/// `R_n(t)` for the evaluator's dimension.
pub fn ultraspherical_eval(eval: &UltrasphericalEvaluator, n: usize, t: f64) -> Result<f64> {
    eval.eval(n, t)
}

/// `K_n(t)` on `S^q`.
pub fn cd_kernel_eval(q: usize, n: usize, t: f64) -> Result<f64> {
    UltrasphericalEvaluator::new(q, n)?.cd_kernel(n, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphkernels::dims::poly_space_dim;
    use std::f64::consts::PI;

    #[test]
    fn low_degrees() {
        for q in 2..=5 {
            let e = UltrasphericalEvaluator::new(q, 10).unwrap();
            assert_eq!(e.eval(0, 0.37).unwrap(), 1.0);
            assert_eq!(e.eval(1, 0.3).unwrap(), 0.3);
            assert_eq!(e.eval(7, 1.0).unwrap(), 1.0);
        }
        let e = UltrasphericalEvaluator::new(2, 4).unwrap();
        assert!((e.eval(2, 0.5).unwrap() + 0.125).abs() < 1e-16);
        assert!(e.eval(5, 0.1).is_err());
    }

    #[test]
    fn q2_is_legendre() {
        let e = UltrasphericalEvaluator::new(2, 12).unwrap();
        for &t in &[-0.9, -0.3, 0.0, 0.25, 0.8] {
            let (mut p0, mut p1) = (1.0f64, t);
            for n in 1..12 {
                let p2 = ((2 * n + 1) as f64 * t * p1 - n as f64 * p0) / (n + 1) as f64;
                p0 = p1;
                p1 = p2;
                assert!((e.eval(n + 1, t).unwrap() - p1).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn q3_is_chebyshev_second_kind_ratio() {
        // R_n = U_n(t) / (n+1) for q = 3.
        let e = UltrasphericalEvaluator::new(3, 20).unwrap();
        for &th in &[0.3f64, 1.1, 2.5] {
            let t = th.cos();
            for n in 0..20 {
                let expect = ((n as f64 + 1.0) * th).sin() / (th.sin() * (n as f64 + 1.0));
                assert!((e.eval(n, t).unwrap() - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn eval_into_matches_eval() {
        let e = UltrasphericalEvaluator::new(4, 30).unwrap();
        let mut buf = vec![0.0; 31];
        for &t in &[-1.0, -0.77, 0.01, 0.5, 1.0] {
            e.eval_into(t, &mut buf).unwrap();
            for (n, v) in buf.iter().enumerate() {
                assert!((v - e.eval(n, t).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let e = UltrasphericalEvaluator::new(3, 15).unwrap();
        let h = 1e-6;
        for n in 0..=15 {
            for &t in &[-0.6, 0.2, 0.9] {
                let (_, d) = e.eval_with_derivative(n, t).unwrap();
                let fd = (e.eval(n, t + h).unwrap() - e.eval(n, t - h).unwrap()) / (2.0 * h);
                assert!((d - fd).abs() < 1e-6 * (1.0 + d.abs()), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn cd_kernel_examples() {
        assert!((cd_kernel_eval(2, 8, 1.0).unwrap() - 40.5).abs() < 1e-13);
        for &t in &[-1.0, 0.0, 0.4] {
            assert!((cd_kernel_eval(2, 0, t).unwrap() - 0.5).abs() < 1e-16);
        }
        assert!((cd_kernel_eval(3, 1, 1.0).unwrap() - 10.0 / PI).abs() < 1e-14);
        let e = UltrasphericalEvaluator::new(3, 9).unwrap();
        let d = poly_space_dim(3, 9).unwrap() as f64;
        assert!((e.addition_sum(9, 1.0).unwrap() - d).abs() < 1e-12);
    }

    #[test]
    fn kernel_pair_matches_single_kernels() {
        let e = UltrasphericalEvaluator::new(3, 12).unwrap();
        for (lo, hi) in [(0, 0), (0, 1), (1, 1), (2, 6), (4, 12)] {
            let t = 0.31;
            let [ka, dka, kb, dkb] = e.cd_kernel_pair(lo, hi, t).unwrap();
            assert!((ka - e.cd_kernel(lo, t).unwrap()).abs() < 1e-13);
            assert!((kb - e.cd_kernel(hi, t).unwrap()).abs() < 1e-13);
            let h = 1e-6;
            let fd_a = (e.cd_kernel(lo, t + h).unwrap() - e.cd_kernel(lo, t - h).unwrap()) / (2.0 * h);
            let fd_b = (e.cd_kernel(hi, t + h).unwrap() - e.cd_kernel(hi, t - h).unwrap()) / (2.0 * h);
            assert!((dka - fd_a).abs() < 1e-6 * (1.0 + fd_a.abs()));
            assert!((dkb - fd_b).abs() < 1e-6 * (1.0 + fd_b.abs()));
        }
    }
}
