//! Continuous `L_p` norms of spherical polynomials and weighted discrete
//! norms of their samples.
//!
//! Even integer `p` is integrated exactly by a product rule of degree `np`.
//! Other finite `p` nest one-dimensional integrals: on the innermost circle
//! the sign changes of `P` are located and Gauss–Legendre panels are laid
//! between them. On `S^2` the colatitude is then integrated adaptively
//! (Gauss–Kronrod). Higher spheres use one tensor Gauss–Jacobi rule over all
//! polar axes, refined by node doubling up to a cap. `p = ∞` maximizes over a dense product grid and polishes the
//! best candidates by a local pattern search.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::polynomial::SpherePolynomial;
use super::quadrature::quadrature_rule;
use crate::error::{domain, MzError, Result};
use crate::geometry::PointSet;
use crate::quad::{adaptive_gk, bracket_roots, gauss_jacobi_symmetric, gauss_legendre, GaussRule};
use crate::sphkernels::sphere_area;

/// Relative tolerance of the adaptive colatitude integral.
pub const ADAPTIVE_REL_TOL: f64 = 1e-11;
/// Stop criterion of node doubling on outer axes.
pub const DOUBLING_REL_TOL: f64 = 1e-8;
/// Node caps per polar axis; the error near the cap is about `1e-6` on
/// `S^3` and `1e-5` beyond.
const MAX_TENSOR_NODES_S3: usize = 128;
const MAX_TENSOR_NODES_HIGHER: usize = 32;
const SUP_CANDIDATES: usize = 12;

/// An `L_p` exponent in `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(domain(format!("p must lie in [1, ∞], got {p}")));
        }
        Ok(Exponent::Finite(p))
    }

    /// `Some(p)` for even integers.
    pub fn even_integer(self) -> Option<u32> {
        match self {
            Exponent::Finite(p) if p.fract() == 0.0 && p >= 2.0 && p % 2.0 == 0.0 && p < 1e6 => Some(p as u32),
            _ => None,
        }
    }

    /// The default test set `{1, 2, 4, ∞}`.
    pub fn default_list() -> Vec<Exponent> {
        vec![Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Finite(4.0), Exponent::Infinity]
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = MzError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| domain(format!("cannot parse exponent {s:?}")))?;
                Exponent::finite(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Which measure the norm is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Surface measure `μ_q`, total mass `ω_q`.
    Surface,
    /// Normalized measure `σ_q = μ_q / ω_q`.
    Probability,
}

fn finish(integral: f64, p: f64, q: usize, measure: Measure) -> Result<f64> {
    let mass = match measure {
        Measure::Surface => 1.0,
        Measure::Probability => sphere_area(q)?,
    };
    Ok((integral / mass).max(0.0).powf(1.0 / p))
}

/// `‖P‖_{μ,p}` for `μ ∈ {μ_q, σ_q}`.
pub fn continuous_norm(poly: &SpherePolynomial, p: Exponent, measure: Measure) -> Result<f64> {
    let q = poly.q();
    let n = poly.degree();
    match p {
        Exponent::Infinity => sup_norm(poly),
        Exponent::Finite(pf) if pf < 1.0 => Err(domain(format!("p must lie in [1, ∞], got {pf}"))),
        Exponent::Finite(pf) => {
            if let Some(even) = p.even_integer() {
                let rule = quadrature_rule(q, n * even as usize)?;
                let values = poly.eval_many(rule.nodes());
                let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if top == 0.0 {
                    return Ok(0.0);
                }
                let integral: f64 =
                    values.iter().zip(rule.weights()).map(|(v, w)| w * (v / top).powi(even as i32)).sum();
                return Ok(top * finish(integral, pf, q, measure)?);
            }
            finish(abs_pow_integral(q, n, pf, &|x| poly.eval(x)), pf, q, measure)
        }
    }
}

/// `∫_{S^k} |f|^p dμ_k` for a polynomial `f` of degree at most `n`.
pub fn abs_pow_integral(k: usize, n: usize, p: f64, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    match k {
        1 => circle_abs_pow(n, p, &|phi: f64| f(&[phi.cos(), phi.sin()])),
        2 => {
            adaptive_gk(0.0, PI, ADAPTIVE_REL_TOL, 1e-300, 4000, |theta| {
                let (s, c) = theta.sin_cos();
                s * circle_abs_pow(n, p, &|phi: f64| f(&[s * phi.cos(), s * phi.sin(), c]))
            })
            .value
        }
        _ => {
            let cap = if k == 3 { MAX_TENSOR_NODES_S3 } else { MAX_TENSOR_NODES_HIGHER };
            let mut m = 8;
            let mut prev = tensor_abs_pow(k, n, p, m, f);
            while m < cap {
                m *= 2;
                let next = tensor_abs_pow(k, n, p, m, f);
                if (next - prev).abs() <= DOUBLING_REL_TOL * next.abs() {
                    return next;
                }
                prev = next;
            }
            prev
        }
    }
}

/// `∫_0^{2π} |g(φ)|^p dφ` for a trigonometric polynomial `g` of degree at
/// most `n`, integrating between consecutive sign changes.
fn circle_abs_pow(n: usize, p: f64, g: &dyn Fn(f64) -> f64) -> f64 {
    thread_local! {
        static GL16: GaussRule = gauss_legendre(16);
    }
    let two_pi = 2.0 * PI;
    let roots = bracket_roots(0.0, two_pi, 8 * n + 16, g);
    let max_panel = two_pi / (n + 1) as f64;
    GL16.with(|rule| {
        let mut acc = 0.0;
        let mut lo = 0.0;
        for hi in roots.into_iter().chain(std::iter::once(two_pi)) {
            let pieces = ((hi - lo) / max_panel).ceil().max(1.0) as usize;
            let h = (hi - lo) / pieces as f64;
            for j in 0..pieces {
                let a = lo + j as f64 * h;
                acc += rule.integrate(a, a + h, |phi| g(phi).abs().powf(p));
            }
            lo = hi;
        }
        acc
    })
}

fn tangent_basis(x: &[f64]) -> Vec<Vec<f64>> {
    let dim = x.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim - 1);
    for axis in 0..dim {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        for u in std::iter::once(x).chain(basis.iter().map(|b| b.as_slice())) {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|a| *a /= norm);
            basis.push(v);
        }
        if basis.len() == dim - 1 {
            break;
        }
    }
    basis
}

/// Pattern search for a local maximum of `|P|` starting at `x`.
fn polish(poly: &SpherePolynomial, x: &[f64], mut step: f64) -> f64 {
    let mut x = x.to_vec();
    let mut best = poly.eval(&x).abs();
    while step > 1e-10 {
        let mut improved = false;
        for dir in tangent_basis(&x) {
            for sign in [1.0, -1.0] {
                let mut y: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + sign * step * d).collect();
                let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
                y.iter_mut().for_each(|a| *a /= norm);
                let v = poly.eval(&y).abs();
                if v > best {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// `max_{S^q} |P|`.
pub fn sup_norm(poly: &SpherePolynomial) -> Result<f64> {
    let n = poly.degree();
    let rule = quadrature_rule(poly.q(), 8 * n.max(1) + 8)?;
    let values = poly.eval_many(rule.nodes());
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()).then(a.cmp(&b)));
    let spacing = PI / (4 * n.max(1) + 5) as f64;
    Ok(order
        .iter()
        .take(SUP_CANDIDATES)
        .map(|&i| polish(poly, rule.nodes().row(i), spacing))
        .fold(0.0, f64::max))
}

/// `(Σ_j w_j |v_j|^p)^{1/p}`; `p = ∞` ignores the weights.
pub fn discrete_norm_of_values(values: &[f64], p: Exponent, weights: &[f64]) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(MzError::LengthMismatch { left: values.len(), right: weights.len() });
    }
    if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
        return Err(domain("weights must be non-negative"));
    }
    match p {
        Exponent::Infinity => Ok(values.iter().fold(0.0, |m, v| m.max(v.abs()))),
        Exponent::Finite(pf) if pf < 1.0 => Err(domain(format!("p must lie in [1, ∞], got {pf}"))),
        Exponent::Finite(pf) => {
            // scaled by the largest magnitude so that large p cannot overflow
            let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if top == 0.0 {
                return Ok(0.0);
            }
            let s: f64 = values.iter().zip(weights).map(|(v, w)| w * (v.abs() / top).powf(pf)).sum();
            Ok(top * s.powf(1.0 / pf))
        }
    }
}

/// Weighted discrete norm of `P` sampled at `points`.
pub fn discrete_norm(poly: &SpherePolynomial, p: Exponent, points: &PointSet, weights: &[f64]) -> Result<f64> {
    if points.len() != weights.len() {
        return Err(MzError::LengthMismatch { left: points.len(), right: weights.len() });
    }
    discrete_norm_of_values(&poly.eval_many(points), p, weights)
}

/// Tensor rule with `m` Gauss–Jacobi nodes on each polar axis of `S^k`.
fn tensor_abs_pow(k: usize, n: usize, p: f64, m: usize, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    let rules: Vec<GaussRule> =
        (2..=k).map(|lvl| gauss_jacobi_symmetric(m, lvl as f64 / 2.0 - 1.0).unwrap()).collect();
    tensor_level(k, n, p, &rules, f)
}

fn tensor_level(k: usize, n: usize, p: f64, rules: &[GaussRule], f: &dyn Fn(&[f64]) -> f64) -> f64 {
    if k == 1 {
        return circle_abs_pow(n, p, &|phi: f64| f(&[phi.cos(), phi.sin()]));
    }
    let rule = &rules[k - 2];
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| {
            let s = (1.0 - t * t).max(0.0).sqrt();
            let lifted = |y: &[f64]| {
                let mut x = [0.0; 8];
                for (xi, yi) in x.iter_mut().zip(y) {
                    *xi = s * yi;
                }
                x[k] = t;
                f(&x[..=k])
            };
            w * tensor_level(k - 1, n, p, rules, &lifted)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_uniform, SpherePoint};
    use crate::mz::random_polynomial;

    fn constant(q: usize, c: f64) -> SpherePolynomial {
        if q == 2 {
            SpherePolynomial::harmonic(0, vec![c]).unwrap()
        } else {
            let k0 = crate::sphkernels::cd_kernel_eval(q, 0, 1.0).unwrap();
            SpherePolynomial::zonal(0, PointSet::from_points(q, &[SpherePoint::north_pole(q)]).unwrap(), vec![c / k0])
                .unwrap()
        }
    }

    #[test]
    fn constant_norms() {
        for q in 2..=3 {
            let omega = sphere_area(q).unwrap();
            let c = -1.7;
            let p_const = constant(q, c);
            for p in [1.0, 1.5, 2.0, 3.0, 4.0] {
                let v = continuous_norm(&p_const, Exponent::Finite(p), Measure::Surface).unwrap();
                assert!((v - c.abs() * omega.powf(1.0 / p)).abs() < 1e-10, "q {q} p {p}: {v}");
                let s = continuous_norm(&p_const, Exponent::Finite(p), Measure::Probability).unwrap();
                assert!((s - c.abs()).abs() < 1e-10);
            }
            assert!((continuous_norm(&p_const, Exponent::Infinity, Measure::Surface).unwrap() - 1.7).abs() < 1e-12);
        }
    }

    #[test]
    fn orthonormal_harmonics_have_unit_norm() {
        for k in [0, 3, 7, 15] {
            let mut c = vec![0.0; 16];
            c[k] = 1.0;
            let p = SpherePolynomial::harmonic(3, c).unwrap();
            let v = continuous_norm(&p, Exponent::Finite(2.0), Measure::Probability).unwrap();
            assert!((v - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn odd_integer_exponent_matches_exact_rule_on_even_power() {
        // |P|^3 is not polynomial, but for P = e_{1,0} = √3 t the integral is closed form:
        // ∫ |√3 t|³ dσ_2 = 3^{3/2} / 4
        let mut c = vec![0.0; 4];
        c[2] = 1.0;
        let p = SpherePolynomial::harmonic(1, c).unwrap();
        let v = continuous_norm(&p, Exponent::Finite(3.0), Measure::Probability).unwrap();
        assert!((v.powi(3) - 3f64.powf(1.5) / 4.0).abs() < 1e-10);
        let v1 = continuous_norm(&p, Exponent::Finite(1.0), Measure::Probability).unwrap();
        assert!((v1 - 3f64.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn norms_increase_with_p_for_probability_measure() {
        let poly = random_polynomial(2, 4, 3).unwrap();
        let ps = [1.0, 1.5, 2.0, 3.0, 4.0];
        let mut prev = 0.0;
        for p in ps {
            let v = continuous_norm(&poly, Exponent::Finite(p), Measure::Probability).unwrap();
            assert!(v >= prev - 1e-10);
            prev = v;
        }
        let sup = continuous_norm(&poly, Exponent::Infinity, Measure::Probability).unwrap();
        assert!(sup >= prev);
        let on_samples = poly.eval_many(&sample_uniform(2, 20_000, 1)).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(sup >= on_samples);
    }

    #[test]
    fn discrete_norm_examples() {
        let c = constant(2, 2.0);
        let omega = 4.0 * PI;
        let pts = PointSet::from_points(2, &[SpherePoint::north_pole(2)]).unwrap();
        assert!((discrete_norm(&c, Exponent::Finite(1.0), &pts, &[omega]).unwrap() - 2.0 * omega).abs() < 1e-12);
        assert_eq!(discrete_norm_of_values(&[1.0, -3.0], Exponent::Infinity, &[0.0, 0.0]).unwrap(), 3.0);
        assert!(discrete_norm_of_values(&[1.0], Exponent::Finite(1.0), &[1.0, 2.0]).is_err());
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("4".parse::<Exponent>().unwrap(), Exponent::Finite(4.0));
        assert!("0.5".parse::<Exponent>().is_err());
        assert_eq!(Exponent::Finite(4.0).even_integer(), Some(4));
        assert_eq!(Exponent::Finite(3.0).even_integer(), None);
        assert_eq!(serde_json::to_string(&Exponent::default_list()).unwrap(), "[1.0,2.0,4.0,\"inf\"]");
    }
}
