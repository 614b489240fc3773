//! One-dimensional quadrature: Gauss rules for symmetric Jacobi weights,
//! composite and adaptive Gauss–Legendre/Kronrod integration, and root
//! bracketing used to split piecewise-smooth integrands.

use faer::{Mat, Side};

use crate::error::{MzError, Result};

/// Gauss rule on `[-1, 1]` for a fixed weight function.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]` after the affine map from `[-1, 1]`.
    /// Only meaningful for the unit weight (Gauss–Legendre).
    #[inline]
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Gauss–Jacobi rule with `m` nodes for the symmetric weight `(1 - t²)^alpha`,
/// `alpha > -1`, computed by Golub–Welsch.
pub fn gauss_jacobi_symmetric(m: usize, alpha: f64) -> Result<GaussRule> {
    if m == 0 {
        return Ok(GaussRule { nodes: vec![], weights: vec![] });
    }
    if alpha <= -1.0 {
        return Err(crate::error::domain("Jacobi exponent must exceed -1"));
    }
    // Gegenbauer index of the monic recurrence p_{k+1} = t p_k - beta_k p_{k-1}.
    let lam = alpha + 0.5;
    let mut jac = Mat::<f64>::zeros(m, m);
    for k in 1..m {
        let kf = k as f64;
        let beta = kf * (kf + 2.0 * lam - 1.0) / (4.0 * (kf + lam) * (kf + lam - 1.0));
        let off = beta.sqrt();
        jac[(k, k - 1)] = off;
        jac[(k - 1, k)] = off;
    }
    let mu0 = jacobi_weight_mass(alpha);
    let evd = jac
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| MzError::Eigensolver)?;
    let s = evd.S();
    let u = evd.U();
    let mut nodes: Vec<f64> = (0..m).map(|k| s[k]).collect();
    let mut weights: Vec<f64> = (0..m).map(|k| mu0 * u[(0, k)] * u[(0, k)]).collect();

    // Enforce the exact reflection symmetry of the weight.
    for k in 0..m / 2 {
        let j = m - 1 - k;
        let x = 0.5 * (nodes[j] - nodes[k]);
        let w = 0.5 * (weights[j] + weights[k]);
        nodes[k] = -x;
        nodes[j] = x;
        weights[k] = w;
        weights[j] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(GaussRule { nodes, weights })
}

/// Gauss–Legendre rule with `m` nodes.
pub fn gauss_legendre(m: usize) -> GaussRule {
    gauss_jacobi_symmetric(m, 0.0).expect("Legendre weight is admissible")
}

/// `∫_{-1}^{1} (1 - t²)^alpha dt = B(1/2, alpha + 1)`.
pub fn jacobi_weight_mass(alpha: f64) -> f64 {
    // For the half-integer and integer exponents used here the ratio of gamma
    // functions is built by upward recursion from alpha in (-1, 0].
    let mut a = alpha;
    let mut scale = 1.0;
    while a > 0.0 {
        // B(1/2, a+1) = B(1/2, a) * a / (a + 1/2)
        scale *= a / (a + 0.5);
        a -= 1.0;
    }
    // a in (-1, 0]: B(1/2, a+1) = sqrt(pi) Γ(a+1) / Γ(a+3/2)
    let base = if a == 0.0 {
        2.0
    } else if (a + 0.5).abs() < 1e-15 {
        std::f64::consts::PI
    } else {
        std::f64::consts::PI.sqrt() * lanczos_gamma(a + 1.0) / lanczos_gamma(a + 1.5)
    };
    base * scale
}

fn lanczos_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * lanczos_gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = C[0];
        let t = x + G + 0.5;
        for (i, c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// Composite Gauss–Legendre over the sorted breakpoints.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(breaks: &[f64], rule: &GaussRule, mut f: F) -> f64 {
    breaks
        .windows(2)
        .map(|w| rule.integrate(w[0], w[1], &mut f))
        .sum()
}

/// Uniform panel boundaries on `[a, b]` merged with extra breakpoints.
pub fn panel_breaks(a: f64, b: f64, panels: usize, extra: &[f64]) -> Vec<f64> {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut out: Vec<f64> = (0..=panels).map(|k| a + h * k as f64).collect();
    *out.last_mut().unwrap() = b;
    out.extend(extra.iter().copied().filter(|x| *x > a && *x < b));
    out.sort_by(|x, y| x.total_cmp(y));
    out.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (1.0 + y.abs()));
    out
}

/// Result of a refinement-by-doubling integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Absolute change between the last two refinement levels.
    pub error: f64,
    pub panels: usize,
}

/// Composite 16-point Gauss–Legendre on `[a, b]` with interior breakpoints,
/// doubling the panel count until the change drops below `tol`
/// (absolute, scaled by `max(1, |I|)`) or `max_panels` is reached.
pub fn doubling_integral<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    start_panels: usize,
    max_panels: usize,
    tol: f64,
    extra_breaks: &[f64],
    mut f: F,
) -> Estimate {
    let rule = gauss_legendre(16);
    let mut panels = start_panels.max(1);
    let mut prev = integrate_pieces(&panel_breaks(a, b, panels, extra_breaks), &rule, &mut f);
    loop {
        let next_panels = panels * 2;
        let next = integrate_pieces(&panel_breaks(a, b, next_panels, extra_breaks), &rule, &mut f);
        let change = (next - prev).abs();
        panels = next_panels;
        if change < tol * next.abs().max(1.0) || panels >= max_panels {
            return Estimate { value: next, error: change, panels };
        }
        prev = next;
    }
}

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod (7/15) integration. Bisects the interval
/// with the largest error estimate until the summed estimate is below
/// `max(abs_tol, rel_tol * |I|)` or `max_intervals` is reached.
pub fn adaptive_gk<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
    mut f: F,
) -> Estimate {
    let (v, e) = gk15(a, b, &mut f);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || parts.len() >= max_intervals {
            return Estimate { value: total, error: err, panels: parts.len() };
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(lo, mid, &mut f);
        let (v2, e2) = gk15(mid, hi, &mut f);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Roots of `f` on `[a, b]` located by sign changes over `samples` equal
/// subintervals and refined by bisection to machine precision.
/// Roots hit exactly by a sample are reported once.
pub fn bracket_roots<F: FnMut(f64) -> f64>(a: f64, b: f64, samples: usize, mut f: F) -> Vec<f64> {
    let samples = samples.max(1);
    let h = (b - a) / samples as f64;
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut f0 = f(a);
    for k in 1..=samples {
        let x1 = if k == samples { b } else { a + h * k as f64 };
        let f1 = f(x1);
        if f0 == 0.0 {
            if k > 1 {
                roots.push(x0);
            }
        } else if f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(x0, x1, f0, &mut f));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

fn bisect<F: FnMut(f64) -> f64>(mut lo: f64, mut hi: f64, mut flo: f64, f: &mut F) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_to_degree_2m_minus_1() {
        let rule = gauss_legendre(6);
        for k in 0..12 {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(k));
            assert!((got - exact).abs() < 1e-14, "k={k}: {got} vs {exact}");
        }
    }

    #[test]
    fn jacobi_weight_masses() {
        assert!((jacobi_weight_mass(0.0) - 2.0).abs() < 1e-15);
        assert!((jacobi_weight_mass(0.5) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((jacobi_weight_mass(1.0) - 4.0 / 3.0).abs() < 1e-15);
        assert!((jacobi_weight_mass(-0.5) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_second_kind_rule_matches_closed_form() {
        // weight sqrt(1 - t²): nodes cos(k pi / (m+1))
        let m = 7;
        let rule = gauss_jacobi_symmetric(m, 0.5).unwrap();
        for k in 0..m {
            let expect = -((k as f64 + 1.0) * std::f64::consts::PI / (m as f64 + 1.0)).cos();
            assert!((rule.nodes[k] - expect).abs() < 1e-14);
        }
        // ∫ t^4 sqrt(1-t²) = pi/16
        let got: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(4)).sum();
        assert!((got - std::f64::consts::PI / 16.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_kinks() {
        let est = adaptive_gk(-1.0, 2.0, 1e-12, 1e-14, 500, |x: f64| (x - 0.3).abs());
        let exact = 0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7;
        assert!((est.value - exact).abs() < 1e-11);
    }

    #[test]
    fn roots_of_cosine() {
        let roots = bracket_roots(0.0, 10.0, 100, f64::cos);
        assert_eq!(roots.len(), 3);
        for (k, r) in roots.iter().enumerate() {
            let expect = std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI;
            assert!((r - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn doubling_converges_with_breakpoints() {
        let est = doubling_integral(0.0, 3.0, 4, 1 << 12, 1e-12, &[1.0], |x: f64| (x - 1.0).abs());
        assert!((est.value - 2.5).abs() < 1e-13);
    }
}
