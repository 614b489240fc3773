//! Numerical integrals of the de la Vallée Poussin kernel and the
//! closed-form bounds they are checked against.

use serde::Serialize;

use super::dims::{gamma_half, sphere_area};
use super::kernel::DlvpKernel;
use crate::error::Result;
use crate::quad::{bracket_roots, doubling_integral, Estimate};

/// Change threshold for panel doubling.
pub const DOUBLING_TOL: f64 = 1e-9;
/// Panel cap for the composite rules.
pub const MAX_PANELS: usize = 1 << 16;

/// `3^{q/2} / ω_{q-1}`.
pub fn l1_bound(q: usize) -> Result<f64> {
    Ok(3f64.powf(q as f64 / 2.0) / sphere_area(q - 1)?)
}

/// `(1/ω_{q-1}) · 2 max{n, 2q}^q / (Γ(q/2) Γ(q/2 + 1))`.
pub fn sup_bound(q: usize, n: usize) -> Result<f64> {
    let m = n.max(2 * q) as f64;
    Ok(2.0 * m.powi(q as i32) / (gamma_half(q) * gamma_half(q + 2) * sphere_area(q - 1)?))
}

/// `C_q (n + q²) / ω_{q-1}` with `C_q = 3^{q/2} π + 2q + 2`.
pub fn deriv_bound(q: usize, n: usize) -> Result<f64> {
    let c = 3f64.powf(q as f64 / 2.0) * std::f64::consts::PI + 2.0 * q as f64 + 2.0;
    Ok(c * (n + q * q) as f64 / sphere_area(q - 1)?)
}

fn sign_change_breaks<F: Fn(f64) -> f64>(panels: usize, f: F) -> Vec<f64> {
    bracket_roots(0.0, std::f64::consts::PI, 8 * panels, f)
}

/// `∫_{-1}^{1} |v_n(t)| (1-t²)^{q/2-1} dt`, computed as
/// `∫_0^π |v_n(cos τ)| sin(τ)^{q-1} dτ` with the sign changes of `v_n`
/// inserted as panel breakpoints.
pub fn kernel_l1(q: usize, n: usize, panels: usize) -> Result<Estimate> {
    let k = DlvpKernel::new(q, n)?;
    let panels = panels.max(8 * n).max(8);
    let roots = sign_change_breaks(panels, |tau| k.eval(tau.cos()));
    let p = q as i32 - 1;
    Ok(doubling_integral(0.0, std::f64::consts::PI, panels, MAX_PANELS, DOUBLING_TOL, &roots, |tau| {
        k.eval(tau.cos()).abs() * tau.sin().powi(p)
    }))
}

/// `max |v_n|` over `grid` Chebyshev–Lobatto abscissae (endpoints included).
pub fn kernel_sup(q: usize, n: usize, grid: usize) -> Result<f64> {
    let k = DlvpKernel::new(q, n)?;
    let grid = grid.max(8 * n + 64);
    let step = std::f64::consts::PI / (grid - 1) as f64;
    Ok((0..grid)
        .map(|j| k.eval((j as f64 * step).cos()).abs())
        .fold(0.0, f64::max))
}

/// `∫_0^π |v_n'(cos τ) sin(τ)^q| dτ` with sign changes of `v_n'` as breakpoints.
pub fn kernel_deriv_integral(q: usize, n: usize, panels: usize) -> Result<Estimate> {
    let k = DlvpKernel::new(q, n)?;
    if n == 0 {
        return Ok(Estimate { value: 0.0, error: 0.0, panels: 0 });
    }
    let panels = panels.max(8 * n).max(8);
    let roots = sign_change_breaks(panels, |tau| k.deriv(tau.cos()));
    let p = q as i32;
    Ok(doubling_integral(0.0, std::f64::consts::PI, panels, MAX_PANELS, DOUBLING_TOL, &roots, |tau| {
        (k.deriv(tau.cos()) * tau.sin().powi(p)).abs()
    }))
}

/// Relative slack allowed when comparing a computed value to its bound.
pub const BOUND_SLACK: f64 = 1e-6;

/// Outcome of the three kernel inequalities for one `(q, n)`.
#[derive(Debug, Clone, Serialize)]
pub struct KernelBoundReport {
    pub q: usize,
    pub n: usize,
    pub l1: f64,
    pub l1_error: f64,
    pub l1_bound: f64,
    pub sup: f64,
    pub sup_bound: f64,
    pub deriv_integral: f64,
    pub deriv_error: f64,
    pub deriv_bound: f64,
    pub holds: bool,
}

pub fn check_kernel_bounds(q: usize, n: usize) -> Result<KernelBoundReport> {
    let l1 = kernel_l1(q, n, 8 * n)?;
    let sup = kernel_sup(q, n, 8 * n + 64)?;
    let deriv = kernel_deriv_integral(q, n, 8 * n)?;
    let l1_bound = l1_bound(q)?;
    let sup_bound = sup_bound(q, n)?;
    let deriv_bound = deriv_bound(q, n)?;
    let within = |v: f64, b: f64| v <= b * (1.0 + BOUND_SLACK);
    let holds = within(l1.value, l1_bound) && within(sup, sup_bound) && within(deriv.value, deriv_bound);
    Ok(KernelBoundReport {
        q,
        n,
        l1: l1.value,
        l1_error: l1.error,
        l1_bound,
        sup,
        sup_bound,
        deriv_integral: deriv.value,
        deriv_error: deriv.error,
        deriv_bound,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_kernel_values() {
        let l1 = kernel_l1(2, 0, 4).unwrap();
        assert!((l1.value - 1.0 / (2.0 * PI)).abs() < 1e-14);
        assert!((kernel_sup(2, 0, 64).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert_eq!(kernel_deriv_integral(2, 0, 8).unwrap().value, 0.0);
    }

    #[test]
    fn bound_constants() {
        assert!((sup_bound(2, 16).unwrap() - 256.0 / PI).abs() < 1e-12);
        assert!((l1_bound(2).unwrap() - 3.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((deriv_bound(2, 8).unwrap() - (3.0 * PI + 6.0) * 12.0 / (2.0 * PI)).abs() < 1e-12);
        let expect = 2.0 * 216.0 / (gamma_half(3) * gamma_half(5) * 4.0 * PI);
        assert!((sup_bound(3, 4).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn spec_bound_examples_hold() {
        assert!(kernel_l1(2, 16, 64).unwrap().value <= 3.0 / (2.0 * PI));
        assert!(kernel_l1(3, 8, 32).unwrap().value <= l1_bound(3).unwrap());
        assert!(kernel_sup(2, 16, 192).unwrap() <= 256.0 / PI);
        assert!(kernel_deriv_integral(2, 8, 64).unwrap().value <= deriv_bound(2, 8).unwrap());
        assert!(kernel_deriv_integral(4, 8, 64).unwrap().value <= deriv_bound(4, 8).unwrap());
    }

    #[test]
    fn l1_estimate_is_converged() {
        let est = kernel_l1(3, 8, 64).unwrap();
        assert!(est.error < 1e-8, "{est:?}");
    }
}
