use crate::error::{domain, MzError, Result};
use crate::sphkernels::poly_space_dim;

pub(crate) fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(domain(format!("{name} must lie in (0, 1), got {v}")));
    }
    Ok(())
}

/// Smallest integer strictly above `x`.
pub(crate) fn next_integer_above(x: f64, what: &'static str) -> Result<u64> {
    if !x.is_finite() || x >= u64::MAX as f64 {
        return Err(MzError::Overflow(what));
    }
    Ok(x.max(-1.0).floor() as u64 + 1)
}

/// `log(2d/ε) · 3d / η²` for a space of dimension `d`.
pub fn tropp_threshold(d: f64, eta: f64, eps: f64) -> f64 {
    (2.0 * d / eps).ln() * 3.0 * d / (eta * eta)
}

/// Number of i.i.d. uniform points that makes `(1/N) L*L` have its
/// spectrum in `[1-η, 1+η]` with probability above `1-ε`.
pub fn budget_tropp(n: usize, q: usize, eta: f64, eps: f64) -> Result<u64> {
    check_open_unit("eta", eta)?;
    check_open_unit("eps", eps)?;
    let d = poly_space_dim(q, n)? as f64;
    next_integer_above(tropp_threshold(d, eta, eps), "tropp budget")
}

/// [`budget_tropp`] for `|P|^p = |P^{p/2}|²` with even `p`: uses `d_q(np/2)`.
pub fn budget_even_p(n: usize, q: usize, p: usize, eta: f64, eps: f64) -> Result<u64> {
    if p < 2 || !p.is_multiple_of(2) {
        return Err(domain(format!("p must be an even integer >= 2, got {p}")));
    }
    budget_tropp(n * p / 2, q, eta, eps)
}
