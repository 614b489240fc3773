use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::sphkernels::sphere_area;

/// Dimension-dependent constants of the MZ statements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Diameter constant `α_q = 8 (ω_q q / ω_{q-1})^{1/q}` of equal-area partitions.
    pub alpha: f64,
    /// `2 (3 + 3^{q/2} π)`, used in every MZ precondition and budget.
    pub c_thm: f64,
    /// `3^{q/2} π + 2q + 2`, used only in the kernel derivative bound.
    pub c_lem: f64,
}

pub fn constants(q: usize) -> Result<Constants> {
    if q < 2 {
        return Err(domain(format!("constants need q >= 2, got {q}")));
    }
    let qf = q as f64;
    let root3 = 3f64.powf(qf / 2.0);
    Ok(Constants {
        alpha: 8.0 * (sphere_area(q)? * qf / sphere_area(q - 1)?).powf(1.0 / qf),
        c_thm: 2.0 * (3.0 + root3 * PI),
        c_lem: root3 * PI + 2.0 * qf + 2.0,
    })
}
