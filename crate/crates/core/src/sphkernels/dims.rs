//! Dimensions of harmonic and polynomial spaces, surface areas and the
//! half-integer gamma values they depend on.

use std::f64::consts::PI;

use crate::error::{domain, MzError, Result};

fn check_q(q: usize) -> Result<()> {
    if q < 2 {
        return Err(domain(format!("sphere dimension q must be at least 2, got {q}")));
    }
    Ok(())
}

/// Binomial coefficient in exact product form; every partial product is an
/// integer so the division is exact.
fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Dimension `h_q(ℓ) = (2ℓ+q-1)(ℓ+q-2)! / (ℓ!(q-1)!)` of degree-ℓ spherical
/// harmonics on `S^q`.
pub fn harmonic_dim(q: usize, l: usize) -> Result<u64> {
    check_q(q)?;
    if l == 0 {
        return Ok(1);
    }
    let (q, l) = (q as u128, l as u128);
    let c = binomial(l + q - 2, l).ok_or(MzError::Overflow("harmonic_dim"))?;
    let h = c
        .checked_mul(2 * l + q - 1)
        .ok_or(MzError::Overflow("harmonic_dim"))?
        / (q - 1);
    u64::try_from(h).map_err(|_| MzError::Overflow("harmonic_dim"))
}

/// Dimension `d_q(n) = Σ_{ℓ≤n} h_q(ℓ)` of `Π_n^q`.
pub fn poly_space_dim(q: usize, n: usize) -> Result<u64> {
    (0..=n).try_fold(0u64, |acc, l| {
        acc.checked_add(harmonic_dim(q, l)?)
            .ok_or(MzError::Overflow("poly_space_dim"))
    })
}

/// Surface area `ω_q = 2π^{(q+1)/2} / Γ((q+1)/2)` of `S^q`, evaluated with
/// the recursion `ω_q = 2π ω_{q-2} / (q-1)` from `ω_0 = 2`, `ω_1 = 2π`.
pub fn sphere_area(q: usize) -> Result<f64> {
    if q < 1 {
        return Err(domain("surface area requires q >= 1"));
    }
    let mut w = if q.is_multiple_of(2) { 2.0 } else { 2.0 * PI };
    let mut k = if q.is_multiple_of(2) { 0 } else { 1 };
    while k < q {
        k += 2;
        w *= 2.0 * PI / (k - 1) as f64;
    }
    Ok(w)
}

/// `Γ(k/2)` for a positive integer `k`.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k > 0, "gamma_half requires k >= 1");
    let (mut g, mut x) = if k.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = k as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Squared weighted norm `∫ R_n² w_q dt = ω_q / (ω_{q-1} h_q(n))`.
pub fn ultraspherical_norm_sq(q: usize, n: usize) -> Result<f64> {
    let h = harmonic_dim(q, n)? as f64;
    Ok(sphere_area(q)? / (sphere_area(q - 1)? * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_dims() {
        assert_eq!(harmonic_dim(2, 0).unwrap(), 1);
        assert_eq!(harmonic_dim(2, 5).unwrap(), 11);
        assert_eq!(harmonic_dim(3, 2).unwrap(), 9);
        for l in 0..40 {
            assert_eq!(harmonic_dim(2, l).unwrap(), 2 * l as u64 + 1);
            assert_eq!(harmonic_dim(3, l).unwrap(), (l as u64 + 1).pow(2));
        }
        // q = 4: (ℓ+1)(ℓ+2)(2ℓ+3)/6
        for l in 0..30u64 {
            assert_eq!(harmonic_dim(4, l as usize).unwrap(), (l + 1) * (l + 2) * (2 * l + 3) / 6);
        }
        assert!(harmonic_dim(1, 3).is_err());
        assert!(harmonic_dim(0, 0).is_err());
    }

    #[test]
    fn no_overflow_in_documented_range() {
        for q in 2..=58 {
            for l in 0..=(60 - q) {
                harmonic_dim(q, l).unwrap();
            }
        }
    }

    #[test]
    fn poly_dims() {
        assert_eq!(poly_space_dim(2, 8).unwrap(), 81);
        assert_eq!(poly_space_dim(2, 0).unwrap(), 1);
        assert_eq!(poly_space_dim(3, 2).unwrap(), 14);
        assert_eq!(poly_space_dim(2, 50).unwrap(), 2601);
    }

    #[test]
    fn areas() {
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(sphere_area(1).unwrap(), 2.0 * PI) < 1e-15);
        assert!(rel(sphere_area(2).unwrap(), 4.0 * PI) < 1e-15);
        assert!(rel(sphere_area(3).unwrap(), 2.0 * PI * PI) < 1e-15);
        assert!(rel(sphere_area(4).unwrap(), 8.0 * PI * PI / 3.0) < 1e-15);
        assert!(sphere_area(0).is_err());
        // against the gamma closed form
        for q in 1..12 {
            let closed = 2.0 * PI.powf((q as f64 + 1.0) / 2.0) / gamma_half(q + 1);
            assert!(rel(sphere_area(q).unwrap(), closed) < 1e-14);
        }
    }

    #[test]
    fn gamma_half_values() {
        assert_eq!(gamma_half(2), 1.0);
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(3) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half(8), 6.0);
    }

    #[test]
    fn norms() {
        for n in 0..20 {
            let got = ultraspherical_norm_sq(2, n).unwrap();
            assert!((got - 2.0 / (2.0 * n as f64 + 1.0)).abs() < 1e-15);
        }
        assert!((ultraspherical_norm_sq(3, 1).unwrap() - PI / 8.0).abs() < 1e-15);
    }
}
