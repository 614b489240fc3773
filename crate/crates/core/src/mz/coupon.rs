use rand::Rng;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::gram::{check_open_unit, next_integer_above};
use crate::rng::{label, substream};

/// `M (1 - 1/M)^t`: union bound on the probability that `t` uniform draws
/// from `M` types miss at least one type.
pub fn coupon_failure_bound(m: u64, t: u64) -> Result<f64> {
    if m == 0 {
        return Err(domain("M must be at least 1"));
    }
    let mf = m as f64;
    Ok(mf * (t as f64 * (-1.0 / mf).ln_1p()).exp())
}

/// Smallest `t` with `t > M log(M/ε)`.
pub fn coupon_budget(m: u64, eps: f64) -> Result<u64> {
    if m == 0 {
        return Err(domain("M must be at least 1"));
    }
    check_open_unit("eps", eps)?;
    let mf = m as f64;
    next_integer_above(mf * (mf / eps).ln(), "coupon budget")
}

/// Whether `t` draws on `rng` cover all `m` types.
pub fn draws_cover<R: Rng + ?Sized>(m: usize, t: u64, rng: &mut R) -> bool {
    let mut seen = vec![false; m];
    let mut missing = m;
    for _ in 0..t {
        let k = rng.random_range(0..m);
        if !seen[k] {
            seen[k] = true;
            missing -= 1;
            if missing == 0 {
                return true;
            }
        }
    }
    missing == 0
}

/// Fraction of `reps` experiments in which `t` draws miss some type.
/// Repetition `r` uses substream `(seed, COUPON, r)`.
pub fn coupon_simulate(m: u64, t: u64, reps: u64, seed: u64) -> Result<f64> {
    if m == 0 || reps == 0 {
        return Err(domain("M and reps must be at least 1"));
    }
    let m = usize::try_from(m).map_err(|_| domain("M too large"))?;
    let failures: u64 = (0..reps)
        .into_par_iter()
        .map(|r| !draws_cover(m, t, &mut substream(seed, &[label::COUPON, r])) as u64)
        .sum();
    Ok(failures as f64 / reps as f64)
}
