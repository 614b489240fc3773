use serde::Serialize;

/// Arithmetic mean, summed in slice order.
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

/// Linear-interpolation quantile of the sorted sample (Hyndman–Fan type 7).
pub fn quantile(values: &[f64], p: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Mean and 1% / 99% quantiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub q01: f64,
    pub mean: f64,
    pub q99: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        Self { q01: quantile(values, 0.01), mean: mean(values), q99: quantile(values, 0.99) }
    }
}
