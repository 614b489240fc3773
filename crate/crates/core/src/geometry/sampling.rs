use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::point::PointSet;
use crate::rng::{label, substream};

/// Draws one point uniformly from `S^q` by normalizing a Gaussian vector.
pub fn gaussian_direction<R: Rng + ?Sized>(q: usize, rng: &mut R, out: &mut [f64]) {
    debug_assert_eq!(out.len(), q + 1);
    loop {
        let mut norm2 = 0.0;
        for c in out.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *c = g;
            norm2 += g * g;
        }
        if norm2 > 1e-300 {
            let inv = 1.0 / norm2.sqrt();
            out.iter_mut().for_each(|c| *c *= inv);
            return;
        }
    }
}

/// `count` i.i.d. uniform points on `S^q`. Point `i` comes from its own
/// substream `(seed, SAMPLE, i)`, so the output does not depend on how the
/// work is scheduled.
pub fn sample_uniform(q: usize, count: usize, seed: u64) -> PointSet {
    let dim = q + 1;
    let mut data = vec![0.0; count * dim];
    data.par_chunks_mut(dim).enumerate().for_each(|(i, row)| {
        let mut rng = substream(seed, &[label::SAMPLE, i as u64]);
        gaussian_direction(q, &mut rng, row);
    });
    PointSet::from_raw(q, data)
}
