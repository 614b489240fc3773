//! Recursive zonal equal-area partitions of `S^q`, `q ≤ 4`.
//!
//! The layout is the classical cap, collars, cap scheme: a polar cap whose
//! area is one ideal region, collars of near-equal colatitude extent, and
//! per-collar region counts rounded with carried discrepancy so that every
//! region keeps the exact area `ω_q / M`. Each collar cross-section is a
//! partition of `S^{q-1}` built the same way.
//!
//! Angular coordinates use the last Cartesian axis as the polar axis:
//! `x_q = cos θ`, and `x[..q] / sin θ` is the point of the cross-section.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::point::{PointSet, SpherePoint};
use super::sampling::gaussian_direction;
use crate::error::{domain, MzError, Result};
use crate::rng::{label, substream};

/// Largest sphere dimension with closed-form cap areas.
pub const MAX_PARTITION_DIM: usize = 4;

const TWO_PI: f64 = 2.0 * PI;

fn area(dim: usize) -> f64 {
    match dim {
        0 => 2.0,
        1 => TWO_PI,
        2 => 4.0 * PI,
        3 => 2.0 * PI * PI,
        4 => 8.0 * PI * PI / 3.0,
        _ => unreachable!("dimension checked at construction"),
    }
}

/// Area of the polar cap `{θ ≤ s}` on `S^dim`.
pub fn cap_area(dim: usize, s: f64) -> f64 {
    let s = s.clamp(0.0, PI);
    // h = sin²(s/2) keeps 1 - cos s accurate for small caps
    let h = (s / 2.0).sin().powi(2);
    match dim {
        1 => 2.0 * s,
        2 => 4.0 * PI * h,
        3 => PI * (2.0 * s - (2.0 * s).sin()),
        4 => 2.0 * PI * PI * 4.0 * h * h * (3.0 - 2.0 * h) / 3.0,
        _ => unreachable!("dimension checked at construction"),
    }
}

/// Inverse of [`cap_area`] in `s ∈ [0, π]`.
pub fn cap_radius(dim: usize, a: f64) -> f64 {
    let total = area(dim);
    if a <= 0.0 {
        return 0.0;
    }
    if a >= total {
        return PI;
    }
    match dim {
        1 => a / 2.0,
        2 => 2.0 * (a / total).sqrt().asin(),
        _ => {
            let (mut lo, mut hi) = (0.0, PI);
            let mut s = PI * a / total;
            let lateral = area(dim - 1);
            for _ in 0..200 {
                let f = cap_area(dim, s) - a;
                if f > 0.0 {
                    hi = s;
                } else {
                    lo = s;
                }
                let df = lateral * s.sin().powi(dim as i32 - 1);
                let newton = if df > 0.0 { s - f / df } else { f64::NAN };
                let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
                if (next - s).abs() <= 1e-16 * PI || hi - lo <= 1e-16 {
                    return next;
                }
                s = next;
            }
            s
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Whole,
    /// `S^1` cut into `n` equal arcs starting at azimuth 0.
    Arcs(usize),
    Zonal(Box<Zonal>),
}

#[derive(Debug, Clone)]
struct Zonal {
    dim: usize,
    /// Colatitude band edges, `0 = edges[0] < … < edges[B] = π`.
    edges: Vec<f64>,
    /// Prefix sums of region counts per band.
    offsets: Vec<usize>,
    subs: Vec<Node>,
}

fn build(dim: usize, n: usize) -> Node {
    if n == 1 {
        Node::Whole
    } else if dim == 1 {
        Node::Arcs(n)
    } else {
        Node::Zonal(Box::new(build_zonal(dim, n)))
    }
}

fn round_to_naturals(ideal: &[f64]) -> Vec<usize> {
    let mut discrepancy = 0.0;
    ideal
        .iter()
        .map(|&r| {
            let k = (r + discrepancy).round().max(0.0);
            discrepancy += r - k;
            k as usize
        })
        .collect()
}

fn build_zonal(dim: usize, n: usize) -> Zonal {
    let ideal = area(dim) / n as f64;
    let polar = if n == 2 { PI / 2.0 } else { cap_radius(dim, ideal) };
    let collars = if n > 2 {
        let angle = ideal.powf(1.0 / dim as f64);
        (((PI - 2.0 * polar) / angle).round() as usize).max(1)
    } else {
        0
    };
    let mut ideal_counts = vec![1.0];
    if collars > 0 {
        let fitting = (PI - 2.0 * polar) / collars as f64;
        for k in 0..collars {
            let lo = polar + k as f64 * fitting;
            ideal_counts.push((cap_area(dim, lo + fitting) - cap_area(dim, lo)) / ideal);
        }
    }
    ideal_counts.push(1.0);
    let mut counts = round_to_naturals(&ideal_counts);
    let total: usize = counts.iter().sum();
    if total != n && collars > 0 {
        // rounding drift; absorb it in the widest collar
        let k = (1..=collars).max_by_key(|&k| counts[k]).unwrap();
        counts[k] = (counts[k] + n).saturating_sub(total);
    }
    counts.retain(|&c| c > 0);

    let mut edges = vec![0.0];
    let mut offsets = vec![0];
    let mut subtotal = 0;
    for (b, &c) in counts.iter().enumerate() {
        subtotal += c;
        offsets.push(subtotal);
        edges.push(if b + 1 == counts.len() { PI } else { cap_radius(dim, subtotal as f64 * ideal) });
    }
    let subs = counts.iter().map(|&c| build(dim - 1, c)).collect();
    Zonal { dim, edges, offsets, subs }
}

fn max_sin(lo: f64, hi: f64) -> f64 {
    if lo <= PI / 2.0 && hi >= PI / 2.0 {
        1.0
    } else {
        lo.sin().max(hi.sin())
    }
}

impl Zonal {
    fn band_of_patch(&self, j: usize) -> usize {
        self.offsets.partition_point(|&o| o <= j) - 1
    }

    fn band_of_colat(&self, theta: f64) -> usize {
        self.edges[1..].partition_point(|&e| e < theta).min(self.subs.len() - 1)
    }

    fn band_diameter(&self, b: usize, sub_diameter: f64) -> f64 {
        let (lo, hi) = (self.edges[b], self.edges[b + 1]);
        let bound = match self.subs[b] {
            Node::Whole if lo == 0.0 => 2.0 * hi,
            Node::Whole if hi == PI => 2.0 * (PI - lo),
            _ => (hi - lo) + max_sin(lo, hi) * sub_diameter,
        };
        bound.min(PI)
    }
}

/// Splits `x ∈ S^dim` into colatitude and unit cross-section in `S^{dim-1}`.
fn split(x: &[f64], dim: usize, cross: &mut [f64]) -> f64 {
    let r = x[..dim].iter().map(|c| c * c).sum::<f64>().sqrt();
    let theta = r.atan2(x[dim]);
    if r > 0.0 {
        for (c, v) in cross.iter_mut().zip(&x[..dim]) {
            *c = v / r;
        }
    } else {
        cross.iter_mut().for_each(|c| *c = 0.0);
        cross[dim - 1] = 1.0;
    }
    theta
}

fn azimuth(x: &[f64]) -> f64 {
    let phi = x[1].atan2(x[0]);
    if phi < 0.0 {
        phi + TWO_PI
    } else {
        phi
    }
}

impl Node {
    fn index(&self, x: &[f64]) -> usize {
        match self {
            Node::Whole => 0,
            Node::Arcs(n) => {
                let k = (azimuth(x) * *n as f64 / TWO_PI).ceil() as isize - 1;
                k.clamp(0, *n as isize - 1) as usize
            }
            Node::Zonal(z) => {
                let mut cross = [0.0; MAX_PARTITION_DIM];
                let theta = split(x, z.dim, &mut cross[..z.dim]);
                let b = z.band_of_colat(theta);
                z.offsets[b] + z.subs[b].index(&cross[..z.dim])
            }
        }
    }

    fn max_diameter(&self) -> f64 {
        match self {
            Node::Whole => PI,
            Node::Arcs(n) => (TWO_PI / *n as f64).min(PI),
            Node::Zonal(z) => (0..z.subs.len())
                .map(|b| z.band_diameter(b, z.subs[b].max_diameter()))
                .fold(0.0, f64::max),
        }
    }

    /// Walks to patch `j`, filling bands, area, diameter and center.
    fn describe(&self, dim: usize, j: usize, bands: &mut Vec<[f64; 2]>) -> (f64, f64, Vec<f64>) {
        match self {
            Node::Whole => {
                for d in (1..=dim).rev() {
                    bands.push(if d == 1 { [0.0, TWO_PI] } else { [0.0, PI] });
                }
                let mut center = vec![0.0; dim + 1];
                center[dim] = 1.0;
                (area(dim), PI, center)
            }
            Node::Arcs(n) => {
                let w = TWO_PI / *n as f64;
                bands.push([j as f64 * w, (j + 1) as f64 * w]);
                let phi = (j as f64 + 0.5) * w;
                (w, w.min(PI), vec![phi.cos(), phi.sin()])
            }
            Node::Zonal(z) => {
                let b = z.band_of_patch(j);
                let (lo, hi) = (z.edges[b], z.edges[b + 1]);
                bands.push([lo, hi]);
                let (sub_area, sub_diam, sub_center) = z.subs[b].describe(dim - 1, j - z.offsets[b], bands);
                let a = (cap_area(dim, hi) - cap_area(dim, lo)) * sub_area / area(dim - 1);
                let center = if matches!(z.subs[b], Node::Whole) && (lo == 0.0 || hi == PI) {
                    let mut c = vec![0.0; dim + 1];
                    c[dim] = if lo == 0.0 { 1.0 } else { -1.0 };
                    c
                } else {
                    let t = 0.5 * (lo + hi);
                    let mut c: Vec<f64> = sub_center.iter().map(|v| v * t.sin()).collect();
                    c.push(t.cos());
                    c
                };
                (a, z.band_diameter(b, sub_diam), center)
            }
        }
    }

    fn sample_in<R: Rng + ?Sized>(&self, dim: usize, j: usize, rng: &mut R, out: &mut [f64]) {
        match self {
            Node::Whole => gaussian_direction(dim, rng, out),
            Node::Arcs(n) => {
                let w = TWO_PI / *n as f64;
                let phi = (j as f64 + rng.random::<f64>()) * w;
                out[0] = phi.cos();
                out[1] = phi.sin();
            }
            Node::Zonal(z) => {
                let b = z.band_of_patch(j);
                let (a0, a1) = (cap_area(dim, z.edges[b]), cap_area(dim, z.edges[b + 1]));
                let theta = cap_radius(dim, a0 + rng.random::<f64>() * (a1 - a0));
                z.subs[b].sample_in(dim - 1, j - z.offsets[b], rng, &mut out[..dim]);
                let s = theta.sin();
                out[..dim].iter_mut().for_each(|c| *c *= s);
                out[dim] = theta.cos();
            }
        }
    }
}

/// One region of an [`EqualAreaPartition`].
#[derive(Debug, Clone, Serialize)]
pub struct Patch {
    pub index: usize,
    /// Inclusive angular bands, outermost colatitude first, azimuth last.
    pub bands: Vec<[f64; 2]>,
    pub area: f64,
    pub diameter_bound: f64,
    pub center: Vec<f64>,
}

/// Angular coordinates matching [`Patch::bands`].
pub fn angular_coords(x: &[f64]) -> Vec<f64> {
    let dim = x.len() - 1;
    let mut out = Vec::with_capacity(dim);
    let mut cur = x.to_vec();
    for d in (2..=dim).rev() {
        let mut cross = vec![0.0; d];
        out.push(split(&cur, d, &mut cross));
        cur = cross;
    }
    out.push(azimuth(&cur));
    out
}

impl Patch {
    /// Band inequalities with an absolute slack `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        angular_coords(x)
            .iter()
            .zip(&self.bands)
            .all(|(&a, &[lo, hi])| a >= lo - tol && a <= hi + tol)
    }
}

#[derive(Debug, Clone)]
pub struct EqualAreaPartition {
    q: usize,
    m: usize,
    root: Node,
}

impl EqualAreaPartition {
    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of patches `M`.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// `ω_q / M`.
    pub fn area_each(&self) -> f64 {
        area(self.q) / self.m as f64
    }

    pub fn patch_index(&self, x: &SpherePoint) -> Result<usize> {
        if x.q() != self.q {
            return Err(MzError::DimensionMismatch { expected: self.q, found: x.q() });
        }
        Ok(self.root.index(x.coords()))
    }

    /// [`Self::patch_index`] on a raw unit vector of length `q + 1`.
    pub fn index_of(&self, x: &[f64]) -> usize {
        debug_assert_eq!(x.len(), self.q + 1);
        self.root.index(x)
    }

    pub fn patch(&self, j: usize) -> Patch {
        assert!(j < self.m, "patch index {j} out of range");
        let mut bands = Vec::with_capacity(self.q);
        let (area, diameter_bound, center) = self.root.describe(self.q, j, &mut bands);
        Patch { index: j, bands, area, diameter_bound, center }
    }

    pub fn patches(&self) -> impl Iterator<Item = Patch> + '_ {
        (0..self.m).map(|j| self.patch(j))
    }

    /// Certified upper bound on the largest patch diameter.
    pub fn partition_norm_bound(&self) -> f64 {
        self.root.max_diameter()
    }

    pub fn centers(&self) -> PointSet {
        let mut data = Vec::with_capacity(self.m * (self.q + 1));
        for j in 0..self.m {
            let mut bands = Vec::new();
            data.extend(self.root.describe(self.q, j, &mut bands).2);
        }
        PointSet::from_raw(self.q, data)
    }

    /// A point drawn uniformly from patch `j`; interior with probability one.
    pub fn sample_in_patch<R: Rng + ?Sized>(&self, j: usize, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.q + 1];
        self.root.sample_in(self.q, j, rng, &mut out);
        out
    }

    /// One uniform point per patch; patch `j` draws from substream
    /// `(seed, INTERIOR, j)`.
    pub fn interior_points(&self, seed: u64) -> PointSet {
        let data: Vec<f64> = (0..self.m)
            .into_par_iter()
            .flat_map_iter(|j| self.sample_in_patch(j, &mut substream(seed, &[label::INTERIOR, j as u64])))
            .collect();
        PointSet::from_raw(self.q, data)
    }
}

/// Equal-area partition of `S^q` into `m` patches, `1 ≤ q ≤ 4`.
pub fn equal_area_partition(q: usize, m: usize) -> Result<EqualAreaPartition> {
    if q == 0 || q > MAX_PARTITION_DIM {
        return Err(MzError::UnsupportedDimension { q, reason: "partitions are built for 1 ≤ q ≤ 4" });
    }
    if m == 0 {
        return Err(domain("a partition needs at least one patch"));
    }
    Ok(EqualAreaPartition { q, m, root: build(q, m) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_area_inverts() {
        for dim in 1..=4 {
            for &s in &[1e-4, 0.3, 1.0, 2.0, 3.1] {
                let a = cap_area(dim, s);
                assert!((cap_radius(dim, a) - s).abs() < 1e-10, "dim {dim} s {s}");
            }
            assert!((cap_area(dim, PI) - area(dim)).abs() < 1e-12 * area(dim));
        }
    }

    #[test]
    fn hemispheres() {
        let p = equal_area_partition(2, 2).unwrap();
        assert_eq!(p.patch_index(&SpherePoint::north_pole(2)).unwrap(), 0);
        assert_eq!(p.patch_index(&SpherePoint::north_pole(2).antipode()).unwrap(), 1);
        // equator belongs to both; ties go low
        assert_eq!(p.patch_index(&SpherePoint::axis(2, 0)).unwrap(), 0);
        assert_eq!(p.partition_norm_bound(), PI);
        assert!((p.patch(0).area - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn arc_ties_go_low() {
        let p = equal_area_partition(1, 4).unwrap();
        assert_eq!(p.index_of(&[1.0, 0.0]), 0);
        assert_eq!(p.index_of(&[0.0, 1.0]), 0);
        assert_eq!(p.index_of(&[-1.0, 1e-300]), 1);
        assert_eq!(p.index_of(&[0.0, -1.0]), 2);
    }

    #[test]
    fn centers_and_samples_lie_in_their_patch() {
        for &(q, m) in &[(2, 37), (3, 60), (4, 25)] {
            let p = equal_area_partition(q, m).unwrap();
            let mut rng = substream(1, &[q as u64]);
            for j in 0..m {
                let patch = p.patch(j);
                assert!(patch.contains(&patch.center, 1e-12), "q {q} center {j}");
                let x = p.sample_in_patch(j, &mut rng);
                assert_eq!(p.index_of(&x), j);
                assert!((x.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_large_dimension() {
        assert!(matches!(equal_area_partition(5, 10), Err(MzError::UnsupportedDimension { .. })));
    }
}
