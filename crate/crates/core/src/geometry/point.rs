use serde::Serialize;

use crate::error::{domain, MzError, Result};

/// A unit vector in `R^{q+1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Normalizes `coords` onto the sphere. Needs at least two coordinates
    /// and a nonzero norm.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(domain("a sphere point needs at least two coordinates"));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(domain("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self { coords: coords.into_iter().map(|c| c / norm).collect() })
    }

    /// The pole `(0, …, 0, 1)` of `S^q`.
    pub fn north_pole(q: usize) -> Self {
        Self::axis(q, q)
    }

    /// The standard basis vector `e_i` of `R^{q+1}`.
    pub fn axis(q: usize, i: usize) -> Self {
        let mut coords = vec![0.0; q + 1];
        coords[i] = 1.0;
        Self { coords }
    }

    pub fn q(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn antipode(&self) -> Self {
        Self { coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn dot(&self, other: &SpherePoint) -> Result<f64> {
        if self.q() != other.q() {
            return Err(MzError::DimensionMismatch { expected: self.q(), found: other.q() });
        }
        Ok(dot(&self.coords, &other.coords))
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Geodesic distance `arccos(x·y)`, clamped into `[0, π]`.
pub fn geodesic(x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    Ok(x.dot(y)?.clamp(-1.0, 1.0).acos())
}

#[inline]
pub(crate) fn geodesic_raw(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

/// A finite set of points on `S^q`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    q: usize,
    data: Vec<f64>,
}

impl PointSet {
    pub fn new(q: usize) -> Self {
        Self { q, data: Vec::new() }
    }

    /// Takes ownership of row-major unit vectors without renormalizing.
    pub(crate) fn from_raw(q: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len() % (q + 1), 0);
        Self { q, data }
    }

    pub fn from_points(q: usize, points: &[SpherePoint]) -> Result<Self> {
        let mut set = Self::new(q);
        for p in points {
            set.push(p)?;
        }
        Ok(set)
    }

    /// Builds a set from raw rows, normalizing each.
    pub fn from_rows(q: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut set = Self::new(q);
        for r in rows {
            if r.len() != q + 1 {
                return Err(MzError::DimensionMismatch { expected: q, found: r.len().saturating_sub(1) });
            }
            set.push(&SpherePoint::new(r.clone())?)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, p: &SpherePoint) -> Result<()> {
        if p.q() != self.q {
            return Err(MzError::DimensionMismatch { expected: self.q, found: p.q() });
        }
        self.data.extend_from_slice(p.coords());
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.q + 1
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.data[i * d..(i + 1) * d]
    }

    pub fn point(&self, i: usize) -> SpherePoint {
        SpherePoint { coords: self.row(i).to_vec() }
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim())
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// The subset at the given indices, in order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.dim());
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self { q: self.q, data }
    }
}
