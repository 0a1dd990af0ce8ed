use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of a finite-dimensional real vector space.
///
/// Coordinates are always finite and there is at least one of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite(coords));
        }
        Ok(Point(coords))
    }

    /// One-dimensional point. Panics on a non-finite value.
    pub fn scalar(x: f64) -> Self {
        Point::new(vec![x]).expect("finite scalar")
    }

    /// Builds a point from literal coordinates. Panics on invalid input.
    pub fn from_slice(coords: &[f64]) -> Self {
        Point::new(coords.to_vec()).expect("valid point literal")
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// Coordinate-wise `self - other`.
    pub fn sub(&self, other: &Point) -> Vec<f64> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Uniform tensor grid over the box `[lower, upper]`, `per_axis` points per
/// axis, first coordinate varying slowest.
pub fn grid_points(lower: &[f64], upper: &[f64], per_axis: usize) -> Result<Vec<Point>> {
    if lower.len() != upper.len() {
        return Err(Error::DimensionMismatch {
            expected: lower.len(),
            found: upper.len(),
        });
    }
    if lower.is_empty() {
        return Err(Error::EmptyPoint);
    }
    if per_axis == 0 {
        return Err(Error::EmptySample);
    }
    for (lo, hi) in lower.iter().zip(upper) {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidArgument(format!(
                "grid bounds [{lo}, {hi}] are not an interval"
            )));
        }
    }
    let axis = |k: usize, i: usize| -> f64 {
        if per_axis == 1 {
            lower[k]
        } else if i + 1 == per_axis {
            upper[k]
        } else {
            lower[k] + (upper[k] - lower[k]) * (i as f64) / ((per_axis - 1) as f64)
        }
    };
    let dim = lower.len();
    let total = per_axis.pow(dim as u32);
    let mut out = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut coords = vec![0.0; dim];
        for k in (0..dim).rev() {
            coords[k] = axis(k, rem % per_axis);
            rem /= per_axis;
        }
        out.push(Point(coords));
    }
    Ok(out)
}
