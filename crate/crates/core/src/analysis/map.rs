use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::Point;

/// A map of `R^n` (or of a finite point list) into itself.
pub trait SelfMap: Sync {
    fn dim(&self) -> usize;

    /// Image of `x`. A non-finite image is reported as [`Error::NonFinite`].
    fn apply(&self, x: &Point) -> Result<Point>;
}

/// Declarative self-map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDescriptor {
    /// `x ↦ factor · x` on the line.
    Scale { factor: f64 },
    /// `x ↦ A x + b`.
    Affine {
        matrix: Vec<Vec<f64>>,
        offset: Vec<f64>,
    },
    /// `x ↦ c_0 + c_1 x + c_2 x² + …` on the line.
    ScalarPoly { coefficients: Vec<f64> },
    /// `points[i] ↦ images[i]`; every image must itself be listed.
    FiniteTable {
        points: Vec<Point>,
        images: Vec<Point>,
    },
}

impl MapDescriptor {
    pub fn scale(factor: f64) -> Self {
        MapDescriptor::Scale { factor }
    }

    pub fn affine(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        let m = MapDescriptor::Affine { matrix, offset };
        m.validate()?;
        Ok(m)
    }

    pub fn scalar_poly(coefficients: Vec<f64>) -> Result<Self> {
        let m = MapDescriptor::ScalarPoly { coefficients };
        m.validate()?;
        Ok(m)
    }

    pub fn finite_table(points: Vec<Point>, images: Vec<Point>) -> Result<Self> {
        let m = MapDescriptor::FiniteTable { points, images };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            MapDescriptor::Scale { factor } if !factor.is_finite() => {
                bad(format!("scale factor {factor} is not finite"))
            }
            MapDescriptor::Scale { .. } => Ok(()),
            MapDescriptor::Affine { matrix, offset } => {
                let n = offset.len();
                if n == 0 || matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                    return bad(format!("affine map needs an {n}x{n} matrix and offset of length {n}"));
                }
                if matrix.iter().flatten().chain(offset).any(|v| !v.is_finite()) {
                    return bad("affine map has non-finite entries".into());
                }
                Ok(())
            }
            MapDescriptor::ScalarPoly { coefficients } => {
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                    return bad("polynomial needs at least one finite coefficient".into());
                }
                Ok(())
            }
            MapDescriptor::FiniteTable { points, images } => {
                if points.is_empty() || points.len() != images.len() {
                    return bad("finite map needs one image per point".into());
                }
                let d = points[0].dim();
                for p in points.iter().chain(images) {
                    p.check_dim(d)?;
                }
                for (i, p) in points.iter().enumerate() {
                    if points[..i].contains(p) {
                        return bad(format!("point {i} is listed twice"));
                    }
                }
                if let Some(img) = images.iter().find(|img| !points.contains(img)) {
                    return Err(Error::ImageOutsideDomain(img.coords().to_vec()));
                }
                Ok(())
            }
        }
    }

    /// Table index of `x`, for finite maps.
    pub fn index_of(&self, x: &Point) -> Option<usize> {
        match self {
            MapDescriptor::FiniteTable { points, .. } => points.iter().position(|p| p == x),
            _ => None,
        }
    }
}

impl SelfMap for MapDescriptor {
    fn dim(&self) -> usize {
        match self {
            MapDescriptor::Scale { .. } | MapDescriptor::ScalarPoly { .. } => 1,
            MapDescriptor::Affine { offset, .. } => offset.len(),
            MapDescriptor::FiniteTable { points, .. } => points.first().map_or(1, Point::dim),
        }
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.dim())?;
        let c = x.coords();
        let image = match self {
            MapDescriptor::Scale { factor } => vec![factor * c[0]],
            MapDescriptor::Affine { matrix, offset } => matrix
                .iter()
                .zip(offset)
                .map(|(row, b)| row.iter().zip(c).map(|(a, v)| a * v).sum::<f64>() + b)
                .collect(),
            MapDescriptor::ScalarPoly { coefficients } => {
                vec![coefficients.iter().rev().fold(0.0, |acc, a| acc * c[0] + a)]
            }
            MapDescriptor::FiniteTable { points, images } => {
                let i = points
                    .iter()
                    .position(|p| p == x)
                    .ok_or_else(|| Error::PointNotInTable(c.to_vec()))?;
                return Ok(images[i].clone());
            }
        };
        Point::new(image)
    }
}

/// The `k`-fold composition `T^k`.
pub struct Power<'a, M: SelfMap + ?Sized> {
    pub map: &'a M,
    pub k: usize,
}

impl<M: SelfMap + ?Sized> SelfMap for Power<'_, M> {
    fn dim(&self) -> usize {
        self.map.dim()
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        let mut y = self.map.apply(x)?;
        for _ in 1..self.k {
            y = self.map.apply(&y)?;
        }
        Ok(y)
    }
}

/// A self-map given by a closure, used for the averaged maps of the solvers.
pub struct FnMap<F> {
    pub dim: usize,
    pub f: F,
}

impl<F> SelfMap for FnMap<F>
where
    F: Fn(&Point) -> Result<Point> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.dim)?;
        (self.f)(x)
    }
}
