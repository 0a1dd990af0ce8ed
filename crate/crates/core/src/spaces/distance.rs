use serde::{Deserialize, Serialize};

use super::norm::{AsymmetricNorm, NormDescriptor, SymmetricKind};
use super::point::Point;
use super::Direction;
use crate::error::{Error, Result};

/// Anything that behaves like an asymmetric distance `p(x, y)`.
pub trait AsymmetricDistance: Sync {
    /// Required dimension, or `None` when any dimension is accepted.
    fn dim(&self) -> Option<usize>;

    fn distance(&self, x: &Point, y: &Point) -> Result<f64>;
}

/// Declarative asymmetric distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", from = "RawDistance")]
pub enum DistanceDescriptor {
    /// `d(x, y) = y − x` if `y > x`, else `0`.
    LineOnesided,
    /// `d(x, y) = y − x` if `y ≥ x`, else `(x − y) / 4`.
    LineQuarter,
    /// `d(x, y) = ‖y − x|`.
    NormForward { norm: NormDescriptor },
    /// `d̂(x, y) = ‖x − y|`.
    NormBackward { norm: NormDescriptor },
    /// A symmetric `ℓ_p` metric.
    Symmetric { p: SymmetricKind },
    /// Tabulated distance on a finite point list; `values[i][j] = p(points[i], points[j])`.
    FiniteTable {
        points: Vec<Point>,
        values: Vec<Vec<f64>>,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawDistance {
    LineOnesided {},
    LineQuarter {},
    NormForward { norm: NormDescriptor },
    NormBackward { norm: NormDescriptor },
    Symmetric { p: SymmetricKind },
    FiniteTable { points: Vec<Point>, values: Vec<Vec<f64>> },
}

impl From<RawDistance> for DistanceDescriptor {
    fn from(r: RawDistance) -> Self {
        match r {
            RawDistance::LineOnesided {} => DistanceDescriptor::LineOnesided,
            RawDistance::LineQuarter {} => DistanceDescriptor::LineQuarter,
            RawDistance::NormForward { norm } => DistanceDescriptor::NormForward { norm },
            RawDistance::NormBackward { norm } => DistanceDescriptor::NormBackward { norm },
            RawDistance::Symmetric { p } => DistanceDescriptor::Symmetric { p },
            RawDistance::FiniteTable { points, values } => {
                DistanceDescriptor::FiniteTable { points, values }
            }
        }
    }
}

impl DistanceDescriptor {
    /// Builds a finite table, checking its shape.
    pub fn finite_table(points: Vec<Point>, values: Vec<Vec<f64>>) -> Result<Self> {
        let d = DistanceDescriptor::FiniteTable { points, values };
        d.validate()?;
        Ok(d)
    }

    /// Structural checks: square table matching the point list, finite
    /// entries, zero diagonal, distinct points of one dimension. Axiom
    /// violations (negative entries, AD2, AD3) are left to the axiom checker.
    pub fn validate(&self) -> Result<()> {
        match self {
            DistanceDescriptor::NormForward { norm } | DistanceDescriptor::NormBackward { norm } => {
                norm.validate()
            }
            DistanceDescriptor::FiniteTable { points, values } => {
                if points.is_empty() {
                    return Err(Error::InvalidTable("no points".into()));
                }
                let dim = points[0].dim();
                for p in points {
                    p.check_dim(dim)?;
                }
                for i in 0..points.len() {
                    for j in 0..i {
                        if points[i] == points[j] {
                            return Err(Error::InvalidTable(format!(
                                "points {j} and {i} coincide"
                            )));
                        }
                    }
                }
                if values.len() != points.len() || values.iter().any(|r| r.len() != points.len())
                {
                    return Err(Error::InvalidTable(format!(
                        "table must be {n}x{n}",
                        n = points.len()
                    )));
                }
                for (i, row) in values.iter().enumerate() {
                    if row.iter().any(|v| !v.is_finite()) {
                        return Err(Error::InvalidTable(format!("row {i} has a non-finite entry")));
                    }
                    if row[i] != 0.0 {
                        return Err(Error::InvalidTable(format!("diagonal entry {i} is not zero")));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn table_index(points: &[Point], x: &Point) -> Result<usize> {
        points
            .iter()
            .position(|p| p == x)
            .ok_or_else(|| Error::PointNotInTable(x.coords().to_vec()))
    }
}

impl AsymmetricDistance for DistanceDescriptor {
    fn dim(&self) -> Option<usize> {
        match self {
            DistanceDescriptor::LineOnesided | DistanceDescriptor::LineQuarter => Some(1),
            DistanceDescriptor::NormForward { norm } | DistanceDescriptor::NormBackward { norm } => {
                norm.dim()
            }
            DistanceDescriptor::Symmetric { .. } => None,
            DistanceDescriptor::FiniteTable { points, .. } => points.first().map(Point::dim),
        }
    }

    fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        match self.dim() {
            Some(d) => {
                x.check_dim(d)?;
                y.check_dim(d)?;
            }
            None => y.check_dim(x.dim())?,
        }
        let v = match self {
            DistanceDescriptor::LineOnesided => {
                let (a, b) = (x.coords()[0], y.coords()[0]);
                if b > a {
                    b - a
                } else {
                    0.0
                }
            }
            DistanceDescriptor::LineQuarter => {
                let (a, b) = (x.coords()[0], y.coords()[0]);
                if b >= a {
                    b - a
                } else {
                    0.25 * (a - b)
                }
            }
            DistanceDescriptor::NormForward { norm } => norm.norm_of(&y.sub(x)),
            DistanceDescriptor::NormBackward { norm } => norm.norm_of(&x.sub(y)),
            DistanceDescriptor::Symmetric { p } => p.norm_of(&x.sub(y)),
            DistanceDescriptor::FiniteTable { points, values } => {
                let i = Self::table_index(points, x)?;
                let j = Self::table_index(points, y)?;
                values[i][j]
            }
        };
        Ok(v)
    }
}

pub fn eval_distance(desc: &DistanceDescriptor, x: &Point, y: &Point) -> Result<f64> {
    desc.distance(x, y)
}

/// The forward (`‖y − x|`) or backward (`‖x − y|`) distance induced by a norm.
pub fn induced_distance(norm: &NormDescriptor, direction: Direction) -> DistanceDescriptor {
    match direction {
        Direction::Forward => DistanceDescriptor::NormForward { norm: norm.clone() },
        Direction::Backward => DistanceDescriptor::NormBackward { norm: norm.clone() },
    }
}
