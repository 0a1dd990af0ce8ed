use serde::{Deserialize, Serialize};

use super::point::Point;
use crate::error::{Error, Result};

/// Anything that behaves like an asymmetric norm `‖·|` on `R^n`.
///
/// Implementors only have to evaluate on coordinate slices of the right
/// length; dimension checking happens in [`AsymmetricNorm::eval`].
pub trait AsymmetricNorm: Sync {
    /// Required dimension, or `None` when any dimension is accepted.
    fn dim(&self) -> Option<usize>;

    fn norm_of(&self, v: &[f64]) -> f64;

    fn eval(&self, v: &Point) -> Result<f64> {
        if let Some(d) = self.dim() {
            v.check_dim(d)?;
        }
        Ok(self.norm_of(v.coords()))
    }
}

/// The classical symmetric `ℓ_p` norms used by the symmetric lifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricKind {
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl SymmetricKind {
    pub fn norm_of(self, v: &[f64]) -> f64 {
        match self {
            SymmetricKind::Euclidean => v.iter().map(|c| c * c).sum::<f64>().sqrt(),
            SymmetricKind::Manhattan => v.iter().map(|c| c.abs()).sum(),
            SymmetricKind::Chebyshev => v.iter().fold(0.0, |m, c| m.max(c.abs())),
        }
    }
}

/// Declarative asymmetric norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", from = "RawNorm")]
pub enum NormDescriptor {
    /// `‖x|_u = max{x, 0}` on the real line.
    Upper,
    /// `‖(x, y)| = max{0, y − x, y + x}` on the plane.
    PlanarMax,
    /// A symmetric `ℓ_p` norm viewed as an asymmetric one.
    SymmetricLift { q: SymmetricKind },
    /// `factor · base`, `factor > 0`.
    Scaled {
        base: Box<NormDescriptor>,
        factor: f64,
    },
}

// Unit variants of an internally tagged enum silently accept extra keys;
// the empty-struct mirror makes them strict.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawNorm {
    Upper {},
    PlanarMax {},
    SymmetricLift { q: SymmetricKind },
    Scaled { base: Box<NormDescriptor>, factor: f64 },
}

impl From<RawNorm> for NormDescriptor {
    fn from(r: RawNorm) -> Self {
        match r {
            RawNorm::Upper {} => NormDescriptor::Upper,
            RawNorm::PlanarMax {} => NormDescriptor::PlanarMax,
            RawNorm::SymmetricLift { q } => NormDescriptor::SymmetricLift { q },
            RawNorm::Scaled { base, factor } => NormDescriptor::Scaled { base, factor },
        }
    }
}

impl NormDescriptor {
    pub fn scaled(base: NormDescriptor, factor: f64) -> Result<Self> {
        let n = NormDescriptor::Scaled {
            base: Box::new(base),
            factor,
        };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NormDescriptor::Scaled { base, factor } => {
                if !(factor.is_finite() && *factor > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "scale factor must be positive and finite, got {factor}"
                    )));
                }
                base.validate()
            }
            _ => Ok(()),
        }
    }
}

impl AsymmetricNorm for NormDescriptor {
    fn dim(&self) -> Option<usize> {
        match self {
            NormDescriptor::Upper => Some(1),
            NormDescriptor::PlanarMax => Some(2),
            NormDescriptor::SymmetricLift { .. } => None,
            NormDescriptor::Scaled { base, .. } => base.dim(),
        }
    }

    fn norm_of(&self, v: &[f64]) -> f64 {
        match self {
            NormDescriptor::Upper => v[0].max(0.0),
            NormDescriptor::PlanarMax => {
                let (x, y) = (v[0], v[1]);
                0.0f64.max(y - x).max(y + x)
            }
            NormDescriptor::SymmetricLift { q } => q.norm_of(v),
            NormDescriptor::Scaled { base, factor } => factor * base.norm_of(v),
        }
    }
}

pub fn eval_norm(desc: &NormDescriptor, v: &Point) -> Result<f64> {
    desc.eval(v)
}
