//! Points, asymmetric distances, asymmetric norms and runtime axiom checks.

mod axioms;
mod distance;
mod norm;
mod point;

pub use axioms::{
    check_distance_axioms, check_distance_axioms_with, check_norm_axioms, check_norm_axioms_with,
    AxiomReport, Violation, DEFAULT_AXIOM_TOL,
};
pub use distance::{eval_distance, induced_distance, AsymmetricDistance, DistanceDescriptor};
pub use norm::{eval_norm, AsymmetricNorm, NormDescriptor, SymmetricKind};
pub use point::{grid_points, Point};

use serde::{Deserialize, Serialize};

/// Which of the two distances induced by a norm, or which side of a
/// directed distance, an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}
