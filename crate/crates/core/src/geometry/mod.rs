//! Diameters, radii, diametral points, minimal invariant sets of finite maps
//! and convex-hull membership.
//!
//! Point order is always input order; "first witness" results refer to it.

mod hull;
mod invariant;
mod subset;

pub use hull::{hull_membership, mch_check, MchReport};
pub use invariant::{minimal_invariant_sets, InvariantSet};
pub use subset::{
    backward_radius, bounded_witness, diameter, diameter_of, find_forward_nondiametral,
    forward_radius, is_forward_diametral, BoundedWitness, FiniteSubset, NondiametralProbe,
    DEFAULT_GEOMETRY_TOL,
};
