//! Convex approximation over the probability simplex and the Minkowski gauge
//! of a polytope.

mod mazur;
mod minkowski;

pub use mazur::{mazur_approximation, mazur_approximation_with, MazurOutcome, SimplexWeights, DEFAULT_GRID_Q};
pub use minkowski::{minkowski_functional, MAX_SCALE};
