//! Numerical toolkit for asymmetric (quasi-metric) spaces and asymmetric
//! normed spaces.
//!
//! The crate is organised around the objects a fixed-point argument in an
//! asymmetric space needs:
//!
//! * [`spaces`]: points, asymmetric distances and norms, sample-based axiom
//!   checkers.
//! * [`analysis`]: self-maps, forward/backward Cauchy diagnostics and
//!   Lipschitz f/b-constant estimation with three-valued classification.
//! * [`solvers`]: Picard iteration with dual (forward and backward) stopping,
//!   power iteration, grid minimisation of `z -> d(z, Tz)`, averaged
//!   contraction families and the Goebel–Karlovitz diagnostic.
//! * [`geometry`]: diameters, forward/backward radii, diametral points,
//!   minimal invariant sets of finite maps and convex-hull membership.
//! * [`convexity`]: convex approximation over the simplex and the
//!   Minkowski gauge of a polytope.
//! * [`cli`]: the JSON scenario runner behind the `asymfix` binary.
//!
//! Every distance is directional: `d(x, y)` and `d(y, x)` generally differ,
//! and all APIs take arguments in the order the mathematics uses them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod convexity;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod solvers;
mod numfmt;
pub mod spaces;

pub use error::{Error, Result};
pub use exec::Execution;
pub use spaces::{DistanceDescriptor, NormDescriptor, Point};
