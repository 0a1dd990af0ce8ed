//! Fixed-point solvers and checks of their theoretical guarantees.
//!
//! Convergence always means that *both* directed residuals `d(x, Tx)` and
//! `d(Tx, x)` are within tolerance: in an asymmetric space one of them can
//! vanish at points that are not fixed.

mod averaged;
mod edelstein;
mod gk;
mod picard;
mod trace;

pub use averaged::{
    averaged_family, averaged_family_with, AveragedFamily, AveragedVariant, FamilyFailure,
    FamilyMember, DEFAULT_SUP_SLACK,
};
pub use edelstein::{edelstein_minimize, edelstein_minimize_with, Selection};
pub use gk::{gk_diagnostic, GkPoint, GkReport, GkVerdict};
pub use picard::{
    picard, power_picard, Diagnostics, FbCheck, FixedPointResult, PowerCheck, SolverConfig,
    Status, DIVERGENCE_LIMIT,
};
pub use trace::{format_float, ConvergenceTrace, TraceRow};
