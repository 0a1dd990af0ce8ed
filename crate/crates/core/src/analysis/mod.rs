//! Self-maps, sequence diagnostics and Lipschitz f/b-constant estimation.

mod lipschitz;
mod map;
mod sequences;

pub use lipschitz::{
    classify_map, classify_map_with, estimate_lipschitz, estimate_lipschitz_with, Flag,
    LipschitzReport, RefinementTrend, SamplerConfig, Witness,
};
pub use map::{FnMap, MapDescriptor, Power, SelfMap};
pub use sequences::{
    cauchy_prefix, convergence_residuals, is_b_cauchy_prefix, is_f_cauchy_prefix,
    verify_prop_k12, CauchyVerdict, K12Verdict,
};
