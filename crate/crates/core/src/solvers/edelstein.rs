use serde::Serialize;

use super::picard::{picard, FixedPointResult, SolverConfig};
use crate::analysis::SelfMap;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::spaces::{AsymmetricDistance, Point};

/// The candidate minimising `g(z) = d(z, Tz)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    pub index: usize,
    pub point: Point,
    pub g: f64,
}

/// Minimises `g(z) = d(z, Tz)` over `candidates` (lowest index wins ties),
/// then refines by Picard iteration from the minimiser.
pub fn edelstein_minimize<M, D>(
    map: &M,
    dist: &D,
    candidates: &[Point],
    cfg: &SolverConfig,
) -> Result<FixedPointResult>
where
    M: SelfMap + ?Sized,
    D: AsymmetricDistance + ?Sized,
{
    edelstein_minimize_with(Execution::default(), map, dist, candidates, cfg)
}

pub fn edelstein_minimize_with<M, D>(
    exec: Execution,
    map: &M,
    dist: &D,
    candidates: &[Point],
    cfg: &SolverConfig,
) -> Result<FixedPointResult>
where
    M: SelfMap + ?Sized,
    D: AsymmetricDistance + ?Sized,
{
    if candidates.is_empty() {
        return Err(Error::EmptySample);
    }
    let g: Vec<f64> = exec
        .map(candidates, |z| dist.distance(z, &map.apply(z)?))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut index = 0;
    for (i, v) in g.iter().enumerate() {
        if *v < g[index] {
            index = i;
        }
    }
    let mut res = picard(map, dist, &candidates[index], cfg, None)?;
    res.diagnostics.selection = Some(Selection {
        index,
        point: candidates[index].clone(),
        g: g[index],
    });
    Ok(res)
}
