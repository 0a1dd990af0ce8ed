//! Lipschitz f- and b-constant estimation.
//!
//! For a pair `(x, y)` the forward ratio is `d(Tx, Ty) / d(x, y)` and the
//! backward ratio is `d(Tx, Ty) / d(y, x)`. A zero denominator with a zero
//! numerator is skipped; with a positive numerator the ratio is `+∞`.
//! Estimates are suprema over the sample and therefore lower bounds of the
//! true constants; flags can be refuted by a witness but only ever
//! "hold on the sample".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::map::{MapDescriptor, SelfMap};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::spaces::{grid_points, AsymmetricDistance, Point};

/// Ratios within this much of 1 count as 1 for the contraction and
/// non-expansiveness flags.
const RATIO_SLACK: f64 = 1e-12;

/// An extrapolated supremum this close to 1 refutes a contraction.
const LIMIT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub x: Point,
    pub y: Point,
    /// `d(Tx, Ty)`.
    pub image_distance: f64,
    /// `d(x, y)` for forward flags, `d(y, x)` for backward flags.
    pub reference_distance: f64,
    #[serde(serialize_with = "crate::numfmt::extended_f64")]
    pub ratio: f64,
    /// Set when the refutation comes from extrapolating the refinement trend.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Flag {
    HoldsOnSample,
    Violated { witness: Box<Witness> },
    Undetermined,
}

impl Flag {
    pub fn holds(&self) -> bool {
        matches!(self, Flag::HoldsOnSample)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Flag::Violated { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Flag::Violated { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Grid-only estimates at successively doubled densities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementTrend {
    pub points_per_axis: Vec<usize>,
    pub k_f: Vec<f64>,
    pub l_b: Vec<f64>,
    /// Richardson extrapolation `2 k(h/2) − k(h)` of the last two levels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_f_limit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_b_limit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub pairs_evaluated: usize,
    pub exhaustive: bool,
    #[serde(serialize_with = "crate::numfmt::extended_f64")]
    pub k_f_estimate: f64,
    #[serde(serialize_with = "crate::numfmt::extended_f64")]
    pub l_b_estimate: f64,
    pub witness_pair_f: Option<(Point, Point)>,
    pub witness_pair_b: Option<(Point, Point)>,
    pub f_contraction: Flag,
    pub b_contraction: Flag,
    pub f_nonexpansive: Flag,
    pub b_nonexpansive: Flag,
    pub f_shrinkage: Flag,
    pub b_shrinkage: Flag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement: Option<RefinementTrend>,
}

#[derive(Debug, Clone)]
struct Extreme {
    ratio: f64,
    witness: Witness,
}

/// Running reduction over pairs in canonical order; earlier pairs win ties.
#[derive(Debug, Clone, Default)]
struct Summary {
    pairs: usize,
    max_f: Option<Extreme>,
    max_b: Option<Extreme>,
    shrink_f: Option<Witness>,
    shrink_b: Option<Witness>,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    if den == 0.0 {
        (num > 0.0).then_some(f64::INFINITY)
    } else {
        Some(num / den)
    }
}

impl Summary {
    fn observe(&mut self, x: &Point, y: &Point, num: f64, den_f: f64, den_b: f64) {
        self.pairs += 1;
        let witness = |den: f64, r: f64| Witness {
            x: x.clone(),
            y: y.clone(),
            image_distance: num,
            reference_distance: den,
            ratio: r,
            limit_estimate: None,
        };
        if let Some(r) = ratio(num, den_f) {
            if self.max_f.as_ref().is_none_or(|e| r > e.ratio) {
                self.max_f = Some(Extreme {
                    ratio: r,
                    witness: witness(den_f, r),
                });
            }
        }
        if let Some(r) = ratio(num, den_b) {
            if self.max_b.as_ref().is_none_or(|e| r > e.ratio) {
                self.max_b = Some(Extreme {
                    ratio: r,
                    witness: witness(den_b, r),
                });
            }
        }
        if self.shrink_f.is_none() && num >= den_f {
            self.shrink_f = Some(witness(den_f, ratio(num, den_f).unwrap_or(f64::NAN)));
        }
        if self.shrink_b.is_none() && num >= den_b {
            self.shrink_b = Some(witness(den_b, ratio(num, den_b).unwrap_or(f64::NAN)));
        }
    }

    fn merge(mut self, later: Summary) -> Summary {
        self.pairs += later.pairs;
        let pick = |a: Option<Extreme>, b: Option<Extreme>| match (a, b) {
            (Some(a), Some(b)) => Some(if b.ratio > a.ratio { b } else { a }),
            (a, b) => a.or(b),
        };
        self.max_f = pick(self.max_f, later.max_f);
        self.max_b = pick(self.max_b, later.max_b);
        self.shrink_f = self.shrink_f.or(later.shrink_f);
        self.shrink_b = self.shrink_b.or(later.shrink_b);
        self
    }

    fn k_f(&self) -> f64 {
        self.max_f.as_ref().map_or(0.0, |e| e.ratio)
    }

    fn l_b(&self) -> f64 {
        self.max_b.as_ref().map_or(0.0, |e| e.ratio)
    }

    fn into_report(self, exhaustive: bool) -> LipschitzReport {
        let contraction = |e: &Option<Extreme>| match e {
            None => Flag::Undetermined,
            Some(e) if e.ratio >= 1.0 - RATIO_SLACK => Flag::Violated {
                witness: Box::new(e.witness.clone()),
            },
            Some(_) => Flag::HoldsOnSample,
        };
        let nonexpansive = |e: &Option<Extreme>| match e {
            None => Flag::Undetermined,
            Some(e) if e.ratio > 1.0 + RATIO_SLACK => Flag::Violated {
                witness: Box::new(e.witness.clone()),
            },
            Some(_) => Flag::HoldsOnSample,
        };
        let shrinkage = |w: &Option<Witness>| match w {
            Some(w) => Flag::Violated {
                witness: Box::new(w.clone()),
            },
            None => Flag::HoldsOnSample,
        };
        let pair = |e: &Option<Extreme>| e.as_ref().map(|e| (e.witness.x.clone(), e.witness.y.clone()));
        LipschitzReport {
            pairs_evaluated: self.pairs,
            exhaustive,
            k_f_estimate: self.k_f(),
            l_b_estimate: self.l_b(),
            witness_pair_f: pair(&self.max_f),
            witness_pair_b: pair(&self.max_b),
            f_contraction: contraction(&self.max_f),
            b_contraction: contraction(&self.max_b),
            f_nonexpansive: nonexpansive(&self.max_f),
            b_nonexpansive: nonexpansive(&self.max_b),
            f_shrinkage: shrinkage(&self.shrink_f),
            b_shrinkage: shrinkage(&self.shrink_b),
            refinement: None,
        }
    }
}

fn observe_pair<M, D>(map: &M, dist: &D, x: &Point, y: &Point, s: &mut Summary) -> Result<()>
where
    M: SelfMap + ?Sized,
    D: AsymmetricDistance + ?Sized,
{
    if x == y {
        return Err(Error::DegeneratePair(x.coords().to_vec()));
    }
    let (tx, ty) = (map.apply(x)?, map.apply(y)?);
    let num = dist.distance(&tx, &ty)?;
    s.observe(x, y, num, dist.distance(x, y)?, dist.distance(y, x)?);
    Ok(())
}

fn fold(parts: Vec<Result<Summary>>) -> Result<Summary> {
    parts
        .into_iter()
        .try_fold(Summary::default(), |acc, s| Ok(acc.merge(s?)))
}

/// Sup-estimates of the Lipschitz f- and b-constants over explicit pairs.
pub fn estimate_lipschitz<M, D>(map: &M, dist: &D, pairs: &[(Point, Point)]) -> Result<LipschitzReport>
where
    M: SelfMap + ?Sized,
    D: AsymmetricDistance + ?Sized,
{
    estimate_lipschitz_with(Execution::default(), map, dist, pairs)
}

pub fn estimate_lipschitz_with<M, D>(
    exec: Execution,
    map: &M,
    dist: &D,
    pairs: &[(Point, Point)],
) -> Result<LipschitzReport>
where
    M: SelfMap + ?Sized,
    D: AsymmetricDistance + ?Sized,
{
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    let parts = exec.map(pairs, |(x, y)| {
        let mut s = Summary::default();
        observe_pair(map, dist, x, y, &mut s)?;
        Ok(s)
    });
    Ok(fold(parts)?.into_report(false))
}

/// All ordered pairs `(i, j)`, `i ≠ j`, of a point list, row by row.
fn all_pairs_summary<M, D>(exec: Execution, map: &M, dist: &D, pts: &[Point]) -> Result<Summary>
where
    M: SelfMap + ?Sized,
    D: AsymmetricDistance + ?Sized,
{
    let images: Vec<Point> = exec
        .map(pts, |p| map.apply(p))
        .into_iter()
        .collect::<Result<_>>()?;
    let rows = exec.map_range(pts.len(), |i| {
        let mut s = Summary::default();
        for j in 0..pts.len() {
            if j == i {
                continue;
            }
            let num = dist.distance(&images[i], &images[j])?;
            let den_f = dist.distance(&pts[i], &pts[j])?;
            let den_b = dist.distance(&pts[j], &pts[i])?;
            s.observe(&pts[i], &pts[j], num, den_f, den_b);
        }
        Ok(s)
    });
    fold(rows)
}

/// Sampling policy for [`classify_map`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplerConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub points_per_axis: usize,
    pub random_pairs: usize,
    /// Number of density doublings of the grid (each adds a level with
    /// `2(n − 1) + 1` points per axis).
    pub refinements: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            lower: vec![-1.0],
            upper: vec![1.0],
            points_per_axis: 21,
            random_pairs: 200,
            refinements: 1,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    /// Default sampler on the box `[lower, upper]^dim`.
    pub fn on_box(dim: usize, lower: f64, upper: f64) -> Self {
        SamplerConfig {
            lower: vec![lower; dim],
            upper: vec![upper; dim],
            ..Default::default()
        }
    }
}

/// Estimates and classifies `map` with the standard sampling policy: a
/// uniform grid over the configured box, refined grids, then seeded random
/// pairs. Finite tables are evaluated exhaustively over all ordered pairs.
///
/// A contraction that holds at every level is still refuted when the
/// extrapolated supremum of the refinement trend reaches 1.
pub fn classify_map<D: AsymmetricDistance + ?Sized>(
    map: &MapDescriptor,
    dist: &D,
    sampler: &SamplerConfig,
) -> Result<LipschitzReport> {
    classify_map_with(Execution::default(), map, dist, sampler)
}

pub fn classify_map_with<D: AsymmetricDistance + ?Sized>(
    exec: Execution,
    map: &MapDescriptor,
    dist: &D,
    sampler: &SamplerConfig,
) -> Result<LipschitzReport> {
    if let MapDescriptor::FiniteTable { points, .. } = map {
        if points.len() < 2 {
            return Err(Error::EmptySample);
        }
        return Ok(all_pairs_summary(exec, map, dist, points)?.into_report(true));
    }
    if sampler.points_per_axis == 0 {
        return Err(Error::EmptySample);
    }
    let dim = map.dim();
    if sampler.lower.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: sampler.lower.len(),
        });
    }

    let mut levels = Vec::new();
    let mut per_axis = sampler.points_per_axis;
    for _ in 0..=sampler.refinements {
        let grid = grid_points(&sampler.lower, &sampler.upper, per_axis)?;
        levels.push((per_axis, all_pairs_summary(exec, map, dist, &grid)?));
        if per_axis < 2 {
            break;
        }
        per_axis = 2 * (per_axis - 1) + 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let mut draw = || -> Result<Point> {
        let c = sampler
            .lower
            .iter()
            .zip(&sampler.upper)
            .map(|(&lo, &hi)| if lo == hi { lo } else { rng.gen_range(lo..=hi) })
            .collect();
        Point::new(c)
    };
    let mut random = Vec::with_capacity(sampler.random_pairs);
    for _ in 0..sampler.random_pairs {
        let (x, y) = (draw()?, draw()?);
        if x != y {
            random.push((x, y));
        }
    }
    let random_summary = fold(exec.map(&random, |(x, y)| {
        let mut s = Summary::default();
        observe_pair(map, dist, x, y, &mut s)?;
        Ok(s)
    }))?;

    let trend = RefinementTrend {
        points_per_axis: levels.iter().map(|(n, _)| *n).collect(),
        k_f: levels.iter().map(|(_, s)| s.k_f()).collect(),
        l_b: levels.iter().map(|(_, s)| s.l_b()).collect(),
        k_f_limit: extrapolate(levels.iter().map(|(_, s)| s.k_f())),
        l_b_limit: extrapolate(levels.iter().map(|(_, s)| s.l_b())),
    };
    let finest = levels.last().map(|(_, s)| s.clone()).unwrap_or_default();

    let total = levels
        .into_iter()
        .map(|(_, s)| s)
        .fold(Summary::default(), Summary::merge)
        .merge(random_summary);
    if total.pairs == 0 {
        return Err(Error::EmptySample);
    }
    let mut report = total.into_report(false);
    refute_by_trend(&mut report.f_contraction, trend.k_f_limit, finest.max_f.as_ref());
    refute_by_trend(&mut report.b_contraction, trend.l_b_limit, finest.max_b.as_ref());
    report.refinement = Some(trend);
    Ok(report)
}

fn extrapolate(values: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = values.collect();
    match v.as_slice() {
        [.., coarse, fine] if coarse.is_finite() && fine.is_finite() && fine > coarse => {
            Some(2.0 * fine - coarse)
        }
        _ => None,
    }
}

fn refute_by_trend(flag: &mut Flag, limit: Option<f64>, finest: Option<&Extreme>) {
    if let (Flag::HoldsOnSample, Some(limit), Some(e)) = (&*flag, limit, finest) {
        if limit >= 1.0 - LIMIT_SLACK {
            let mut witness = e.witness.clone();
            witness.limit_estimate = Some(limit);
            *flag = Flag::Violated {
                witness: Box::new(witness),
            };
        }
    }
}
