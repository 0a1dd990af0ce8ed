use serde::{Deserialize, Serialize};

use super::trace::{ConvergenceTrace, TraceRow};
use crate::analysis::{Power, SelfMap};
use crate::error::{Error, Result};
use crate::spaces::{AsymmetricDistance, Point};

/// Any iterate coordinate beyond this magnitude marks the run as diverged.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// Only the first iterates enter the pairwise a-priori bound check.
const BOUND_CHECK_CAP: usize = 512;
const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            max_iter: 10_000,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        SolverConfig {
            tol,
            max_iter,
            record_trace: false,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIterExceeded,
    Diverged,
}

/// Empirical look at "f-convergence implies b-convergence" on the tail of
/// the orbit: largest `d(x*, x_n)` and `d(x_n, x*)` over the last quarter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FbCheck {
    pub forward_tail: f64,
    pub backward_tail: f64,
    pub consistent: bool,
}

/// Outcome of checking a fixed point of `T^k` against `T` itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerCheck {
    pub k: usize,
    pub power_forward_residual: f64,
    pub power_backward_residual: f64,
    pub fixed_under_map: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fb_check: Option<FbCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<PowerCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<super::edelstein::Selection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointResult {
    pub status: Status,
    pub point: Point,
    pub iterations: usize,
    /// `d(x, Tx)`.
    #[serde(serialize_with = "crate::numfmt::extended_f64")]
    pub forward_residual: f64,
    /// `d(Tx, x)`.
    #[serde(serialize_with = "crate::numfmt::extended_f64")]
    pub backward_residual: f64,
    /// Whether every checked orbit pair obeys the a-priori bound; `None`
    /// when no contraction constant was supplied.
    pub bound_respected: Option<bool>,
    #[serde(skip)]
    pub trace: Option<ConvergenceTrace>,
    #[serde(skip)]
    pub orbit: Vec<Point>,
    pub diagnostics: Diagnostics,
}

impl FixedPointResult {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

enum Step {
    Image(Point),
    Diverged,
}

fn step<M: SelfMap + ?Sized>(map: &M, x: &Point) -> Result<Step> {
    match map.apply(x) {
        Ok(y) if y.sup_norm() > DIVERGENCE_LIMIT => Ok(Step::Diverged),
        Ok(y) => Ok(Step::Image(y)),
        Err(Error::NonFinite(_)) => Ok(Step::Diverged),
        Err(e) => Err(e),
    }
}

/// Picard iteration `x_{n+1} = T x_n` from `x0`.
///
/// Stops as soon as both `d(x_n, T x_n)` and `d(T x_n, x_n)` are at most
/// `cfg.tol`. With a contraction constant `k ∈ [0, 1)` every trace row
/// carries the a-priori bound `λ k^n / (1 − k)`,
/// `λ = max{d(x_1, x_0), d(x_0, x_1)}`, and the result records whether each
/// orbit pair `m ≤ n` obeys `d(x_n, x_m) ≤ λ k^m / (1 − k)`.
pub fn picard<M, D>(
    map: &M,
    dist: &D,
    x0: &Point,
    cfg: &SolverConfig,
    contraction: Option<f64>,
) -> Result<FixedPointResult>
where
    M: SelfMap + ?Sized,
    D: AsymmetricDistance + ?Sized,
{
    cfg.validate()?;
    x0.check_dim(map.dim())?;
    if let Some(k) = contraction {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::InvalidArgument(format!(
                "contraction constant must lie in [0, 1), got {k}"
            )));
        }
    }

    let mut orbit = vec![x0.clone()];
    let mut trace = cfg.record_trace.then(ConvergenceTrace::default);
    let mut lambda = None;
    let mut x = x0.clone();
    let mut status = Status::MaxIterExceeded;
    let mut residuals = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;

    loop {
        let tx = match step(map, &x)? {
            Step::Image(tx) => tx,
            Step::Diverged => {
                status = Status::Diverged;
                break;
            }
        };
        let fwd = dist.distance(&x, &tx)?;
        let bwd = dist.distance(&tx, &x)?;
        residuals = (fwd, bwd);
        if iterations == 0 {
            lambda = Some(fwd.max(bwd));
        }
        if fwd <= cfg.tol && bwd <= cfg.tol {
            status = Status::Converged;
            break;
        }
        if iterations == cfg.max_iter {
            break;
        }
        if let Some(t) = trace.as_mut() {
            let bound = contraction
                .zip(lambda)
                .map(|(k, l)| l * k.powi(iterations as i32) / (1.0 - k));
            t.rows.push(TraceRow {
                n: iterations,
                point: x.clone(),
                d_fwd_step: fwd,
                d_bwd_step: bwd,
                bound,
            });
        }
        orbit.push(tx.clone());
        x = tx;
        iterations += 1;
    }

    let bound_respected = match (contraction, lambda) {
        (Some(k), Some(l)) => Some(orbit_obeys_bound(dist, &orbit, k, l)?),
        _ => None,
    };
    let fb_check = fb_tail_check(dist, &orbit, cfg.tol)?;

    Ok(FixedPointResult {
        status,
        point: x,
        iterations,
        forward_residual: residuals.0,
        backward_residual: residuals.1,
        bound_respected,
        trace,
        orbit,
        diagnostics: Diagnostics {
            contraction_constant: contraction,
            lambda,
            fb_check,
            ..Default::default()
        },
    })
}

fn orbit_obeys_bound<D: AsymmetricDistance + ?Sized>(
    dist: &D,
    orbit: &[Point],
    k: f64,
    lambda: f64,
) -> Result<bool> {
    let pts = &orbit[..orbit.len().min(BOUND_CHECK_CAP)];
    for m in 0..pts.len() {
        let bound = lambda * k.powi(m as i32) / (1.0 - k);
        for n in m..pts.len() {
            if dist.distance(&pts[n], &pts[m])? > bound + BOUND_SLACK {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn fb_tail_check<D: AsymmetricDistance + ?Sized>(
    dist: &D,
    orbit: &[Point],
    tol: f64,
) -> Result<Option<FbCheck>> {
    if orbit.len() < 2 {
        return Ok(None);
    }
    let last = orbit.last().unwrap();
    let start = orbit.len() - (orbit.len() / 4).max(1) - 1;
    let (mut forward_tail, mut backward_tail) = (0.0f64, 0.0f64);
    for x in &orbit[start..orbit.len() - 1] {
        forward_tail = forward_tail.max(dist.distance(last, x)?);
        backward_tail = backward_tail.max(dist.distance(x, last)?);
    }
    let small = tol.sqrt();
    Ok(Some(FbCheck {
        forward_tail,
        backward_tail,
        consistent: !(forward_tail <= small && backward_tail > small),
    }))
}

/// Picard iteration on `T^k`, followed by a check that the point found is
/// fixed by `T` itself. If it is not, the status is
/// [`Status::MaxIterExceeded`] and the diagnostics say why. `k = 1` is plain
/// [`picard`].
pub fn power_picard<M, D>(
    map: &M,
    dist: &D,
    k: usize,
    x0: &Point,
    cfg: &SolverConfig,
    contraction: Option<f64>,
) -> Result<FixedPointResult>
where
    M: SelfMap + ?Sized,
    D: AsymmetricDistance + ?Sized,
{
    if k == 0 {
        return Err(Error::InvalidArgument("power k must be at least 1".into()));
    }
    if k == 1 {
        return picard(map, dist, x0, cfg, contraction);
    }
    let power = Power { map, k };
    let mut res = picard(&power, dist, x0, cfg, contraction)?;
    if res.status != Status::Converged {
        return Ok(res);
    }
    let power_residuals = (res.forward_residual, res.backward_residual);
    // T^k residuals can reach tol slightly before T's; keep iterating T^k
    // until T agrees or the iterate stops moving.
    let (fwd, bwd, fixed) = loop {
        let tx = map.apply(&res.point)?;
        let fwd = dist.distance(&res.point, &tx)?;
        let bwd = dist.distance(&tx, &res.point)?;
        if (fwd <= cfg.tol && bwd <= cfg.tol) || res.iterations >= cfg.max_iter {
            break (fwd, bwd, fwd <= cfg.tol && bwd <= cfg.tol);
        }
        let next = power.apply(&res.point)?;
        if next == res.point {
            break (fwd, bwd, false);
        }
        if let Some(t) = res.trace.as_mut() {
            let bound = contraction
                .zip(res.diagnostics.lambda)
                .map(|(k, l)| l * k.powi(res.iterations as i32) / (1.0 - k));
            t.rows.push(TraceRow {
                n: res.iterations,
                point: res.point.clone(),
                d_fwd_step: dist.distance(&res.point, &next)?,
                d_bwd_step: dist.distance(&next, &res.point)?,
                bound,
            });
        }
        res.orbit.push(next.clone());
        res.point = next;
        res.iterations += 1;
    };
    res.diagnostics.power = Some(PowerCheck {
        k,
        power_forward_residual: power_residuals.0,
        power_backward_residual: power_residuals.1,
        fixed_under_map: fixed,
    });
    res.forward_residual = fwd;
    res.backward_residual = bwd;
    if !fixed {
        res.status = Status::MaxIterExceeded;
        res.diagnostics.note = Some(format!("fixed point of T^{k} is not fixed by T"));
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::MapDescriptor;
    use crate::spaces::{DistanceDescriptor, NormDescriptor, SymmetricKind};

    #[test]
    fn halving_converges_with_bound() {
        let cfg = SolverConfig::new(1e-10, 10_000).with_trace();
        let r = picard(
            &MapDescriptor::scale(0.5),
            &DistanceDescriptor::LineQuarter,
            &Point::scalar(1.0),
            &cfg,
            Some(0.5),
        )
        .unwrap();
        assert!(r.converged());
        assert!(r.point.coords()[0].abs() < 1e-9);
        assert!(r.forward_residual <= 1e-10 && r.backward_residual <= 1e-10);
        assert_eq!(r.diagnostics.lambda, Some(0.5));
        assert_eq!(r.bound_respected, Some(true));
        let t = r.trace.as_ref().unwrap();
        assert_eq!(t.rows.len(), r.iterations);
        for row in &t.rows {
            assert_eq!(row.bound, Some(0.5f64.powi(row.n as i32)));
        }
    }

    #[test]
    fn fixed_start_takes_zero_iterations() {
        let r = picard(
            &MapDescriptor::scale(0.5),
            &DistanceDescriptor::LineQuarter,
            &Point::scalar(0.0),
            &SolverConfig::default().with_trace(),
            None,
        )
        .unwrap();
        assert!(r.converged());
        assert_eq!(r.iterations, 0);
        assert_eq!((r.forward_residual, r.backward_residual), (0.0, 0.0));
        assert!(r.trace.unwrap().rows.is_empty());
    }

    #[test]
    fn doubling_diverges() {
        let r = picard(
            &MapDescriptor::scale(2.0),
            &DistanceDescriptor::LineQuarter,
            &Point::scalar(1.0),
            &SolverConfig::new(1e-10, 60),
            None,
        )
        .unwrap();
        assert_eq!(r.status, Status::Diverged);
        assert!(r.iterations < 60);
        assert!(r.point.coords()[0] <= DIVERGENCE_LIMIT);
    }

    #[test]
    fn max_iter_is_reported() {
        let r = picard(
            &MapDescriptor::scale(2.0),
            &DistanceDescriptor::LineQuarter,
            &Point::scalar(1.0),
            &SolverConfig::new(1e-10, 5),
            None,
        )
        .unwrap();
        assert_eq!(r.status, Status::MaxIterExceeded);
        assert_eq!(r.iterations, 5);
        assert_eq!(r.point, Point::scalar(32.0));
    }

    #[test]
    fn dual_stopping_rule_matters() {
        // Under line_onesided, d(x, Tx) = 0 for Tx = x − 1 although x is not fixed.
        let t = MapDescriptor::affine(vec![vec![1.0]], vec![-1.0]).unwrap();
        let r = picard(
            &t,
            &DistanceDescriptor::LineOnesided,
            &Point::scalar(0.0),
            &SolverConfig::new(1e-10, 10),
            None,
        )
        .unwrap();
        assert_eq!(r.status, Status::MaxIterExceeded);
        assert_eq!(r.forward_residual, 0.0);
        assert_eq!(r.backward_residual, 1.0);
    }

    #[test]
    fn power_picard_rotation() {
        let t = MapDescriptor::affine(vec![vec![-0.5, 0.0], vec![0.0, -0.5]], vec![0.0, 0.0]).unwrap();
        let d = DistanceDescriptor::NormForward {
            norm: NormDescriptor::PlanarMax,
        };
        let cfg = SolverConfig::default().with_trace();
        let r = power_picard(&t, &d, 2, &Point::from_slice(&[1.0, 1.0]), &cfg, None).unwrap();
        assert!(r.converged());
        assert_eq!(r.trace.as_ref().unwrap().rows.len(), r.iterations);
        assert!(r.point.sup_norm() < 1e-9);
        assert!(r.diagnostics.power.as_ref().unwrap().fixed_under_map);
    }

    #[test]
    fn power_picard_involution() {
        let t = MapDescriptor::affine(vec![vec![-1.0]], vec![1.0]).unwrap();
        let d = DistanceDescriptor::Symmetric {
            p: SymmetricKind::Euclidean,
        };
        let cfg = SolverConfig::new(1e-10, 50);
        let r = power_picard(&t, &d, 2, &Point::scalar(0.2), &cfg, None).unwrap();
        assert_eq!(r.status, Status::MaxIterExceeded);
        assert!(!r.diagnostics.power.as_ref().unwrap().fixed_under_map);
        assert!(r.diagnostics.contraction_constant.is_none());
        let r = power_picard(&t, &d, 2, &Point::scalar(0.5), &cfg, None).unwrap();
        assert!(r.converged());
    }

    #[test]
    fn power_one_is_picard() {
        let t = MapDescriptor::scalar_poly(vec![0.3, 0.4]).unwrap();
        let cfg = SolverConfig::default().with_trace();
        let a = picard(&t, &DistanceDescriptor::LineQuarter, &Point::scalar(2.0), &cfg, Some(0.4)).unwrap();
        let b = power_picard(&t, &DistanceDescriptor::LineQuarter, 1, &Point::scalar(2.0), &cfg, Some(0.4))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(0.0, 10).validate().is_err());
        assert!(SolverConfig::new(1e-3, 0).validate().is_err());
        assert!(picard(
            &MapDescriptor::scale(0.5),
            &DistanceDescriptor::LineQuarter,
            &Point::scalar(1.0),
            &SolverConfig::default(),
            Some(1.0)
        )
        .is_err());
    }
}
