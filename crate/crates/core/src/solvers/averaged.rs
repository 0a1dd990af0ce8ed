//! Families of averaged contractions whose fixed points approximate a fixed
//! point of an f-non-expansive map `T`.
//!
//! * anchored at `x0`:  `S_n x = (1 − 1/n) T x + x0 / n`
//! * anchored at `T b`: `S_n x = T b / n + (1 − 1/n) T x`, with
//!   `‖T x_n − x_n| ≤ M / n` where `M` bounds `‖x − b|` on `K`
//! * scaled:            `T_n x = t_n T x`, `t_n = n / (n + 1)`, with
//!   `‖T x_n − x_n| ≤ 2 (1 − t_n) max{r, ‖T x0|}` where `K ⊂ B^f(x0, r)`
//!
//! Each member is solved by Picard iteration under the forward distance
//! `‖y − x|` of the norm.

use serde::{Deserialize, Serialize};

use super::picard::{picard, SolverConfig, Status};
use crate::analysis::{FnMap, SelfMap};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::spaces::{AsymmetricNorm, DistanceDescriptor, NormDescriptor, Point};

/// Relative slack added to sampled suprema (`M`, `r`).
pub const DEFAULT_SUP_SLACK: f64 = 0.05;

const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AveragedVariant {
    SchauderAnchor { x0: Point },
    SapfAnchor { b: Point, sample_k: Vec<Point> },
    Scaling { x0: Point, sample_k: Vec<Point> },
}

impl AveragedVariant {
    fn name(&self) -> &'static str {
        match self {
            AveragedVariant::SchauderAnchor { .. } => "schauder_anchor",
            AveragedVariant::SapfAnchor { .. } => "sapf_anchor",
            AveragedVariant::Scaling { .. } => "scaling",
        }
    }

    fn start(&self) -> &Point {
        match self {
            AveragedVariant::SchauderAnchor { x0 } | AveragedVariant::Scaling { x0, .. } => x0,
            AveragedVariant::SapfAnchor { b, .. } => b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyMember {
    pub n: usize,
    pub point: Point,
    pub iterations: usize,
    /// `‖x_n − T x_n|`.
    pub norm_x_minus_tx: f64,
    /// `‖T x_n − x_n|`, the quantity the variant's bound controls.
    pub norm_tx_minus_x: f64,
    pub bound: Option<f64>,
    pub bound_respected: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyFailure {
    pub n: usize,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragedFamily {
    pub variant: String,
    /// `M` for the anchored-at-`T b` family, `r` for the scaled family.
    pub sup_constant: Option<f64>,
    pub members: Vec<FamilyMember>,
    pub failure: Option<FamilyFailure>,
}

impl AveragedFamily {
    pub fn all_bounds_respected(&self) -> bool {
        self.members.iter().all(|m| m.bound_respected != Some(false))
    }

    pub fn points(&self) -> Vec<Point> {
        self.members.iter().map(|m| m.point.clone()).collect()
    }
}

fn sampled_sup(norm: &NormDescriptor, sample: &[Point], center: &Point, slack: f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sup = 0.0f64;
    for x in sample {
        x.check_dim(center.dim())?;
        sup = sup.max(norm.norm_of(&x.sub(center)));
    }
    Ok(sup * (1.0 + slack))
}

fn axpby(a: f64, x: &Point, b: f64, y: &Point) -> Result<Point> {
    Point::new(
        x.coords()
            .iter()
            .zip(y.coords())
            .map(|(u, v)| a * u + b * v)
            .collect(),
    )
}

pub fn averaged_family<M: SelfMap + ?Sized>(
    map: &M,
    norm: &NormDescriptor,
    variant: &AveragedVariant,
    n_max: usize,
    cfg: &SolverConfig,
) -> Result<AveragedFamily> {
    averaged_family_with(Execution::default(), map, norm, variant, n_max, cfg, DEFAULT_SUP_SLACK)
}

/// Solves the family members `n = 2..=n_max` (concurrently under
/// [`Execution::Parallel`]) and returns them in order of `n`. The first
/// member whose inner Picard run does not converge truncates the family and
/// is reported as the failure.
pub fn averaged_family_with<M: SelfMap + ?Sized>(
    exec: Execution,
    map: &M,
    norm: &NormDescriptor,
    variant: &AveragedVariant,
    n_max: usize,
    cfg: &SolverConfig,
    slack: f64,
) -> Result<AveragedFamily> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 2, got {n_max}")));
    }
    if !(slack >= 0.0) {
        return Err(Error::InvalidArgument(format!("slack must be non-negative, got {slack}")));
    }
    let dim = map.dim();
    variant.start().check_dim(dim)?;
    if let Some(d) = norm.dim() {
        if d != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: d });
        }
    }
    let dist = DistanceDescriptor::NormForward { norm: norm.clone() };

    // (anchor term, sup constant, ‖T x0| for the scaled bound)
    let (anchor, sup_constant, t_x0_norm) = match variant {
        AveragedVariant::SchauderAnchor { x0 } => (Some(x0.clone()), None, None),
        AveragedVariant::SapfAnchor { b, sample_k } => {
            let m = sampled_sup(norm, sample_k, b, slack)?;
            (Some(map.apply(b)?), Some(m), None)
        }
        AveragedVariant::Scaling { x0, sample_k } => {
            let r = sampled_sup(norm, sample_k, x0, slack)?;
            (None, Some(r), Some(norm.norm_of(map.apply(x0)?.coords())))
        }
    };

    let ns: Vec<usize> = (2..=n_max).collect();
    let inner = SolverConfig {
        record_trace: false,
        ..cfg.clone()
    };
    let solved = exec.map(&ns, |&n| -> Result<(Status, FamilyMember)> {
        let nf = n as f64;
        let (weight, bound) = match variant {
            AveragedVariant::SchauderAnchor { .. } => (1.0 - 1.0 / nf, None),
            AveragedVariant::SapfAnchor { .. } => (1.0 - 1.0 / nf, sup_constant.map(|m| m / nf)),
            AveragedVariant::Scaling { .. } => {
                let t = nf / (nf + 1.0);
                let r = sup_constant.unwrap_or(0.0).max(t_x0_norm.unwrap_or(0.0));
                (t, Some(2.0 * (1.0 - t) * r))
            }
        };
        let averaged = FnMap {
            dim,
            f: |x: &Point| -> Result<Point> {
                let tx = map.apply(x)?;
                match &anchor {
                    Some(a) => axpby(weight, &tx, 1.0 / nf, a),
                    None => axpby(weight, &tx, 0.0, &tx),
                }
            },
        };
        let res = picard(&averaged, &dist, variant.start(), &inner, None)?;
        let tx = map.apply(&res.point)?;
        let norm_x_minus_tx = norm.norm_of(&res.point.sub(&tx));
        let norm_tx_minus_x = norm.norm_of(&tx.sub(&res.point));
        Ok((
            res.status,
            FamilyMember {
                n,
                point: res.point,
                iterations: res.iterations,
                norm_x_minus_tx,
                norm_tx_minus_x,
                bound,
                bound_respected: bound.map(|b| norm_tx_minus_x <= b + BOUND_SLACK),
            },
        ))
    });

    let mut members = Vec::with_capacity(ns.len());
    let mut failure = None;
    for item in solved {
        let (status, member) = item?;
        if status != Status::Converged {
            failure = Some(FamilyFailure { n: member.n, status });
            break;
        }
        members.push(member);
    }
    Ok(AveragedFamily {
        variant: variant.name().to_string(),
        sup_constant,
        members,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::MapDescriptor;

    fn square() -> Vec<Point> {
        [[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]]
            .iter()
            .map(|c| Point::from_slice(c))
            .collect()
    }

    #[test]
    fn anchored_closed_form() {
        let t = MapDescriptor::affine(vec![vec![0.5, 0.0], vec![0.0, 0.5]], vec![0.0, 0.0]).unwrap();
        let v = AveragedVariant::SapfAnchor {
            b: Point::from_slice(&[1.0, 1.0]),
            sample_k: square(),
        };
        let fam = averaged_family(&t, &NormDescriptor::PlanarMax, &v, 10, &SolverConfig::new(1e-14, 10_000))
            .unwrap();
        assert!((fam.sup_constant.unwrap() - 2.1).abs() < 1e-12);
        assert_eq!(fam.members.len(), 9);
        for m in &fam.members {
            let n = m.n as f64;
            assert!((m.point.coords()[0] - 1.0 / (n + 1.0)).abs() < 1e-12);
            assert!((m.norm_x_minus_tx - 1.0 / (n + 1.0)).abs() < 1e-12);
            assert_eq!(m.bound_respected, Some(true));
        }
    }

    #[test]
    fn schauder_identity_is_constant() {
        let id = MapDescriptor::affine(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0]).unwrap();
        let c = Point::from_slice(&[0.3, -0.2]);
        let fam = averaged_family(
            &id,
            &NormDescriptor::PlanarMax,
            &AveragedVariant::SchauderAnchor { x0: c.clone() },
            6,
            &SolverConfig::default(),
        )
        .unwrap();
        for m in &fam.members {
            assert_eq!(m.point, c);
            assert_eq!((m.norm_x_minus_tx, m.norm_tx_minus_x), (0.0, 0.0));
            assert_eq!(m.bound, None);
        }
    }

    #[test]
    fn inner_failure_truncates() {
        let t = MapDescriptor::affine(vec![vec![0.5, 0.0], vec![0.0, 0.5]], vec![0.0, 0.0]).unwrap();
        let v = AveragedVariant::SchauderAnchor {
            x0: Point::from_slice(&[1.0, 1.0]),
        };
        let fam = averaged_family(&t, &NormDescriptor::PlanarMax, &v, 8, &SolverConfig::new(1e-14, 2))
            .unwrap();
        let f = fam.failure.unwrap();
        assert_eq!(f.n, 2);
        assert_eq!(f.status, Status::MaxIterExceeded);
        assert!(fam.members.is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = MapDescriptor::scale(0.5);
        let v = AveragedVariant::SchauderAnchor { x0: Point::scalar(1.0) };
        assert!(averaged_family(&t, &NormDescriptor::Upper, &v, 1, &SolverConfig::default()).is_err());
        assert!(averaged_family(&t, &NormDescriptor::PlanarMax, &v, 5, &SolverConfig::default()).is_err());
        let v = AveragedVariant::SapfAnchor {
            b: Point::scalar(1.0),
            sample_k: vec![],
        };
        assert_eq!(
            averaged_family(&t, &NormDescriptor::Upper, &v, 5, &SolverConfig::default()).unwrap_err(),
            Error::EmptySample
        );
    }
}
