//! Sample-based certificates for the asymmetric distance axioms (AD1–AD3)
//! and the asymmetric norm axioms (AN1–AN4).
//!
//! A clean report only says the axioms hold on the sample; every violation
//! carries the points that witness it.

use serde::{Deserialize, Serialize};

use super::distance::AsymmetricDistance;
use super::norm::AsymmetricNorm;
use super::point::Point;
use crate::error::{Error, Result};
use crate::exec::Execution;

pub const DEFAULT_AXIOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom")]
pub enum Violation {
    /// `p(x, y) < 0`.
    AD1 { x: Point, y: Point, value: f64 },
    /// Distinct points at zero distance both ways, or `p(x, x) ≠ 0`.
    AD2 {
        x: Point,
        y: Point,
        forward: f64,
        backward: f64,
    },
    /// `p(x, z) > p(x, y) + p(y, z)`.
    AD3 {
        x: Point,
        y: Point,
        z: Point,
        excess: f64,
    },
    /// `‖v| < 0`.
    AN1 { v: Point, value: f64 },
    /// `‖v| = ‖−v| = 0` for non-zero `v`.
    AN2 { v: Point },
    /// `‖λv| ≠ λ‖v|`.
    AN3 { v: Point, lambda: f64, error: f64 },
    /// `‖u + v| > ‖u| + ‖v|`.
    AN4 { u: Point, v: Point, excess: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub sample_size: usize,
    pub tol: f64,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_sample(sample: &[Point], dim: Option<usize>) -> Result<()> {
    let first = sample.first().ok_or(Error::EmptySample)?;
    let d = dim.unwrap_or(first.dim());
    sample.iter().try_for_each(|p| p.check_dim(d))
}

pub fn check_distance_axioms<D: AsymmetricDistance + ?Sized>(
    dist: &D,
    sample: &[Point],
    tol: f64,
) -> Result<AxiomReport> {
    check_distance_axioms_with(Execution::default(), dist, sample, tol)
}

pub fn check_distance_axioms_with<D: AsymmetricDistance + ?Sized>(
    exec: Execution,
    dist: &D,
    sample: &[Point],
    tol: f64,
) -> Result<AxiomReport> {
    check_sample(sample, dist.dim())?;
    let n = sample.len();
    let table: Vec<Vec<f64>> = exec
        .map_range(n, |i| {
            sample
                .iter()
                .map(|y| dist.distance(&sample[i], y))
                .collect::<Result<Vec<f64>>>()
        })
        .into_iter()
        .collect::<Result<_>>()?;

    let per_x: Vec<Vec<Violation>> = exec.map_range(n, |i| {
        let x = &sample[i];
        let mut out = Vec::new();
        for j in 0..n {
            let y = &sample[j];
            let pxy = table[i][j];
            if pxy < -tol {
                out.push(Violation::AD1 {
                    x: x.clone(),
                    y: y.clone(),
                    value: pxy,
                });
            }
            let same = x == y;
            if same && pxy.abs() > tol {
                out.push(Violation::AD2 {
                    x: x.clone(),
                    y: y.clone(),
                    forward: pxy,
                    backward: table[j][i],
                });
            }
            if !same && i < j && pxy <= tol && table[j][i] <= tol {
                out.push(Violation::AD2 {
                    x: x.clone(),
                    y: y.clone(),
                    forward: pxy,
                    backward: table[j][i],
                });
            }
            for k in 0..n {
                let excess = table[i][k] - pxy - table[j][k];
                if excess > tol {
                    out.push(Violation::AD3 {
                        x: x.clone(),
                        y: y.clone(),
                        z: sample[k].clone(),
                        excess,
                    });
                }
            }
        }
        out
    });

    Ok(AxiomReport {
        sample_size: n,
        tol,
        violations: per_x.into_iter().flatten().collect(),
    })
}

pub fn check_norm_axioms<N: AsymmetricNorm + ?Sized>(
    norm: &N,
    sample: &[Point],
    scalars: &[f64],
    tol: f64,
) -> Result<AxiomReport> {
    check_norm_axioms_with(Execution::default(), norm, sample, scalars, tol)
}

pub fn check_norm_axioms_with<N: AsymmetricNorm + ?Sized>(
    exec: Execution,
    norm: &N,
    sample: &[Point],
    scalars: &[f64],
    tol: f64,
) -> Result<AxiomReport> {
    check_sample(sample, norm.dim())?;
    if let Some(l) = scalars.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "scalars must be non-negative, got {l}"
        )));
    }
    let per_v: Vec<Vec<Violation>> = exec.map(sample, |v| {
        let mut out = Vec::new();
        let c = v.coords();
        let nv = norm.norm_of(c);
        if nv < -tol {
            out.push(Violation::AN1 {
                v: v.clone(),
                value: nv,
            });
        }
        let neg: Vec<f64> = c.iter().map(|x| -x).collect();
        if v.sup_norm() > tol && nv <= tol && norm.norm_of(&neg) <= tol {
            out.push(Violation::AN2 { v: v.clone() });
        }
        for &lambda in scalars {
            let scaled: Vec<f64> = c.iter().map(|x| lambda * x).collect();
            let error = (norm.norm_of(&scaled) - lambda * nv).abs();
            if error > tol {
                out.push(Violation::AN3 {
                    v: v.clone(),
                    lambda,
                    error,
                });
            }
        }
        for u in sample {
            let sum: Vec<f64> = u.coords().iter().zip(c).map(|(a, b)| a + b).collect();
            let excess = norm.norm_of(&sum) - norm.norm_of(u.coords()) - nv;
            if excess > tol {
                out.push(Violation::AN4 {
                    u: u.clone(),
                    v: v.clone(),
                    excess,
                });
            }
        }
        out
    });
    Ok(AxiomReport {
        sample_size: sample.len(),
        tol,
        violations: per_v.into_iter().flatten().collect(),
    })
}
