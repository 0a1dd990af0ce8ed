//! Goebel–Karlovitz diagnostic: along a fixed-point approximating sequence
//! of a minimal invariant set `K`, `‖x_n − x| → Diam(K)` for every `x ∈ K`.
//!
//! The limit is estimated by the mean over the last quarter of the family.
//! A large gap for some `x` is evidence that `K` is *not* minimal; agreement
//! never proves minimality.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::diameter_of;
use crate::spaces::{AsymmetricNorm, NormDescriptor, Point};

const GAP_FRACTION: f64 = 0.1;
const GAP_FLOOR: f64 = 1e-9;
const MIN_FAMILY: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GkVerdict {
    ConsistentWithMinimal,
    Inconsistent,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GkPoint {
    pub x: Point,
    pub tail_mean: f64,
    pub gap: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GkReport {
    pub verdict: GkVerdict,
    pub diameter: f64,
    pub tail_length: usize,
    pub points: Vec<GkPoint>,
}

/// `family` is the sequence `x_n` (e.g. [`super::AveragedFamily::points`]).
/// Families shorter than four entries give [`GkVerdict::Undetermined`].
pub fn gk_diagnostic(family: &[Point], sample_k: &[Point], norm: &NormDescriptor) -> Result<GkReport> {
    let first = sample_k.first().ok_or(Error::EmptySample)?;
    let dim = norm.dim().unwrap_or(first.dim());
    for p in sample_k.iter().chain(family) {
        p.check_dim(dim)?;
    }
    let diameter = diameter_of(sample_k, norm);
    if family.len() < MIN_FAMILY {
        return Ok(GkReport {
            verdict: GkVerdict::Undetermined,
            diameter,
            tail_length: 0,
            points: Vec::new(),
        });
    }
    let tail_length = family.len() / 4;
    let tail = &family[family.len() - tail_length..];
    let threshold = GAP_FRACTION * diameter + GAP_FLOOR;
    let points: Vec<GkPoint> = sample_k
        .iter()
        .map(|x| {
            let tail_mean =
                tail.iter().map(|xn| norm.norm_of(&xn.sub(x))).sum::<f64>() / tail_length as f64;
            let gap = (tail_mean - diameter).abs();
            GkPoint {
                x: x.clone(),
                tail_mean,
                gap,
                flagged: gap > threshold,
            }
        })
        .collect();
    let verdict = if points.iter().any(|p| p.flagged) {
        GkVerdict::Inconsistent
    } else {
        GkVerdict::ConsistentWithMinimal
    };
    Ok(GkReport {
        verdict,
        diameter,
        tail_length,
        points,
    })
}
