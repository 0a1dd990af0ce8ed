use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{AsymmetricNorm, NormDescriptor, Point};

pub const DEFAULT_GEOMETRY_TOL: f64 = 1e-9;

/// A non-empty finite set of distinct points in an asymmetric normed space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSubset")]
pub struct FiniteSubset {
    points: Vec<Point>,
    norm: NormDescriptor,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubset {
    points: Vec<Point>,
    norm: NormDescriptor,
}

impl TryFrom<RawSubset> for FiniteSubset {
    type Error = Error;

    fn try_from(raw: RawSubset) -> Result<Self> {
        FiniteSubset::new(raw.points, raw.norm)
    }
}

impl FiniteSubset {
    pub fn new(points: Vec<Point>, norm: NormDescriptor) -> Result<Self> {
        norm.validate()?;
        let first = points.first().ok_or(Error::EmptySample)?;
        let dim = norm.dim().unwrap_or(first.dim());
        for (i, p) in points.iter().enumerate() {
            p.check_dim(dim)?;
            if points[..i].contains(p) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate point {:?} in finite subset",
                    p.coords()
                )));
            }
        }
        Ok(FiniteSubset { points, norm })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn norm(&self) -> &NormDescriptor {
        &self.norm
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn contains(&self, u: &Point) -> bool {
        self.points.contains(u)
    }

    fn check_point(&self, u: &Point) -> Result<()> {
        u.check_dim(self.dim())
    }
}

/// `max ‖v − u|` over ordered pairs of `points`; zero for fewer than two.
pub fn diameter_of(points: &[Point], norm: &NormDescriptor) -> f64 {
    let mut diam = 0.0f64;
    for u in points {
        for v in points {
            diam = diam.max(norm.norm_of(&v.sub(u)));
        }
    }
    diam
}

pub fn diameter(k: &FiniteSubset) -> f64 {
    diameter_of(&k.points, &k.norm)
}

/// `r^f_u(K) = max_{v ∈ K} ‖v − u|`.
pub fn forward_radius(u: &Point, k: &FiniteSubset) -> Result<f64> {
    k.check_point(u)?;
    Ok(k.points
        .iter()
        .fold(0.0, |r, v| r.max(k.norm.norm_of(&v.sub(u)))))
}

/// `r^b_u(K) = max_{v ∈ K} ‖u − v|`.
pub fn backward_radius(u: &Point, k: &FiniteSubset) -> Result<f64> {
    k.check_point(u)?;
    Ok(k.points
        .iter()
        .fold(0.0, |r, v| r.max(k.norm.norm_of(&u.sub(v)))))
}

pub fn is_forward_diametral(u: &Point, k: &FiniteSubset, tol: f64) -> Result<bool> {
    k.check_point(u)?;
    if !k.contains(u) {
        return Err(Error::InvalidArgument(format!(
            "point {:?} is not a member of the subset",
            u.coords()
        )));
    }
    Ok(diameter(k) - forward_radius(u, k)? <= tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondiametralProbe {
    pub diameter: f64,
    /// First point with `r^f_u < Diam − tol`, if any.
    pub witness: Option<Point>,
    pub witness_radius: Option<f64>,
    /// `Diam = 0`: the set is excluded from the normal-structure condition.
    pub degenerate: bool,
}

pub fn find_forward_nondiametral(k: &FiniteSubset, tol: f64) -> NondiametralProbe {
    let diam = diameter(k);
    let mut probe = NondiametralProbe {
        diameter: diam,
        witness: None,
        witness_radius: None,
        degenerate: diam == 0.0,
    };
    for u in &k.points {
        let r = k
            .points
            .iter()
            .fold(0.0f64, |r, v| r.max(k.norm.norm_of(&v.sub(u))));
        if r < diam - tol {
            probe.witness = Some(u.clone());
            probe.witness_radius = Some(r);
            break;
        }
    }
    probe
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundedWitness {
    pub center: Point,
    pub r0: f64,
    pub f_contained: bool,
    pub b_contained: bool,
}

/// Centre at the first point with `r0 = Diam + 1`, and check `K` lies in
/// both open balls `B^f(center, r0)` and `B^b(center, r0)`.
pub fn bounded_witness(k: &FiniteSubset) -> BoundedWitness {
    let center = k.points[0].clone();
    let r0 = diameter(k) + 1.0;
    let f_contained = k
        .points
        .iter()
        .all(|v| k.norm.norm_of(&v.sub(&center)) < r0);
    let b_contained = k
        .points
        .iter()
        .all(|v| k.norm.norm_of(&center.sub(v)) < r0);
    BoundedWitness {
        center,
        r0,
        f_contained,
        b_contained,
    }
}
