use serde::Serialize;

use crate::analysis::SelfMap;
use crate::error::{Error, Result};
use crate::spaces::Point;

/// Decides whether `z` is a convex combination of `vertices` by a phase-I
/// simplex method with Bland's anti-cycling rule.
///
/// Feasibility is accepted when the total artificial infeasibility drops to
/// at most `tol`.
pub fn hull_membership(vertices: &[Point], z: &Point, tol: f64) -> Result<bool> {
    let first = vertices.first().ok_or(Error::EmptySample)?;
    let d = first.dim();
    for v in vertices {
        v.check_dim(d)?;
    }
    z.check_dim(d)?;
    if vertices.iter().all(|v| v == first) {
        return Err(Error::DegenerateVertices);
    }
    Ok(phase_one(vertices, z.coords()) <= tol)
}

/// Minimum of `Σ a_i` subject to `Σ λ_j v_j + a = z`, `Σ λ_j + a_{d} = 1`,
/// `λ, a ≥ 0` (rows sign-normalised so the right-hand side is non-negative).
fn phase_one(vertices: &[Point], z: &[f64]) -> f64 {
    let m = vertices.len();
    let rows = z.len() + 1;
    let cols = m + rows + 1;
    let rhs = cols - 1;
    let mut tab = vec![vec![0.0; cols]; rows];
    for (i, row) in tab.iter_mut().enumerate() {
        let b = if i < z.len() { z[i] } else { 1.0 };
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        for (j, v) in vertices.iter().enumerate() {
            row[j] = sign * if i < z.len() { v.coords()[i] } else { 1.0 };
        }
        row[m + i] = 1.0;
        row[rhs] = sign * b;
    }
    let mut basis: Vec<usize> = (m..m + rows).collect();
    const EPS: f64 = 1e-12;

    loop {
        // reduced costs of the phase-I objective: c_j − Σ_rows a_ij (c = 1 on artificials)
        let entering = (0..m + rows).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let cost = if j >= m { 1.0 } else { 0.0 };
            let reduced = cost - tab.iter().zip(&basis).filter(|(_, &b)| b >= m).map(|(r, _)| r[j]).sum::<f64>();
            reduced < -EPS
        });
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[e] > EPS {
                let ratio = row[rhs] / row[e];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - EPS || (ratio <= lr + EPS && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        // unbounded cannot happen for a phase-I problem bounded below by 0
        let Some((l, _)) = leave else { break };
        let pivot = tab[l][e];
        for c in tab[l].iter_mut() {
            *c /= pivot;
        }
        let prow = tab[l].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != l && row[e] != 0.0 {
                let f = row[e];
                for (c, p) in row.iter_mut().zip(&prow) {
                    *c -= f * p;
                }
            }
        }
        basis[l] = e;
    }
    tab.iter()
        .zip(&basis)
        .filter(|(_, &b)| b >= m)
        .map(|(r, _)| r[rhs].max(0.0))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MchReport {
    pub images: Vec<Point>,
    pub samples_checked: usize,
    /// Samples of `K` outside `conv(T(vertices))`, in sample order.
    pub failures: Vec<Point>,
    /// `false` when some sample fails: `K` is then not minimal invariant.
    pub necessary_condition_holds: bool,
}

/// Tests every sample point of `K = conv(vertices)` for membership in the
/// hull of the images of the vertices.
pub fn mch_check<M: SelfMap + ?Sized>(
    vertices: &[Point],
    map: &M,
    sample: &[Point],
    tol: f64,
) -> Result<MchReport> {
    let first = vertices.first().ok_or(Error::EmptySample)?;
    if vertices.iter().all(|v| v == first) {
        return Err(Error::DegenerateVertices);
    }
    let images = vertices.iter().map(|v| map.apply(v)).collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    for s in sample {
        s.check_dim(first.dim())?;
        let inside = if images.iter().all(|y| y == &images[0]) {
            s.sub(&images[0]).iter().all(|c| c.abs() <= tol)
        } else {
            hull_membership(&images, s, tol)?
        };
        if !inside {
            failures.push(s.clone());
        }
    }
    Ok(MchReport {
        images,
        samples_checked: sample.len(),
        necessary_condition_holds: failures.is_empty(),
        failures,
    })
}
