use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::spaces::{AsymmetricNorm, NormDescriptor, Point};

pub const DEFAULT_GRID_Q: usize = 20;

const SUM_TOL: f64 = 1e-12;
const DESCENT_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 200;
const LINE_STEPS: usize = 100;

/// Non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "Vec<f64>")]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("simplex weights must be non-empty".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(format!("negative or non-finite weight in {weights:?}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidArgument(format!("weights sum to {sum}, not 1")));
        }
        Ok(SimplexWeights(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `Σ α_j x_j`.
    pub fn combine(&self, points: &[Point]) -> Result<Point> {
        combine(&self.0, points)
    }
}

impl From<SimplexWeights> for Vec<f64> {
    fn from(w: SimplexWeights) -> Self {
        w.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MazurOutcome {
    /// `achieved ≤ eps`.
    pub found: bool,
    pub weights: SimplexWeights,
    pub y: Point,
    /// `‖x0 − y|` at the best weights found.
    pub achieved: f64,
}

fn combine(w: &[f64], points: &[Point]) -> Result<Point> {
    let mut y = vec![0.0; points[0].dim()];
    for (a, p) in w.iter().zip(points) {
        for (c, v) in y.iter_mut().zip(p.coords()) {
            *c += a * v;
        }
    }
    Point::new(y)
}

struct Objective<'a> {
    seq: &'a [Point],
    x0: &'a Point,
    norm: &'a NormDescriptor,
}

impl Objective<'_> {
    fn eval(&self, w: &[f64]) -> f64 {
        let mut r = self.x0.coords().to_vec();
        for (a, p) in w.iter().zip(self.seq) {
            for (c, v) in r.iter_mut().zip(p.coords()) {
                *c -= a * v;
            }
        }
        self.norm.norm_of(&r)
    }
}

pub fn mazur_approximation(
    seq: &[Point],
    x0: &Point,
    norm: &NormDescriptor,
    eps: f64,
    grid_q: usize,
) -> Result<MazurOutcome> {
    mazur_approximation_with(Execution::default(), seq, x0, norm, eps, grid_q)
}

/// Minimises `α ↦ ‖x0 − Σ α_j x_j|` over the simplex: exhaustive search on
/// the grid of multiples of `1/grid_q`, then pairwise mass-transfer descent.
///
/// Grid points are enumerated with the first weight descending, so among
/// equal values the earliest (lexicographically largest) weight vector wins.
pub fn mazur_approximation_with(
    exec: Execution,
    seq: &[Point],
    x0: &Point,
    norm: &NormDescriptor,
    eps: f64,
    grid_q: usize,
) -> Result<MazurOutcome> {
    let first = seq.first().ok_or(Error::EmptySample)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if grid_q == 0 {
        return Err(Error::InvalidArgument("grid_q must be at least 1".into()));
    }
    norm.validate()?;
    let dim = norm.dim().unwrap_or(first.dim());
    for p in seq.iter().chain(std::iter::once(x0)) {
        p.check_dim(dim)?;
    }
    let f = Objective { seq, x0, norm };
    let m = seq.len();

    let heads: Vec<usize> = (0..=grid_q).rev().collect();
    let best = exec
        .map(&heads, |&head| {
            let mut counts = vec![0usize; m];
            counts[0] = head;
            let mut best: Option<(f64, Vec<usize>)> = None;
            enumerate(&mut counts, 1, grid_q - head, &mut |c| {
                let w: Vec<f64> = c.iter().map(|&k| k as f64 / grid_q as f64).collect();
                let v = f.eval(&w);
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, c.to_vec()));
                }
            });
            best
        })
        .into_iter()
        .flatten()
        .fold(None::<(f64, Vec<usize>)>, |acc, cand| match acc {
            Some(a) if a.0 <= cand.0 => Some(a),
            _ => Some(cand),
        })
        .expect("simplex grid is non-empty");

    let mut w: Vec<f64> = best.1.iter().map(|&k| k as f64 / grid_q as f64).collect();
    let mut value = best.0;
    descend(&f, &mut w, &mut value);

    let weights = SimplexWeights::new(w)?;
    let y = weights.combine(seq)?;
    Ok(MazurOutcome {
        found: value <= eps,
        weights,
        y,
        achieved: value,
    })
}

/// Visits every way to distribute `remaining` units over `counts[pos..]`,
/// with earlier coordinates taking the largest share first.
fn enumerate(counts: &mut [usize], pos: usize, remaining: usize, visit: &mut dyn FnMut(&[usize])) {
    if pos == counts.len() {
        if remaining == 0 {
            visit(counts);
        }
        return;
    }
    if pos == counts.len() - 1 {
        counts[pos] = remaining;
        visit(counts);
        counts[pos] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        counts[pos] = k;
        enumerate(counts, pos + 1, remaining - k, visit);
    }
    counts[pos] = 0;
}

/// Coordinate-pair descent: move mass `t` from `j` to `i`, with `t` chosen
/// by golden-section search on `[−w_i, w_j]`, until no pair improves by more
/// than the descent tolerance.
fn descend(f: &Objective<'_>, w: &mut [f64], value: &mut f64) {
    let m = w.len();
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..MAX_SWEEPS {
        let mut improved = false;
        for i in 0..m {
            for j in i + 1..m {
                let (lo0, hi0) = (-w[i], w[j]);
                if hi0 - lo0 <= 0.0 {
                    continue;
                }
                let at = |t: f64, w: &mut [f64]| {
                    let (wi, wj) = (w[i], w[j]);
                    w[i] = (wi + t).max(0.0);
                    w[j] = (wj - t).max(0.0);
                    let v = f.eval(w);
                    w[i] = wi;
                    w[j] = wj;
                    v
                };
                let (mut lo, mut hi) = (lo0, hi0);
                let mut a = hi - phi * (hi - lo);
                let mut b = lo + phi * (hi - lo);
                let (mut fa, mut fb) = (at(a, w), at(b, w));
                for _ in 0..LINE_STEPS {
                    if fa <= fb {
                        hi = b;
                        b = a;
                        fb = fa;
                        a = hi - phi * (hi - lo);
                        fa = at(a, w);
                    } else {
                        lo = a;
                        a = b;
                        fa = fb;
                        b = lo + phi * (hi - lo);
                        fb = at(b, w);
                    }
                }
                let mut cands = [(lo0, at(lo0, w)), (hi0, at(hi0, w)), (a, fa), (b, fb)];
                cands.sort_by(|x, y| x.1.total_cmp(&y.1));
                let (t, v) = cands[0];
                if v < *value - DESCENT_TOL {
                    w[i] = (w[i] + t).max(0.0);
                    w[j] = (w[j] - t).max(0.0);
                    *value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    let sum: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= sum;
    }
    *value = f.eval(w);
}
