//! Finite-prefix diagnostics for f/b-convergence and f/b-Cauchy sequences.
//!
//! Index order matters everywhere here: the f-Cauchy condition looks at
//! `p(x_n, x_m)` and the b-Cauchy condition at `p(x_m, x_n)`, both for
//! `m ≥ n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaces::{AsymmetricDistance, Direction, Point};

/// `[p(limit, x_n)]` for the forward direction, `[p(x_n, limit)]` for the
/// backward one.
pub fn convergence_residuals<D: AsymmetricDistance + ?Sized>(
    seq: &[Point],
    limit: &Point,
    dist: &D,
    direction: Direction,
) -> Result<Vec<f64>> {
    if seq.is_empty() {
        return Err(Error::EmptySample);
    }
    seq.iter()
        .map(|x| match direction {
            Direction::Forward => dist.distance(limit, x),
            Direction::Backward => dist.distance(x, limit),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CauchyVerdict {
    /// Every ordered pair `m ≥ n ≥ threshold` of the prefix is within `eps`.
    Pass { threshold: usize },
    /// A pair in the second half of the prefix at distance `≥ eps`.
    Fail { n: usize, m: usize, value: f64 },
}

impl CauchyVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, CauchyVerdict::Pass { .. })
    }
}

/// Looks for the smallest `N` such that all pairs `m ≥ n ≥ N` of the prefix
/// are closer than `eps` (in the order fixed by `direction`), and passes when
/// `N` is at most half the prefix length.
pub fn cauchy_prefix<D: AsymmetricDistance + ?Sized>(
    seq: &[Point],
    dist: &D,
    eps: f64,
    direction: Direction,
) -> Result<CauchyVerdict> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if seq.len() < 2 {
        return Err(Error::InvalidArgument("need at least two terms".into()));
    }
    let len = seq.len();
    // worst[n] = (value, m) maximising the directed distance over m ≥ n.
    let mut worst = Vec::with_capacity(len);
    for n in 0..len {
        let mut best = (0.0f64, n);
        for m in n..len {
            let v = match direction {
                Direction::Forward => dist.distance(&seq[n], &seq[m])?,
                Direction::Backward => dist.distance(&seq[m], &seq[n])?,
            };
            if v > best.0 {
                best = (v, m);
            }
        }
        worst.push(best);
    }
    let threshold = (0..len)
        .rev()
        .take_while(|&n| worst[n].0 < eps)
        .last()
        .unwrap_or(len);
    let half = len / 2;
    if threshold <= half {
        return Ok(CauchyVerdict::Pass { threshold });
    }
    let n = (half..len)
        .find(|&n| worst[n].0 >= eps)
        .expect("threshold above half implies a violation in the tail");
    Ok(CauchyVerdict::Fail {
        n,
        m: worst[n].1,
        value: worst[n].0,
    })
}

pub fn is_f_cauchy_prefix<D: AsymmetricDistance + ?Sized>(
    seq: &[Point],
    dist: &D,
    eps: f64,
) -> Result<CauchyVerdict> {
    cauchy_prefix(seq, dist, eps, Direction::Forward)
}

pub fn is_b_cauchy_prefix<D: AsymmetricDistance + ?Sized>(
    seq: &[Point],
    dist: &D,
    eps: f64,
) -> Result<CauchyVerdict> {
    cauchy_prefix(seq, dist, eps, Direction::Backward)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum K12Verdict {
    /// `p(limit, x_n) < eps` for every `n` in `threshold..=last`.
    Consistent { threshold: usize, last: usize },
    Inconsistent { n: usize, value: f64 },
    /// The prefix does not meet the hypotheses at `eps / 2`.
    Undetermined { reason: String },
}

/// Checks on a finite prefix that a b-Cauchy sequence with an f-convergent
/// subsequence is itself f-convergent: past the combined threshold every
/// forward residual `p(limit, x_n)` must be below `eps`.
pub fn verify_prop_k12<D: AsymmetricDistance + ?Sized>(
    seq: &[Point],
    subseq_indices: &[usize],
    limit: &Point,
    dist: &D,
    eps: f64,
) -> Result<K12Verdict> {
    if subseq_indices.is_empty() {
        return Err(Error::InvalidArgument("empty subsequence".into()));
    }
    if subseq_indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("subsequence indices must increase".into()));
    }
    let last = *subseq_indices.last().unwrap();
    if last >= seq.len() {
        return Err(Error::InvalidArgument(format!(
            "subsequence index {last} out of range for a prefix of length {}",
            seq.len()
        )));
    }
    let half_eps = eps / 2.0;
    let cauchy_threshold = match is_b_cauchy_prefix(seq, dist, half_eps)? {
        CauchyVerdict::Pass { threshold } => threshold,
        CauchyVerdict::Fail { n, m, value } => {
            return Ok(K12Verdict::Undetermined {
                reason: format!("not b-Cauchy at eps/2: p(x_{m}, x_{n}) = {value}"),
            })
        }
    };
    let sub: Vec<Point> = subseq_indices.iter().map(|&i| seq[i].clone()).collect();
    let residuals = convergence_residuals(&sub, limit, dist, Direction::Forward)?;
    let k0 = (0..residuals.len())
        .rev()
        .take_while(|&k| residuals[k] < half_eps)
        .last();
    let k0 = match k0 {
        Some(k) if k <= residuals.len() / 2 => k,
        _ => {
            return Ok(K12Verdict::Undetermined {
                reason: "subsequence residuals do not stay below eps/2 on the tail".into(),
            })
        }
    };
    let threshold = cauchy_threshold.max(subseq_indices[k0]);
    for (n, x) in seq.iter().enumerate().take(last + 1).skip(threshold) {
        let value = dist.distance(limit, x)?;
        if value >= eps {
            return Ok(K12Verdict::Inconsistent { n, value });
        }
    }
    Ok(K12Verdict::Consistent { threshold, last })
}
