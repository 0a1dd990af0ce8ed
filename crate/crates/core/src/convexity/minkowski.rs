use crate::error::{Error, Result};
use crate::geometry::hull_membership;
use crate::spaces::Point;

/// Largest scale tried before the ray through `z` is declared to escape.
pub const MAX_SCALE: f64 = 1e6;

const HULL_TOL: f64 = 1e-12;
const BISECTIONS: usize = 60;

/// `p_M(z) = inf{t > 0 : z ∈ t M}` for `M = conv(vertices)`.
///
/// `hi` doubles from 1 until `z ∈ hi·M`, then `[0, hi]` is bisected until
/// its width is at most `tol / 4` (at most 60 halvings). Returns the upper
/// end of the bracket.
pub fn minkowski_functional(vertices: &[Point], z: &Point, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    if z.coords().iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidArgument("z must be non-zero".into()));
    }
    let inside = |t: f64| -> Result<bool> {
        let scaled: Vec<Point> = vertices
            .iter()
            .map(|v| Point::new(v.coords().iter().map(|c| t * c).collect()))
            .collect::<Result<_>>()?;
        hull_membership(&scaled, z, HULL_TOL)
    };
    let mut hi = 1.0;
    while !inside(hi)? {
        hi *= 2.0;
        if hi > MAX_SCALE {
            return Err(Error::RayEscapes(MAX_SCALE));
        }
    }
    let mut lo = 0.0;
    for _ in 0..BISECTIONS {
        if hi - lo <= tol / 4.0 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if inside(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
