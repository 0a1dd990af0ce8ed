use serde::Serialize;

use crate::spaces::Point;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub point: Point,
    /// `d(x_n, x_{n+1})`.
    pub d_fwd_step: f64,
    /// `d(x_{n+1}, x_n)`.
    pub d_bwd_step: f64,
    pub bound: Option<f64>,
}

/// One row per iteration actually performed.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ConvergenceTrace {
    pub rows: Vec<TraceRow>,
}

/// Fixed 17-significant-digit rendering used by every machine-readable output.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl ConvergenceTrace {
    /// CSV with header `n,x0,…,x{d-1},d_fwd_step,d_bwd_step,bound`; the bound
    /// cell is empty when the solver defines no bound.
    pub fn to_csv(&self, dim: usize) -> String {
        let mut out = String::from("n");
        for k in 0..dim {
            out.push_str(&format!(",x{k}"));
        }
        out.push_str(",d_fwd_step,d_bwd_step,bound\n");
        for r in &self.rows {
            out.push_str(&r.n.to_string());
            for c in r.point.coords() {
                out.push(',');
                out.push_str(&format_float(*c));
            }
            out.push(',');
            out.push_str(&format_float(r.d_fwd_step));
            out.push(',');
            out.push_str(&format_float(r.d_bwd_step));
            out.push(',');
            if let Some(b) = r.bound {
                out.push_str(&format_float(b));
            }
            out.push('\n');
        }
        out
    }
}
