//! Dense sampling of transformed functions into Hermite tables.

use crate::model::{Table, Tail};
use crate::Result;

/// Ratio between consecutive geometric nodes.
pub(crate) const RATIO: f64 = 1.005;

/// `{0}` followed by geometric nodes from `lo` to (at least) `hi`.
pub(crate) fn geometric_nodes(lo: f64, hi: f64) -> Vec<f64> {
    let n = ((hi / lo).ln() / RATIO.ln()).ceil() as usize;
    let q = (hi / lo).powf(1.0 / n as f64);
    let mut v = Vec::with_capacity(n + 2);
    v.push(0.0);
    v.extend((0..=n).map(|k| lo * q.powi(k as i32)));
    let last = v.len() - 1;
    v[last] = hi;
    v
}

/// Exponent of the power law through the last two nodes, 0 if undefined.
pub(crate) fn tail_exponent(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (y0, y1) = (y[n - 2], y[n - 1]);
    if y0 * y1 > 0.0 {
        let e = (y1 / y0).ln() / (x[n - 1] / x[n - 2]).ln();
        if e.is_finite() {
            return e;
        }
    }
    0.0
}

/// Build a table from samples `(value, slope)`; a non-finite value at the
/// first node is replaced by the next one, a non-finite slope by the secant.
pub(crate) fn hermite_table(
    x: Vec<f64>,
    mut y: Vec<f64>,
    mut d: Vec<f64>,
    tail: Option<Tail>,
) -> Result<Table> {
    if !y[0].is_finite() {
        y[0] = y[1];
        d[0] = 0.0;
    }
    let n = x.len();
    for k in 0..n {
        if !d[k].is_finite() {
            let (a, b) = if k + 1 < n { (k, k + 1) } else { (k - 1, k) };
            d[k] = (y[b] - y[a]) / (x[b] - x[a]);
        }
    }
    let tail = tail.unwrap_or_else(|| Tail::Power {
        exponent: tail_exponent(&x, &y),
    });
    Table::with_slopes(x, y, d, tail)
}

/// Sample `f(s) -> (value, slope)` on `nodes`.
pub(crate) fn sample<F: Fn(f64) -> Result<(f64, f64)>>(
    nodes: &[f64],
    f: F,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut y = Vec::with_capacity(nodes.len());
    let mut d = Vec::with_capacity(nodes.len());
    for &s in nodes {
        let (v, sl) = f(s)?;
        y.push(v);
        d.push(sl);
    }
    Ok((y, d))
}
