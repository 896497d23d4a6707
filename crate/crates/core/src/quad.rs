//! Adaptive Simpson quadrature.

use crate::{Error, Result};

/// Default absolute tolerance.
pub const TOL: f64 = 1e-12;
/// Maximum interval bisection depth.
pub const MAX_DEPTH: u32 = 40;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Fails if a non-finite value is met or if the bisection cap is reached
/// before the local error estimate drops below its share of `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let v = recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Quadrature(format!(
            "non-finite integral on [{a}, {b}]"
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite integrand near {m}")));
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (m - a) <= f64::EPSILON * m.abs().max(1e-300) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "bisection cap reached on [{a}, {b}] (estimate {delta:e})"
        )));
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Composite trapezoid rule on tabulated values with uniform spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            h * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}
