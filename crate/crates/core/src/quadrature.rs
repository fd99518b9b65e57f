//! Small quadrature helpers shared by the kinematics and field modules.

use crate::error::{Error, Result};

/// Composite Simpson rule on a strictly increasing, possibly non-uniform grid.
///
/// Pairs of intervals use the three-point non-uniform Simpson weights. When the
/// number of intervals is odd the last interval is closed with the matching
/// three-point end correction, so the rule stays exact for quadratics. Two samples
/// fall back to the trapezoid rule.
pub fn simpson(grid: &[f64], values: &[f64]) -> Result<f64> {
    if grid.len() != values.len() {
        return Err(Error::Grid(format!(
            "grid has {} points but {} values",
            grid.len(),
            values.len()
        )));
    }
    if grid.len() < 2 {
        return Err(Error::Grid("need at least two samples".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid("grid must be strictly increasing".into()));
    }
    let n = grid.len() - 1;
    if n == 1 {
        return Ok(0.5 * (grid[1] - grid[0]) * (values[0] + values[1]));
    }

    let mut total = 0.0;
    let mut i = 0;
    while i + 2 <= n {
        let h0 = grid[i + 1] - grid[i];
        let h1 = grid[i + 2] - grid[i + 1];
        let hs = h0 + h1;
        total += hs / 6.0
            * ((2.0 - h1 / h0) * values[i]
                + hs * hs / (h0 * h1) * values[i + 1]
                + (2.0 - h0 / h1) * values[i + 2]);
        i += 2;
    }
    if n % 2 == 1 {
        let h0 = grid[n - 1] - grid[n - 2];
        let h1 = grid[n] - grid[n - 1];
        total += values[n] * (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1))
            + values[n - 1] * (h1 * h1 + 3.0 * h1 * h0) / (6.0 * h0)
            - values[n - 2] * h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    }
    Ok(total)
}

/// Adaptive Simpson integration of a smooth function over `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // The last bound stops refinement once delta is rounding noise.
    if depth == 0
        || delta.abs() <= 15.0 * tol
        || delta.abs() <= 64.0 * f64::EPSILON * (left.abs() + right.abs())
    {
        return left + right + delta / 15.0;
    }
    adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
