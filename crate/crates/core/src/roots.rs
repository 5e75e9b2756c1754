//! Bracketing root finders for monotone scalar problems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Absolute tolerance on the abscissa.
    pub x_tol: f64,
    /// Stop as soon as `|f(x)| <= f_tol`.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { x_tol: 1e-14, f_tol: 0.0, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Brent's method on a bracket `[a, b]` with `f(a)`, `f(b)` of opposite
/// sign (or one of them zero). Fallible evaluations propagate.
pub fn brent<F>(mut f: F, a: f64, b: f64, fa: f64, fb: f64, opts: RootOptions) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BracketFailure(format!(
            "f({a}) = {fa} and f({b}) = {fb} have the same sign"
        )));
    }

    let (mut a, mut fa, mut b, mut fb) = (a, fa, b, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 || fb.abs() <= opts.f_tol {
            return Ok(Root { x: b, fx: fb, iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Ok(Root { x: b, fx: fb, iterations: opts.max_iter })
}

/// Plain bisection for a decreasing function on `[lo, hi]`; returns the
/// midpoint once the bracket is narrower than `x_tol`.
pub fn bisect_decreasing<F>(mut f: F, mut lo: f64, mut hi: f64, opts: RootOptions) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut iterations = 0;
    while hi - lo > opts.x_tol && iterations < opts.max_iter {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.abs() <= opts.f_tol {
            return Ok(Root { x: mid, fx: fm, iterations });
        }
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok(Root { x, fx: f(x)?, iterations })
}
