//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Brent's method: inverse quadratic / secant steps guarded by bisection.
///
/// Requires `f(lo)` and `f(hi)` of opposite sign (or one of them zero).
pub fn brent<F>(f: F, lo: f64, hi: f64, abs_tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "f({a}) = {fa} and f({b}) = {fb} have the same sign"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * abs_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
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
        fb = f(b);
    }
    Err(Error::Convergence(format!(
        "Brent did not reach {abs_tol:e} within {max_iter} iterations (last bracket [{b}, {c}])"
    )))
}

/// Outcome of scanning a geometric grid for sign changes of `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignScan {
    /// Bracket around the first sign change.
    pub first: (f64, f64),
    /// Brackets of any later sign changes seen on the grid.
    pub later: Vec<(f64, f64)>,
}

/// Evaluates `f` on `from, from·factor, ...` up to `to` and reports the
/// sign-change brackets in increasing order.
pub fn scan_geometric<F>(f: F, from: f64, to: f64, factor: f64) -> Result<SignScan>
where
    F: Fn(f64) -> f64,
{
    assert!(from > 0.0 && to > from && factor > 1.0);
    let mut brackets = Vec::new();
    let mut x = from;
    let mut fx = f(x);
    while x < to {
        let next = (x * factor).min(to);
        let fnext = f(next);
        if fx == 0.0 {
            brackets.push((x, x));
        } else if fx.signum() != fnext.signum() && fnext != 0.0 {
            brackets.push((x, next));
        }
        x = next;
        fx = fnext;
    }
    if fx == 0.0 {
        brackets.push((x, x));
    }
    let mut it = brackets.into_iter();
    match it.next() {
        Some(first) => Ok(SignScan {
            first,
            later: it.collect(),
        }),
        None => Err(Error::Bracket(format!(
            "no sign change on the geometric grid [{from:e}, {to:e}]"
        ))),
    }
}
