//! Safeguarded one-dimensional root finding: geometric bracketing followed
//! by Brent's method.

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("iteration limit reached near x = {last_x}")]
    IterationLimit { last_x: f64 },
    #[error("function returned NaN at x = {x}")]
    NotANumber { x: f64 },
}

/// Scans `n` geometrically spaced points of `[lo, hi]` (`0 < lo < hi`) and
/// returns the first subinterval on which `f` changes sign.
pub fn bracket_geometric<F>(f: F, lo: f64, hi: f64, n: usize) -> Result<(f64, f64), RootError>
where
    F: Fn(f64) -> f64,
{
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    let mut a = lo;
    let mut fa = f(a);
    if fa.is_nan() {
        return Err(RootError::NotANumber { x: a });
    }
    if fa == 0.0 {
        return Ok((a, a));
    }
    for k in 1..n {
        let b = if k == n - 1 { hi } else { lo * ratio.powi(k as i32) };
        let fb = f(b);
        if fb.is_nan() {
            return Err(RootError::NotANumber { x: b });
        }
        if fa.signum() != fb.signum() || fb == 0.0 {
            return Ok((a, b));
        }
        a = b;
        fa = fb;
    }
    Err(RootError::NoSignChange { lo, hi })
}

/// Brent's method on a sign-changing bracket. Falls back to bisection
/// whenever the interpolation step is not safely inside the bracket.
pub fn brent<F>(f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<f64, RootError>
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
    if fa.is_nan() || fb.is_nan() {
        return Err(RootError::NotANumber {
            x: if fa.is_nan() { a } else { b },
        });
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange { lo, hi });
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
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
        if fb.is_nan() {
            return Err(RootError::NotANumber { x: b });
        }
    }
    Err(RootError::IterationLimit { last_x: b })
}

/// Root of `f` on `(lo, hi)` with `0 < lo < hi`, searching in `ln x` so
/// that widely separated scales are treated alike.
pub fn solve_positive<F>(f: F, lo: f64, hi: f64, grid: usize) -> Result<f64, RootError>
where
    F: Fn(f64) -> f64,
{
    let (a, b) = bracket_geometric(&f, lo, hi, grid)?;
    if a == b {
        return Ok(a);
    }
    let g = |u: f64| f(u.exp());
    brent(g, a.ln(), b.ln(), 1e-16, 200).map(f64::exp)
}
