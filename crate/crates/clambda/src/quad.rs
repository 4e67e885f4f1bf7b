//! Double-exponential quadrature: tanh-sinh on [a, b], exp-sinh on [a, ∞).
//!
//! Integrands receive `(x, x - a, b - x)` so that endpoint factors such as
//! (1 - y)^c can be formed without cancellation.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

pub const MAX_LEVEL: usize = 12;
const T_MAX_FINITE: f64 = 6.1;
const T_MAX_HALF: f64 = 4.5;
const NOISE_SLACK: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evals: usize,
}

struct Node {
    x: f64,
    dl: f64,
    dr: f64,
    w: f64,
}

fn tanh_sinh_node(t: f64, a: f64, b: f64) -> Option<Node> {
    let hw = 0.5 * (b - a);
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    let delta = 2.0 * e / (1.0 + e);
    if delta == 0.0 {
        return None;
    }
    let ch = (u.abs()).cosh();
    let w = hw * FRAC_PI_2 * t.cosh() / (ch * ch);
    let (dl, dr) = if t < 0.0 { (hw * delta, 2.0 * hw - hw * delta) } else { (2.0 * hw - hw * delta, hw * delta) };
    let x = if t < 0.0 { a + dl } else { b - dr };
    if dl <= 0.0 || dr <= 0.0 {
        return None;
    }
    Some(Node { x, dl, dr, w })
}

fn exp_sinh_node(t: f64, a: f64) -> Option<Node> {
    let s = FRAC_PI_2 * t.sinh();
    if s > 700.0 {
        return None;
    }
    let d = s.exp();
    if d == 0.0 {
        return None;
    }
    let w = FRAC_PI_2 * t.cosh() * d;
    Some(Node { x: a + d, dl: d, dr: f64::INFINITY, w })
}

fn de_integrate<M, F>(map: M, mut f: F, tol: f64, abs_tol: f64, t_max: f64) -> Result<QuadResult>
where
    M: Fn(f64) -> Option<Node>,
    F: FnMut(f64, f64, f64) -> f64,
{
    let mut evals = 0usize;
    let mut eval = |t: f64, evals: &mut usize| -> Result<f64> {
        match map(t) {
            None => Ok(0.0),
            Some(n) => {
                *evals += 1;
                let v = f(n.x, n.dl, n.dr);
                if !v.is_finite() {
                    return Err(Error::QuadratureFailure(format!(
                        "non-finite integrand {v} at x = {:e}",
                        n.x
                    )));
                }
                Ok(v * n.w)
            }
        }
    };

    // level 0 with h = 1/2, scanning outward to find where the tails die off
    let h0 = 0.5;
    let mut sum = eval(0.0, &mut evals)?;
    let mut limits = [t_max, t_max];
    for (side, sign) in [(0usize, -1.0f64), (1usize, 1.0f64)] {
        let mut quiet = 0;
        let mut k = 1;
        loop {
            let t = sign * k as f64 * h0;
            if t.abs() > t_max {
                break;
            }
            let c = eval(t, &mut evals)?;
            sum += c;
            if c.abs() <= 1e-18 * sum.abs() {
                quiet += 1;
                if quiet >= 3 {
                    limits[side] = t.abs();
                    break;
                }
            } else {
                quiet = 0;
            }
            k += 1;
        }
    }
    let (t_lo, t_hi) = (-limits[0], limits[1]);
    let mut estimate = sum * h0;
    let mut h = h0;
    let mut err = f64::INFINITY;
    let mut prev_err;
    for level in 1..=MAX_LEVEL {
        prev_err = err;
        h *= 0.5;
        let mut add = 0.0;
        let n_lo = (t_lo / h).ceil() as i64;
        let n_hi = (t_hi / h).floor() as i64;
        let mut n = n_lo;
        if n.rem_euclid(2) == 0 {
            n += 1;
        }
        while n <= n_hi {
            add += eval(n as f64 * h, &mut evals)?;
            n += 2;
        }
        sum += add;
        let next = sum * h;
        err = (next - estimate).abs();
        estimate = next;
        if level >= 3 && err <= (tol * estimate.abs()).max(abs_tol).max(1e-300) {
            // the DE error at the new level is roughly the square of the old relative error
            let rel = err / estimate.abs().max(1e-300);
            return Ok(QuadResult { value: estimate, abs_error: (rel * rel).max(1e-16) * estimate.abs(), evals });
        }
        // refinement stalled on integrand noise
        if level >= 5 && err >= 0.25 * prev_err && err <= NOISE_SLACK * (tol * estimate.abs()).max(abs_tol) {
            return Ok(QuadResult { value: estimate, abs_error: err, evals });
        }
        if level >= 3 && estimate == 0.0 && err == 0.0 {
            return Ok(QuadResult { value: 0.0, abs_error: 0.0, evals });
        }
    }
    if err <= NOISE_SLACK * (tol * estimate.abs()).max(abs_tol) {
        return Ok(QuadResult { value: estimate, abs_error: err, evals });
    }
    Err(Error::QuadratureFailure(format!(
        "no convergence after {MAX_LEVEL} levels, last difference {err:e}, value {estimate:e}"
    )))
}

/// ∫_a^b f(x, x-a, b-x) dx.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    if !(b > a) {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evals: 0 });
    }
    de_integrate(|t| tanh_sinh_node(t, a, b), f, tol, 0.0, T_MAX_FINITE)
}

/// ∫_a^∞ f(x, x-a) dx.
pub fn exp_sinh<F>(mut f: F, a: f64, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> f64,
{
    de_integrate(|t| exp_sinh_node(t, a), |x, dl, _| f(x, dl), tol, 0.0, T_MAX_HALF)
}

/// ∫_0^∞ f(y) dy, split at y = 1.
pub fn half_line<F>(f: F, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> f64,
{
    half_line_abs(f, tol, 0.0)
}

/// As [`half_line`], also accepting an absolute error below `abs_tol` (for integrals near zero).
pub fn half_line_abs<F>(mut f: F, tol: f64, abs_tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> f64,
{
    let lo = de_integrate(|t| tanh_sinh_node(t, 0.0, 1.0), |y, _, dr| f(y, dr), tol, abs_tol, T_MAX_FINITE)?;
    let hi = de_integrate(|t| exp_sinh_node(t, 1.0), |y, _, _| f(y, 1.0 - y), tol, abs_tol, T_MAX_HALF)?;
    Ok(QuadResult { value: lo.value + hi.value, abs_error: lo.abs_error + hi.abs_error, evals: lo.evals + hi.evals })
}
