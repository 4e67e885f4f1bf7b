use super::gamma::{gamma, is_nonpositive_integer, rgamma};
use super::pfq::pfq_real;
use super::{near_integer, straddle, SeriesValue, DEFAULT_TOL, EPS_DEGENERATE};
use crate::error::{Error, Result};
use crate::quad::exp_sinh;

const SERIES_MAX_Y: f64 = 2.0;
const ASYMPTOTIC_Y: f64 = 35.0;

/// Tricomi's confluent hypergeometric function U(a, b, y), y > 0.
pub fn kummer_u(a: f64, b: f64, y: f64) -> Result<SeriesValue<f64>> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("kummer_u needs y > 0, got {y}")));
    }
    if is_nonpositive_integer(a) {
        return u_polynomial(a, b, y);
    }
    let ap = a - b + 1.0;
    if is_nonpositive_integer(ap) {
        let u = u_polynomial(ap, 2.0 - b, y)?;
        let f = y.powf(1.0 - b);
        return Ok(u.map(|v| v * f));
    }
    if y > ASYMPTOTIC_Y {
        return Ok(u_asymptotic(a, b, y));
    }
    if y > SERIES_MAX_Y {
        if a > 0.0 {
            return u_laplace(a, b, y);
        }
        if ap > 0.0 {
            let u = u_laplace(ap, 2.0 - b, y)?;
            let f = y.powf(1.0 - b);
            return Ok(u.map(|v| v * f));
        }
    }
    let (_, d) = near_integer(b);
    if d < EPS_DEGENERATE {
        return straddle(b, |bb| u_two_m(a, bb, y));
    }
    u_two_m(a, b, y)
}

/// U(-n, b, y) = (-1)^n (b)_n M(-n, b, y), with the b-pole handled by the 2-b form.
fn u_polynomial(a: f64, b: f64, y: f64) -> Result<SeriesValue<f64>> {
    let n = (-a).round() as usize;
    // expand directly: U(-n,b,y) = Σ_k C(n,k) (-1)^k ... use the (b)_n M form when b is regular
    if !is_nonpositive_integer(b) {
        let m = pfq_real(&[a], &[b], y, DEFAULT_TOL)?;
        let mut poch = 1.0;
        for j in 0..n {
            poch *= b + j as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(m.map(|v| sign * poch * v));
    }
    // U(-n,b,y) = Σ_k C(n,k) (b+k)_{n-k} (-1)^{n-k}... via the terminating 2F0 y^{-a}
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 0..=n {
        if k > 0 {
            term *= (a + (k - 1) as f64) * (a - b + k as f64) / k as f64 * (-1.0 / y);
        }
        sum += term;
    }
    Ok(SeriesValue::exact(y.powf(-a) * sum, n + 1))
}

fn u_two_m(a: f64, b: f64, y: f64) -> Result<SeriesValue<f64>> {
    let m1 = pfq_real(&[a], &[b], y, DEFAULT_TOL)?;
    let m2 = pfq_real(&[a - b + 1.0], &[2.0 - b], y, DEFAULT_TOL)?;
    let c1 = gamma(1.0 - b) * rgamma(a - b + 1.0);
    let c2 = gamma(b - 1.0) * rgamma(a) * y.powf(1.0 - b);
    let t1 = c1 * m1.value;
    let t2 = c2 * m2.value;
    let value = t1 + t2;
    let err = c1.abs() * m1.abs_error + c2.abs() * m2.abs_error + 4.0 * f64::EPSILON * (t1.abs() + t2.abs());
    Ok(SeriesValue { value, abs_error: err, terms: m1.terms + m2.terms, converged: m1.converged && m2.converged })
}

fn u_laplace(a: f64, b: f64, y: f64) -> Result<SeriesValue<f64>> {
    let r = exp_sinh(
        |t, _| (-y * t).exp() * t.powf(a - 1.0) * (1.0 + t).powf(b - a - 1.0),
        0.0,
        1e-13,
    )?;
    let g = rgamma(a);
    Ok(SeriesValue { value: g * r.value, abs_error: g.abs() * r.abs_error, terms: r.evals, converged: true })
}

fn u_asymptotic(a: f64, b: f64, y: f64) -> SeriesValue<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0;
    loop {
        let kf = k as f64;
        let next = -term * (a + kf) * (a - b + 1.0 + kf) / ((kf + 1.0) * y);
        if next.abs() >= term.abs() || k > 500 {
            break;
        }
        term = next;
        sum += term;
        k += 1;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    let pre = y.powf(-a);
    SeriesValue { value: pre * sum, abs_error: pre * term.abs(), terms: k + 1, converged: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminating() {
        assert_eq!(kummer_u(0.0, 1.7, 2.5).unwrap().value, 1.0);
        // U(-1, b, y) = y - b
        let v = kummer_u(-1.0, 0.4, 3.0).unwrap().value;
        assert!((v - 2.6).abs() < 1e-13);
    }

    #[test]
    fn branch_continuity() {
        // U(a,a+1,y) = y^{-a}
        for y in [0.5, 1.9, 2.1, 20.0, 34.0, 36.0, 80.0] {
            let v = kummer_u(0.7, 1.7, y).unwrap().value;
            assert!((v / y.powf(-0.7) - 1.0).abs() < 1e-10, "y = {y}");
        }
    }
}
