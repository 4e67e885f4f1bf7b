use super::gamma::is_nonpositive_integer;
use super::gauss::hyp2f1;
use super::{SeriesValue, DEFAULT_TOL};
use crate::error::{Error, Result};

pub const F3_CAP: usize = 300;

/// Appell F₃(a, a'; b, b'; c; x, y) for |x| < 1, |y| < 1.
pub fn appell_f3(a: f64, ap: f64, b: f64, bp: f64, c: f64, x: f64, y: f64) -> Result<SeriesValue<f64>> {
    if !(x.abs() < 1.0 && y.abs() < 1.0) {
        return Err(Error::Domain(format!("appell_f3 needs |x|, |y| < 1, got ({x}, {y})")));
    }
    appell_f3_continued(a, ap, b, bp, c, x, y)
}

/// F₃ summed as Σ_m (a)_m (b)_m x^m / ((c)_m m!) ₂F₁(a', b'; c+m; y); the inner
/// ₂F₁ is analytically continued, so any y < 1 is accepted.
pub fn appell_f3_continued(
    a: f64,
    ap: f64,
    b: f64,
    bp: f64,
    c: f64,
    x: f64,
    y: f64,
) -> Result<SeriesValue<f64>> {
    if is_nonpositive_integer(c) {
        return Err(Error::PoleInDenominator(c));
    }
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("appell_f3 needs |x| < 1, got {x}")));
    }
    let mut coef = 1.0;
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut terms = 0;
    let mut small = 0;
    // the outer series decays like x^m
    let cap = ((40.0 / (1.0 - x.abs())).ceil() as usize).clamp(F3_CAP, 100 * F3_CAP);
    for m in 0..cap {
        let mf = m as f64;
        if m > 0 {
            coef *= (a + mf - 1.0) * (b + mf - 1.0) / ((c + mf - 1.0) * mf) * x;
        }
        if coef == 0.0 {
            return Ok(SeriesValue { value: sum, abs_error: err, terms, converged: true });
        }
        let inner = hyp2f1(ap, bp, c + mf, y)?;
        let t = coef * inner.value;
        sum += t;
        err += coef.abs() * inner.abs_error;
        terms += inner.terms;
        if t.abs() < DEFAULT_TOL * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(SeriesValue { value: sum, abs_error: err + t.abs(), terms, converged: true });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence { what: "appell_f3", terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gauss_2f1;

    #[test]
    fn reductions() {
        assert_eq!(appell_f3(0.3, 0.4, 0.5, 0.6, 1.7, 0.0, 0.0).unwrap().value, 1.0);
        let v = appell_f3(0.3, 0.4, 0.5, 0.0, 1.7, 0.6, -0.4).unwrap().value;
        let r = gauss_2f1(0.3, 0.5, 1.7, 0.6).unwrap().value;
        assert!((v - r).abs() < 1e-12);
    }

    #[test]
    fn double_series_agrees() {
        // brute-force double sum at small arguments
        let (a, ap, b, bp, c, x, y): (f64, f64, f64, f64, f64, f64, f64) = (0.3, 0.8, 1.1, 0.6, 2.2, 0.4, -0.3);
        let mut s = 0.0;
        let poch = |p: f64, k: usize| (0..k).fold(1.0, |acc, j| acc * (p + j as f64));
        let fact = |k: usize| (1..=k).fold(1.0, |acc, j| acc * j as f64);
        for m in 0..40 {
            for n in 0..40 {
                s += poch(a, m) * poch(ap, n) * poch(b, m) * poch(bp, n) / (poch(c, m + n) * fact(m) * fact(n))
                    * x.powi(m as i32)
                    * y.powi(n as i32);
            }
        }
        let v = appell_f3(a, ap, b, bp, c, x, y).unwrap().value;
        assert!((v - s).abs() < 1e-12, "{v} vs {s}");
    }
}
