use num_complex::Complex64;

use super::gamma::is_nonpositive_integer;
use super::SeriesValue;
use crate::error::{Error, Result};

pub const PFQ_TERM_CAP: usize = 100_000;

/// Generalized hypergeometric series pFq(a; b; z).
pub fn pfq(a: &[f64], b: &[f64], z: Complex64, tol: f64) -> Result<SeriesValue<Complex64>> {
    if let Some(&bad) = b.iter().find(|&&bj| is_nonpositive_integer(bj)) {
        // a terminating numerator that cuts the series before the pole is fine
        let cut = a
            .iter()
            .filter(|&&ai| is_nonpositive_integer(ai))
            .map(|ai| -ai)
            .fold(f64::INFINITY, f64::min);
        if !(cut < -bad) {
            return Err(Error::PoleInDenominator(bad));
        }
    }
    let terminating = a.iter().any(|&ai| is_nonpositive_integer(ai));
    if z == Complex64::new(0.0, 0.0) {
        return Ok(SeriesValue::exact(Complex64::new(1.0, 0.0), 1));
    }
    if !terminating {
        if a.len() > b.len() + 1 {
            return Err(Error::DivergentSeries);
        }
        if a.len() == b.len() + 1 && z.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "{}F{} needs |z| < 1, got {}",
                a.len(),
                b.len(),
                z.norm()
            )));
        }
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut small = 0;
    let mut last_ratio = 0.0;
    for k in 0..PFQ_TERM_CAP {
        let kf = k as f64;
        let mut r = 1.0;
        for &ai in a {
            r *= ai + kf;
        }
        for &bj in b {
            r /= bj + kf;
        }
        r /= kf + 1.0;
        let next = term * z * r;
        if next == Complex64::new(0.0, 0.0) {
            return Ok(SeriesValue { value: sum, abs_error: f64::EPSILON * sum.norm(), terms: k + 1, converged: true });
        }
        last_ratio = next.norm() / term.norm();
        term = next;
        sum += term;
        if term.norm() < tol * sum.norm() {
            small += 1;
            if small >= 3 {
                let tail = if last_ratio < 1.0 {
                    term.norm() * last_ratio / (1.0 - last_ratio)
                } else {
                    term.norm()
                };
                return Ok(SeriesValue {
                    value: sum,
                    abs_error: tail + f64::EPSILON * sum.norm(),
                    terms: k + 2,
                    converged: true,
                });
            }
        } else {
            small = 0;
        }
    }
    let _ = last_ratio;
    Err(Error::NoConvergence { what: "pfq", terms: PFQ_TERM_CAP })
}

/// pFq at a real argument.
pub fn pfq_real(a: &[f64], b: &[f64], x: f64, tol: f64) -> Result<SeriesValue<f64>> {
    let v = pfq(a, b, Complex64::new(x, 0.0), tol)?;
    Ok(v.map(|c| c.re))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_cases() {
        let v = pfq_real(&[4.0 / 3.0], &[4.0 / 3.0], 1.0, 1e-14).unwrap();
        assert!((v.value - 1f64.exp()).abs() < 1e-12);
        let v = pfq(&[], &[], Complex64::new(0.3, -1.2), 1e-14).unwrap();
        assert!((v.value - Complex64::new(0.3, -1.2).exp()).norm() < 1e-12);
        let v = pfq_real(&[1.0, 1.0], &[2.0], 0.5, 1e-14).unwrap();
        assert!((v.value - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn terminating_and_errors() {
        // 2F1(-2, b; c; x) = 1 - 2bx/c + b(b+1)x²/(c(c+1))
        let (b, c, x) = (0.7, 1.9, 3.0);
        let v = pfq_real(&[-2.0, b], &[c], x, 1e-14).unwrap();
        let exact = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
        assert!((v.value - exact).abs() < 1e-12);
        assert!(matches!(pfq_real(&[1.0], &[-2.0], 0.1, 1e-12), Err(Error::PoleInDenominator(_))));
        assert!(matches!(pfq_real(&[1.0, 1.0, 1.0], &[], 0.1, 1e-12), Err(Error::DivergentSeries)));
        assert!(matches!(pfq_real(&[1.0, 1.0], &[2.0], 1.5, 1e-12), Err(Error::Domain(_))));
    }
}
