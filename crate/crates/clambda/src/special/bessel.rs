use std::f64::consts::PI;

use super::gamma::rgamma;
use super::pfq::pfq_real;
use super::{near_integer, SeriesValue, DEFAULT_TOL};
use crate::error::{Error, Result};

const ASYMPTOTIC_X: f64 = 30.0;
const STEED_X: f64 = 2.0;

/// Modified Bessel function of the first kind I_ν(x), x ≥ 0.
pub fn bessel_i(nu: f64, x: f64) -> Result<SeriesValue<f64>> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("bessel_i needs x >= 0, got {x}")));
    }
    let (n, d) = near_integer(nu);
    if nu < 0.0 && d == 0.0 {
        return bessel_i(-n, x);
    }
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(SeriesValue::exact(1.0, 0))
        } else if nu > 0.0 {
            Ok(SeriesValue::exact(0.0, 0))
        } else {
            Err(Error::Domain(format!("I_{nu}(0) is infinite")))
        };
    }
    if x > ASYMPTOTIC_X && x > nu * nu {
        return Ok(i_asymptotic(nu, x));
    }
    let s = pfq_real(&[], &[nu + 1.0], 0.25 * x * x, DEFAULT_TOL)?;
    let pre = (0.5 * x).powf(nu) * rgamma(nu + 1.0);
    Ok(SeriesValue { value: pre * s.value, abs_error: pre.abs() * s.abs_error, terms: s.terms, converged: s.converged })
}

fn i_asymptotic(nu: f64, x: f64) -> SeriesValue<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1;
    loop {
        let next = -term * (mu - ((2 * k - 1) as f64).powi(2)) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() || k > 200 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        k += 1;
    }
    let pre = x.exp() / (2.0 * PI * x).sqrt();
    SeriesValue { value: pre * sum, abs_error: pre * term.abs(), terms: k, converged: true }
}

fn k_asymptotic(nu: f64, x: f64) -> SeriesValue<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1;
    loop {
        let next = term * (mu - ((2 * k - 1) as f64).powi(2)) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() || k > 200 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        k += 1;
    }
    let pre = (PI / (2.0 * x)).sqrt() * (-x).exp();
    SeriesValue { value: pre * sum, abs_error: pre * term.abs(), terms: k, converged: true }
}

/// Modified Bessel function of the second kind K_ν(x), x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<SeriesValue<f64>> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_k needs x > 0, got {x}")));
    }
    let nu = nu.abs();
    if x > ASYMPTOTIC_X && x > nu * nu {
        return Ok(k_asymptotic(nu, x));
    }
    if x >= STEED_X {
        return k_steed(nu, x);
    }
    k_temme(nu, x)
}

/// Taylor coefficients of 1/Γ(1+x) at 0.
const RGAMMA1: [f64; 28] = [
    1.0,
    0.57721566490153286,
    -0.65587807152025388,
    -0.042002635034095236,
    0.16653861138229149,
    -0.042197734555544337,
    -0.0096219715278769736,
    0.0072189432466630995,
    -0.0011651675918590651,
    -0.00021524167411495097,
    0.00012805028238811619,
    -0.000020134854780788239,
    -0.0000012504934821426707,
    0.0000011330272319816959,
    -0.00000020563384169776071,
    0.0000000061160951044814158,
    0.0000000050020076444692229,
    -0.0000000011812745704870201,
    0.00000000010434267116911005,
    0.0000000000077822634399050713,
    -0.0000000000036968056186422057,
    0.0000000000005100370287454476,
    -0.000000000000020583260535665068,
    -0.000000000000005348122539423018,
    0.0000000000000012267786282382608,
    -0.00000000000000011812593016974588,
    0.0000000000000000011866922547516003,
    0.0000000000000000014123806553180318,
];

/// (Γ₁, Γ₂, 1/Γ(1+μ), 1/Γ(1-μ)) with Γ₁ = (1/Γ(1-μ) - 1/Γ(1+μ))/(2μ), Γ₂ the mean.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let (mut even, mut odd) = (0.0, 0.0);
    for (k, c) in RGAMMA1.iter().enumerate().rev() {
        if k % 2 == 0 {
            even = even * mu * mu + c;
        } else {
            odd = odd * mu * mu + c;
        }
    }
    // 1/Γ(1±μ) = even ± μ·odd
    (-odd, even, even + mu * odd, even - mu * odd)
}

/// Temme's series for K_μ, K_{μ+1} with |μ| ≤ 1/2, x < 2, then upward recurrence.
fn k_temme(nu: f64, x: f64) -> Result<SeriesValue<f64>> {
    let nl = (nu + 0.5).floor() as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let x2 = 0.5 * x;
    let pimu = PI * xmu;
    let fact = if pimu.abs() < 1e-15 { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = xmu * d;
    let fact2 = if e.abs() < 1e-15 { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mut terms = 0;
    let mut converged = false;
    for i in 1..10_000 {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - xmu2);
        c *= dd / fi;
        p /= fi - xmu;
        q /= fi + xmu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        terms = i;
        if del.abs() < 1e-17 * sum.abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { what: "bessel_k Temme", terms });
    }
    let mut rkmu = sum;
    let mut rk1 = sum1 * 2.0 / x;
    for i in 1..=nl {
        let next = (xmu + i as f64) * (2.0 / x) * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
    }
    Ok(SeriesValue { value: rkmu, abs_error: 1e-15 * (1.0 + nl as f64) * rkmu.abs(), terms, converged })
}

/// Steed's continued fraction CF2 for K_μ, |μ| ≤ 1/2, then upward recurrence.
fn k_steed(nu: f64, x: f64) -> Result<SeriesValue<f64>> {
    let nl = (nu + 0.5).floor() as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - xmu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    let mut terms = 0;
    for i in 1..100_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        terms = i;
        if (dels / s).abs() < 1e-16 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { what: "bessel_k CF2", terms });
    }
    h *= a1;
    let mut rkmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let mut rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    let xi2 = 2.0 * xi;
    for i in 1..=nl {
        let next = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
    }
    Ok(SeriesValue { value: rkmu, abs_error: 1e-15 * (1.0 + nl as f64) * rkmu.abs(), terms, converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_forms() {
        let x: f64 = 1.0;
        let i = bessel_i(0.5, x).unwrap().value;
        assert!((i - (2.0 / (PI * x)).sqrt() * x.sinh()).abs() < 1e-10);
        for x in [0.5, 2.0, 7.0, 40.0] {
            let k = bessel_k(0.5, x).unwrap().value;
            let exact = (PI / (2.0 * x)).sqrt() * (-x as f64).exp();
            assert!((k / exact - 1.0).abs() < 1e-10, "x = {x}");
        }
        assert_eq!(bessel_i(2.0, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn integer_order_k() {
        // K_0(1) and K_1(1), reference values to 15 digits
        let k0 = bessel_k(0.0, 1.0).unwrap().value;
        let k1 = bessel_k(1.0, 1.0).unwrap().value;
        assert!((k0 - 0.421_024_438_240_708_3).abs() < 1e-15);
        assert!((k1 - 0.601_907_230_197_234_6).abs() < 1e-15);
        // 2√y K_1(2√y) at y = 0.1
        let y: f64 = 0.1;
        let g = 2.0 * y.sqrt() * bessel_k(1.0, 2.0 * y.sqrt()).unwrap().value;
        assert!((g - 0.766_566_861_153_568).abs() < 1e-14);
        let k1_far = bessel_k(1.0, 3.0).unwrap().value;
        assert!((k1_far - 0.040_156_431_128_194_18).abs() < 1e-13);
    }

    #[test]
    fn domain() {
        assert!(bessel_i(1.0, -1.0).is_err());
        assert!(bessel_k(1.0, 0.0).is_err());
    }
}
