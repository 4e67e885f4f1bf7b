use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// True when x is 0, -1, -2, ...
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

pub fn gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::new(PI, 0.0) / (s * gamma_complex(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// log Γ(z) on the principal branch for Re z > 0 (reflection otherwise).
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_complex(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x > 171.0 {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let mut s = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * s
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI.ln() - (PI * x).sin().abs().ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut s = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + s.ln()
}

/// Sign of Γ(x) (zero at the poles).
pub fn gamma_sign(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else if x > 0.0 || (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// 1/Γ(x), zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        return (PI * x).sin() * gamma(1.0 - x) / PI;
    }
    if x > 171.0 {
        return gamma_sign(x) * (-ln_gamma(x)).exp();
    }
    1.0 / gamma(x)
}

/// (a)_k = Γ(a+k)/Γ(a) by direct product.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// ln (a)_k for a > 0.
pub fn ln_pochhammer(a: f64, k: usize) -> f64 {
    ln_gamma(a + k as f64) - ln_gamma(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..20 {
            f *= n as f64;
            assert!((gamma(n as f64 + 1.0) / f - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn half_and_reflection() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(-1.5) - 4.0 / 3.0 * PI.sqrt()).abs() < 1e-13);
        assert_eq!(rgamma(-3.0), 0.0);
        assert_eq!(gamma_sign(-0.5), -1.0);
        assert_eq!(gamma_sign(-1.5), 1.0);
    }

    #[test]
    fn complex_agrees_with_real() {
        for x in [0.3, 1.7, 4.2, -0.6] {
            let g = gamma_complex(Complex64::new(x, 0.0));
            assert!((g.re / gamma(x) - 1.0).abs() < 1e-13);
        }
        // |Γ(1/2 + it)|² = π / cosh(πt)
        let t = 2.3;
        let g = gamma_complex(Complex64::new(0.5, t));
        assert!((g.norm_sqr() - PI / (PI * t).cosh()).abs() < 1e-13);
        let lg = ln_gamma_complex(Complex64::new(0.5, t));
        assert!((lg.exp() - g).norm() / g.norm() < 1e-12);
    }

    #[test]
    fn ln_gamma_large() {
        // Stirling with two correction terms at x = 200
        let x: f64 = 200.0;
        let st = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3));
        assert!((ln_gamma(x) - st).abs() < 1e-11);
    }
}
