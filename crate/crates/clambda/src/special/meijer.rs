//! Meijer G-functions G^{m,0}_{0,m} and G^{r+α,0}_{α,r+α}.

use num_complex::Complex64;
use std::cell::RefCell;
use std::f64::consts::PI;

use super::gamma::{gamma, ln_gamma_complex, rgamma};
use super::{near_integer, SeriesValue};
use crate::error::{Error, Result};
use crate::quad::{exp_sinh, tanh_sinh};

const SLATER_MAX_CONDITION: f64 = 1e6;
const COINCIDENCE: f64 = 1e-8;
const SLATER_MAX_Y: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeijerClass {
    /// G^{m,0}_{0,m}(y | b_1..b_m)
    M0_0m,
    /// G^{r+α,0}_{α,r+α}(y | a; b) built by Mellin convolution
    GeneralConvolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeijerSpec {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub class: MeijerClass,
}

impl MeijerSpec {
    pub fn m0(b: &[f64]) -> Self {
        MeijerSpec { a: Vec::new(), b: b.to_vec(), class: MeijerClass::M0_0m }
    }

    pub fn general(a: &[f64], b: &[f64]) -> Self {
        let class = if a.is_empty() { MeijerClass::M0_0m } else { MeijerClass::GeneralConvolution };
        MeijerSpec { a: a.to_vec(), b: b.to_vec(), class }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.is_empty() {
            return Err(Error::Shape("Meijer G needs at least one b parameter".into()));
        }
        if self.a.len() > self.b.len() {
            return Err(Error::Shape("Meijer G needs len(a) <= len(b)".into()));
        }
        if self.a.iter().chain(&self.b).any(|&p| !(p > -1.0)) {
            return Err(Error::Domain("Meijer parameters must exceed -1".into()));
        }
        if self.class == MeijerClass::M0_0m && !self.a.is_empty() {
            return Err(Error::Shape("class m0_0m takes no a parameters".into()));
        }
        Ok(())
    }

    /// Γ(s + b)... / Γ(s + a)..., the Mellin transform.
    pub fn mellin(&self, s: Complex64) -> Complex64 {
        let mut l = Complex64::new(0.0, 0.0);
        for &b in &self.b {
            l += ln_gamma_complex(s + b);
        }
        for &a in &self.a {
            l -= ln_gamma_complex(s + a);
        }
        l.exp()
    }
}

/// Lexicographically first injective map i ↦ j_i with a_i > b_{j_i}.
pub fn find_pairing(a: &[f64], b: &[f64]) -> Option<Vec<usize>> {
    fn search(a: &[f64], b: &[f64], used: &mut Vec<bool>, acc: &mut Vec<usize>) -> bool {
        let i = acc.len();
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if !used[j] && a[i] > b[j] {
                used[j] = true;
                acc.push(j);
                if search(a, b, used, acc) {
                    return true;
                }
                acc.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut used = vec![false; b.len()];
    let mut acc = Vec::with_capacity(a.len());
    if search(a, b, &mut used, &mut acc) {
        Some(acc)
    } else {
        None
    }
}

pub fn meijer_g(spec: &MeijerSpec, y: f64, tol: f64) -> Result<SeriesValue<f64>> {
    meijer_g_split(spec, y, 1.0 - y, tol)
}

/// As [`meijer_g`], with 1 - y supplied by the caller (used near y = 1).
pub fn meijer_g_split(spec: &MeijerSpec, y: f64, one_minus_y: f64, tol: f64) -> Result<SeriesValue<f64>> {
    spec.validate()?;
    if !(y > 0.0) {
        return Err(Error::Domain(format!("meijer_g needs y > 0, got {y}")));
    }
    match spec.class {
        MeijerClass::M0_0m => m0_eval(&spec.b, y, tol),
        MeijerClass::GeneralConvolution => general_eval(spec, y, one_minus_y, tol),
    }
}

fn m0_eval(b: &[f64], y: f64, tol: f64) -> Result<SeriesValue<f64>> {
    if b.len() == 1 {
        return Ok(SeriesValue::exact(y.powf(b[0]) * (-y).exp(), 1));
    }
    if !coincident(b) {
        match m0_slater(b, y, tol) {
            Ok(v) => return Ok(v),
            Err(Error::CancellationLoss(_)) => {}
            Err(e) => return Err(e),
        }
    }
    m0_contour(b, y, tol)
}

/// Slater expansion; fails with CancellationLoss when the terms cancel too much.
pub fn m0_slater(b: &[f64], y: f64, tol: f64) -> Result<SeriesValue<f64>> {
    slater(&[], b, y, tol)
}

/// Residue sum of G^{m,0}_{p,m} over the simple poles at -b_j, valid for
/// pairwise non-integer b differences (and y < 1 when p = m).
pub fn slater(a: &[f64], b: &[f64], y: f64, tol: f64) -> Result<SeriesValue<f64>> {
    let m = b.len();
    let z = if (m - a.len()) % 2 == 0 { y } else { -y };
    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut terms = 0;
    for j in 0..m {
        let mut pre = y.powf(b[j]);
        let mut den = Vec::with_capacity(m - 1);
        for k in 0..m {
            if k != j {
                pre *= gamma(b[k] - b[j]);
                den.push(1.0 + b[j] - b[k]);
            }
        }
        let num: Vec<f64> = a.iter().map(|ai| 1.0 + b[j] - ai).collect();
        for ai in a {
            pre *= rgamma(ai - b[j]);
        }
        if pre == 0.0 {
            continue;
        }
        let mut t = 1.0;
        let mut s = 1.0;
        let mut sa = 1.0;
        let mut small = 0;
        for n in 0..100_000 {
            let nf = n as f64;
            let mut r = z / (nf + 1.0);
            for d in &den {
                r /= d + nf;
            }
            for c in &num {
                r *= c + nf;
            }
            t *= r;
            s += t;
            sa += t.abs();
            terms += 1;
            if t == 0.0 || t.abs() < 0.1 * tol * s.abs().max(1e-300) {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        total += pre * s;
        abs_total += pre.abs() * sa;
    }
    let cond = abs_total / total.abs().max(f64::MIN_POSITIVE);
    if !(cond < SLATER_MAX_CONDITION) || !total.is_finite() {
        return Err(Error::CancellationLoss(cond));
    }
    Ok(SeriesValue { value: total, abs_error: 4.0 * f64::EPSILON * abs_total + tol * total.abs(), terms, converged: true })
}

fn coincident(b: &[f64]) -> bool {
    b.iter().enumerate().any(|(j, bj)| b.iter().skip(j + 1).any(|bk| near_integer(bk - bj).1 < COINCIDENCE))
}

/// Bromwich contour on Re s = c with the line shifted towards the saddle.
pub fn m0_contour(b: &[f64], y: f64, tol: f64) -> Result<SeriesValue<f64>> {
    let spec = MeijerSpec::m0(b);
    contour(&spec, y, tol)
}

/// Bromwich contour for any spec with more b than a parameters.
pub fn meijer_g_contour(spec: &MeijerSpec, y: f64, tol: f64) -> Result<SeriesValue<f64>> {
    spec.validate()?;
    if spec.b.len() <= spec.a.len() {
        return Err(Error::Domain("contour needs len(b) > len(a)".into()));
    }
    contour(spec, y, tol)
}

fn contour(spec: &MeijerSpec, y: f64, tol: f64) -> Result<SeriesValue<f64>> {
    let b = &spec.b;
    let m = (b.len() - spec.a.len()) as f64;
    let bmin = b.iter().cloned().fold(f64::INFINITY, f64::min);
    let ly = y.ln();
    // distance d from the line to the leading pole at -bmin; small y pulls the
    // line towards that pole so y^{-s} does not amplify rounding
    let (c, d) = if y < 1.0 {
        let d = (3.0 / ly.abs()).clamp(0.1, 1.0);
        (d - bmin, d)
    } else {
        let c = (1.0 - bmin).max(y.powf(1.0 / m) - bmin);
        (c, (c + bmin).min(c.abs().sqrt().max(1.0)))
    };
    let h = 2.0 * PI * d / (38.0 + ly.abs());
    let log_f = |t: f64| -> Complex64 {
        let s = Complex64::new(c, t);
        let mut l = Complex64::new(0.0, 0.0);
        for &bk in b {
            l += ln_gamma_complex(s + bk);
        }
        for &ak in &spec.a {
            l -= ln_gamma_complex(s + ak);
        }
        l - s * ly
    };
    let l0 = log_f(0.0);
    let scale = l0.re;
    if scale < -800.0 {
        return Ok(SeriesValue::exact(0.0, 1));
    }
    let cutoff = tol.ln() - 8.0;
    let mut sum = 0.5 * (l0 - scale).exp().re;
    let mut quiet = 0;
    let mut n = 1usize;
    loop {
        let t = n as f64 * h;
        let l = log_f(t);
        let v = (l - scale).exp().re;
        sum += v;
        if l.re - scale < cutoff && t > c {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
        n += 1;
        if n > 2_000_000 {
            return Err(Error::NoConvergence { what: "meijer contour", terms: n });
        }
    }
    let value = scale.exp() * sum * h / PI;
    let abs_error = scale.exp() * h / PI * (tol + n as f64 * f64::EPSILON);
    Ok(SeriesValue { value, abs_error, terms: n, converged: true })
}

enum Base {
    /// x^b (1-x)^{a-b-1} / Γ(a-b) on (0,1)
    Beta { a: f64, b: f64 },
    M0(Vec<f64>),
}

impl Base {
    fn eval(&self, x: f64, omx: f64, tol: f64) -> Result<f64> {
        match self {
            Base::Beta { a, b } => {
                if !(omx > 0.0) {
                    return Ok(0.0);
                }
                Ok(x.powf(*b) * omx.powf(a - b - 1.0) * rgamma(a - b))
            }
            Base::M0(bs) => Ok(m0_eval(bs, x, tol)?.value),
        }
    }
    fn finite(&self) -> bool {
        matches!(self, Base::Beta { .. })
    }
}

fn general_eval(spec: &MeijerSpec, y: f64, omy: f64, tol: f64) -> Result<SeriesValue<f64>> {
    let finite_support = spec.a.len() == spec.b.len();
    if finite_support && !(omy > 0.0) {
        return Ok(SeriesValue::exact(0.0, 0));
    }
    if !coincident(&spec.b) && (!finite_support || y <= SLATER_MAX_Y) {
        match slater(&spec.a, &spec.b, y, tol) {
            Ok(v) => return Ok(v),
            Err(Error::CancellationLoss(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if !finite_support {
        if let Ok(v) = contour(spec, y, tol) {
            return Ok(v);
        }
    }
    let pairing = find_pairing(&spec.a, &spec.b).ok_or_else(|| {
        Error::PositivityUnavailable(format!("no pairing a > b for a = {:?}, b = {:?}", spec.a, spec.b))
    })?;
    let mut pairs: Vec<(f64, f64)> = pairing.iter().enumerate().map(|(i, &j)| (spec.a[i], spec.b[j])).collect();
    let rest: Vec<f64> = (0..spec.b.len()).filter(|j| !pairing.contains(j)).map(|j| spec.b[j]).collect();
    let base = if rest.is_empty() {
        let (a, b) = pairs.pop().expect("alpha >= 1");
        Base::Beta { a, b }
    } else {
        Base::M0(rest)
    };
    if base.finite() && !(omy > 0.0) {
        return Ok(SeriesValue::exact(0.0, 0));
    }
    let inner_tol = (tol * 0.1).max(1e-14);
    let v = convolve(&pairs, &base, y, omy, inner_tol)?;
    Ok(SeriesValue { value: v, abs_error: tol * v.abs(), terms: 0, converged: true })
}

/// One Mellin-convolution level per pair, innermost pair first, in the log variable u = e^s.
fn convolve(pairs: &[(f64, f64)], base: &Base, x: f64, omx: f64, tol: f64) -> Result<f64> {
    let Some((&(a, b), rest)) = pairs.split_last() else {
        return base.eval(x, omx, tol);
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let kernel = |s: f64, ds: f64| -> f64 {
        // u^{1-a} (u-1)^{a-b-1}, with u - 1 = expm1(s) and s = ds accurate near 0
        let u = s.exp();
        u.powf(1.0 - a) * ds.exp_m1().powf(a - b - 1.0)
    };
    let value = if base.finite() {
        if !(omx > 0.0) {
            return Ok(0.0);
        }
        let big_l = -x.ln();
        let r = tanh_sinh(
            |s, dl, dr| {
                // x u = e^{-(L - s)}, 1 - x u = -expm1(-(L - s))
                let xu = (-dr).exp();
                let om = -(-dr).exp_m1();
                match convolve(rest, base, xu, om, tol) {
                    Ok(g) => kernel(s, dl) * g,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                }
            },
            0.0,
            big_l,
            tol,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        r?.value
    } else {
        let r = exp_sinh(
            |s, ds| {
                let xu = x * s.exp();
                if xu > 1e5 {
                    return 0.0;
                }
                match convolve(rest, base, xu, 1.0 - xu, tol) {
                    Ok(g) => kernel(s, ds) * g,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                }
            },
            0.0,
            tol,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        r?.value
    };
    Ok(value * rgamma(a - b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{bessel_k, kummer_u};

    #[test]
    fn exponential() {
        let v = meijer_g(&MeijerSpec::m0(&[0.0]), 1.0, 1e-12).unwrap().value;
        assert!((v - (-1f64).exp()).abs() < 1e-12);
        let c = m0_contour(&[0.0], 1.0, 1e-12).unwrap().value;
        assert!((c - (-1f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn bessel_identity() {
        let (b, y): (f64, f64) = (1.0 / 3.0, 0.7);
        let k = bessel_k(b, 2.0 * y.sqrt()).unwrap().value;
        let exact = 2.0 * y.powf(b / 2.0) * k;
        let s = m0_slater(&[0.0, b], y, 1e-13).unwrap().value;
        let c = m0_contour(&[0.0, b], y, 1e-12).unwrap().value;
        assert!((s - exact).abs() < 1e-9);
        assert!((c - exact).abs() < 1e-9);
        // integer gap goes through the contour
        let g = meijer_g(&MeijerSpec::m0(&[0.0, 1.0]), 2.5, 1e-12).unwrap().value;
        let k1 = bessel_k(1.0, 2.0 * 2.5f64.sqrt()).unwrap().value;
        assert!((g - 2.0 * 2.5f64.sqrt() * k1).abs() < 1e-10);
    }

    #[test]
    fn kummer_form() {
        let (b1, b2) = (4.0 / 3.0, 2.0 / 3.0);
        let spec = MeijerSpec::general(&[b1 - 1.0], &[0.0, b2 - 1.0]);
        for y in [0.2, 1.0, 3.0] {
            let g = meijer_g(&spec, y, 1e-10).unwrap().value;
            let u = (-y as f64).exp() * kummer_u(b1 - b2, 2.0 - b2, y).unwrap().value;
            assert!((g - u).abs() < 1e-8 * u.abs(), "y = {y}: {g} vs {u}");
        }
    }

    #[test]
    fn beta_base() {
        // G^{1,0}_{1,1}(y | a; b) = y^b (1-y)^{a-b-1} / Γ(a-b)
        let spec = MeijerSpec::general(&[1.5], &[0.0]);
        let g = meijer_g(&spec, 0.3, 1e-12).unwrap().value;
        assert!((g - 0.7f64.powf(0.5) / gamma(1.5)).abs() < 1e-13);
        assert_eq!(meijer_g(&spec, 1.5, 1e-12).unwrap().value, 0.0);
    }

    #[test]
    fn pairing_is_lexicographic() {
        assert_eq!(find_pairing(&[0.5, 2.0], &[0.0, 1.0, 0.2]), Some(vec![0, 1]));
        assert_eq!(find_pairing(&[0.1], &[0.2, 0.3]), None);
    }
}
