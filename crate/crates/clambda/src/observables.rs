//! Photon statistics and quadrature squeezing for |z; μ; α⟩ and |z⟩.
//!
//! Every quantity has a closed or series form and a brute-force evaluation
//! on the truncated coefficient vector ("oracle").

use num_complex::Complex64;
use std::str::FromStr;

use crate::algebra::{structure_function, AlgebraParams};
use crate::error::{Error, Result};
use crate::special::{bessel_i, pfq_real, DEFAULT_TOL};
use crate::states::{cs_alpha_state, denominator_params, eigen_normalization, eigenstate, CsAlphaSpec, Norm, StateVector, MAX_DIM};

const SERIES_CAP: usize = 2_000_000;
const SERIES_TOL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    /// λ = 2 eigenstates only: the modified-Bessel ratio R(t).
    Bessel,
    Oracle,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "bessel" => Ok(Method::Bessel),
            "oracle" => Ok(Method::Oracle),
            _ => Err(Error::Config(format!("unknown method '{s}' (closed, bessel, oracle)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    ClosedForm,
    VectorOracle,
}

impl Source {
    pub fn tag(&self) -> &'static str {
        match self {
            Source::ClosedForm => "closed_form",
            Source::VectorOracle => "vector_oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStats {
    pub mean_n: f64,
    pub mean_n2: f64,
    pub mandel_q: f64,
    pub source: Source,
    /// Q is the z → 0 limit, ⟨N⟩ being zero there.
    pub limit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    /// x, p built from a, a†.
    Dressed,
    /// x_b, p_b built from the ordinary photon operators b, b†.
    Real,
}

impl FromStr for Quadrature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dressed" => Ok(Quadrature::Dressed),
            "real" => Ok(Quadrature::Real),
            _ => Err(Error::Config(format!("unknown quadrature '{s}' (dressed, real)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeReport {
    pub variance_x: f64,
    pub variance_p: f64,
    pub vacuum_x: f64,
    pub vacuum_p: f64,
    pub x_ratio: f64,
    pub p_ratio: f64,
    pub uncertainty_lhs: f64,
    pub uncertainty_rhs: f64,
    pub kind: Quadrature,
    pub source: Source,
}

impl SqueezeReport {
    fn new(vx: f64, vp: f64, vac: f64, rhs: f64, kind: Quadrature, source: Source) -> Self {
        SqueezeReport {
            variance_x: vx,
            variance_p: vp,
            vacuum_x: vac,
            vacuum_p: vac,
            x_ratio: vx / vac,
            p_ratio: vp / vac,
            uncertainty_lhs: vx * vp,
            uncertainty_rhs: rhs,
            kind,
            source,
        }
    }
}

fn stats(mean_n: f64, mean_n2: f64, mandel_q: f64, source: Source) -> PhotonStats {
    PhotonStats { mean_n, mean_n2, mandel_q, source, limit: false }
}

/// Q at ⟨N⟩ = 0 from the first two nonzero levels: λ-1 for |z;0;α⟩, 0 for |z⟩.
fn zero_limit(q: f64, source: Source) -> PhotonStats {
    PhotonStats { mean_n: 0.0, mean_n2: 0.0, mandel_q: q, source, limit: true }
}

// ---------------------------------------------------------------------------
// coherent states |z; μ; α⟩

/// Σ_k k^j t_k / Σ_k t_k for j = 1, 2, t_k the terms of N^{(α)}_μ.
fn sector_moments(spec: &CsAlphaSpec) -> Result<(f64, f64)> {
    sector_average(spec, |k| [k, k * k])
        .map(|v| (v[0], v[1]))
}

/// Normalized averages of g(k) over the terms of N^{(α)}_μ(y).
fn sector_average<const M: usize>(spec: &CsAlphaSpec, g: impl Fn(f64) -> [f64; M]) -> Result<[f64; M]> {
    let num = spec.numerator();
    let den = spec.denominator();
    let y = spec.y();
    let mut t = 1.0;
    let mut total = 0.0;
    let mut acc = [0.0; M];
    for k in 0..SERIES_CAP {
        let kf = k as f64;
        if k > 0 {
            let km = kf - 1.0;
            t *= y * num.iter().map(|a| a + km).product::<f64>()
                / (kf * den.iter().map(|b| b + km).product::<f64>());
        }
        total += t;
        let gk = g(kf);
        for (a, v) in acc.iter_mut().zip(gk) {
            *a += t * v;
        }
        // weights k² t_k must also be negligible
        if k > 2 && t * (kf + 1.0).powi(2) < SERIES_TOL * total {
            return Ok(acc.map(|a| a / total));
        }
        if t == 0.0 {
            return Ok(acc.map(|a| a / total));
        }
    }
    Err(Error::NoConvergence { what: "sector series", terms: SERIES_CAP })
}

/// pFq with β̄_j replaced by β̄_j + 1 for j ≤ ν.
fn shifted_pfq(spec: &CsAlphaSpec, nu: i64) -> Result<f64> {
    let p = &spec.params;
    let lambda = p.lambda() as i64;
    let mu = spec.mu as i64;
    let s = |j: i64| p.beta_bar(j) + if j <= nu { 1.0 } else { 0.0 };
    let num: Vec<f64> = (mu + 1..=mu + spec.alpha as i64).map(s).collect();
    let den: Vec<f64> = (1..=mu).chain(mu + spec.alpha as i64 + 1..lambda).map(s).collect();
    Ok(pfq_real(&num, &den, spec.y(), DEFAULT_TOL)?.value)
}

/// Φ^{ν′}_ν(y; μ; α).
fn phi(spec: &CsAlphaSpec, nu_p: i64, nu: i64) -> Result<f64> {
    Ok(shifted_pfq(spec, nu_p)? / shifted_pfq(spec, nu)?)
}

fn prod_beta_bar(p: &AlgebraParams, range: std::ops::RangeInclusive<i64>) -> f64 {
    range.map(|j| p.beta_bar(j)).product()
}

fn closed_q_cs_alpha(spec: &CsAlphaSpec) -> Result<f64> {
    let p = &spec.params;
    let l = p.lambda() as f64;
    let li = p.lambda() as i64;
    let y = spec.y();
    let a = spec.alpha as i64;
    let b = |j: i64| p.beta_bar(j);
    if spec.on_disc() && li == 2 {
        return Ok((1.0 + y) / (1.0 - y));
    }
    match spec.mu {
        0 => {
            let ratio = prod_beta_bar(p, 1..=a) / prod_beta_bar(p, a + 1..=li - 1);
            Ok(l * (1.0 - b(li - 1) - ratio * y * phi(spec, li - 1, 0)? + b(li - 1) * phi(spec, li - 2, li - 1)?) - 1.0)
        }
        1 => {
            let ph = phi(spec, 0, 1)?;
            let ratio = prod_beta_bar(p, 2..=a + 1) / prod_beta_bar(p, a + 2..=li - 1);
            let num = (b(1) - 1.0 / l) * (1.0 + l * b(1) * ph) - l * b(1) * b(1) * ph * ph
                + l * ratio * y * phi(spec, li - 1, 1)?;
            Ok(num / (1.0 / l - b(1) + b(1) * ph))
        }
        m => {
            let m = m as i64;
            let mf = m as f64;
            let ph = phi(spec, m - 1, m)?;
            let num = b(m) - mf / l + l * b(m) * (b(m) - b(m - 1) - 1.0 / l) * ph - l * b(m) * b(m) * ph * ph
                + l * b(m - 1) * b(m) * phi(spec, m - 2, m)?;
            Ok(num / (mf / l - b(m) + b(m) * ph))
        }
    }
}

/// The state vector with one doubling of headroom beyond the tail policy.
fn oracle_cs_alpha(spec: &CsAlphaSpec) -> Result<StateVector> {
    let s = cs_alpha_state(spec, spec.params.lambda().max(16), Norm::Normalized)?;
    cs_alpha_state(spec, (2 * s.dim).min(MAX_DIM), Norm::Normalized)
}

fn oracle_eigenstate(params: &AlgebraParams, z: Complex64) -> Result<StateVector> {
    let s = eigenstate(params, z, params.lambda().max(16), Norm::Normalized)?;
    eigenstate(params, z, (2 * s.dim).min(MAX_DIM), Norm::Normalized)
}

fn number_stats(v: &StateVector) -> (f64, f64) {
    let n = v.expectation(|n| n as f64);
    let n2 = v.expectation(|n| (n * n) as f64);
    (n, n2)
}

pub fn mandel_q_cs_alpha(spec: &CsAlphaSpec, method: Method) -> Result<PhotonStats> {
    let lambda = spec.params.lambda() as f64;
    let at_origin = spec.z.norm() == 0.0;
    match method {
        Method::Closed => {
            if at_origin {
                return Ok(cs_alpha_origin(spec, lambda, Source::ClosedForm));
            }
            let (k1, k2) = sector_moments(spec)?;
            let mu = spec.mu as f64;
            let mean_n = lambda * k1 + mu;
            let mean_n2 = lambda * lambda * k2 + 2.0 * lambda * mu * k1 + mu * mu;
            Ok(stats(mean_n, mean_n2, closed_q_cs_alpha(spec)?, Source::ClosedForm))
        }
        Method::Oracle => {
            if at_origin {
                return Ok(cs_alpha_origin(spec, lambda, Source::VectorOracle));
            }
            let v = oracle_cs_alpha(spec)?;
            let (n, n2) = number_stats(&v);
            Ok(stats(n, n2, (n2 - n * n - n) / n, Source::VectorOracle))
        }
        Method::Bessel => Err(Error::UnsupportedOp("the Bessel form exists for eigenstates only".into())),
    }
}

fn cs_alpha_origin(spec: &CsAlphaSpec, lambda: f64, source: Source) -> PhotonStats {
    let mu = spec.mu as f64;
    if spec.mu == 0 {
        zero_limit(lambda - 1.0, source)
    } else {
        PhotonStats { mean_n: mu, mean_n2: mu * mu, mandel_q: -1.0, source, limit: false }
    }
}

/// Dressed or real quadrature variances in |z; μ; α⟩.
pub fn squeezing_cs_alpha(spec: &CsAlphaSpec, kind: Quadrature, method: Method) -> Result<SqueezeReport> {
    let p = &spec.params;
    let lambda = p.lambda();
    let l = lambda as f64;
    let mu = spec.mu as i64;
    match method {
        Method::Closed => {
            let (k1, _) = if spec.z.norm() == 0.0 { (0.0, 0.0) } else { sector_moments(spec)? };
            let mean_n = l * k1 + mu as f64;
            match kind {
                Quadrature::Dressed => {
                    let vac = l * (p.beta_bar(mu) + p.beta_bar(mu + 1)) / 2.0;
                    let h0 = mean_n - mu as f64 + vac;
                    // Re⟨a²⟩ = Re⟨J₊ + J₋⟩ at λ = 2; a² leaves the sector otherwise
                    let shift = if lambda == 2 {
                        let a2 = if spec.alpha == 0 {
                            1.0
                        } else {
                            // a|ψ⟩ = z a†|ψ⟩ gives ⟨a²⟩ = z ⟨F(N+1)⟩
                            mean_n - mu as f64 + l * p.beta_bar(mu + 1)
                        };
                        spec.z.re * a2
                    } else {
                        0.0
                    };
                    let rhs = (l * (p.beta_bar(mu + 1) - p.beta_bar(mu))).powi(2) / 4.0;
                    Ok(SqueezeReport::new(h0 + shift, h0 - shift, vac, rhs, kind, Source::ClosedForm))
                }
                Quadrature::Real => {
                    let shift = if lambda == 2 {
                        let alpha = spec.alpha;
                        let h = if spec.z.norm() == 0.0 {
                            real_ratio(p, spec.mu, alpha, 0.0)
                        } else {
                            sector_average(spec, |k| [real_ratio(p, spec.mu, alpha, k)])?[0]
                        };
                        spec.z.re * h
                    } else {
                        0.0
                    };
                    let base = mean_n + 0.5;
                    Ok(SqueezeReport::new(base + shift, base - shift, mu as f64 + 0.5, 0.25, kind, Source::ClosedForm))
                }
            }
        }
        Method::Oracle => {
            let v = oracle_cs_alpha(spec)?;
            Ok(oracle_squeeze(p, &v, kind, mu as usize))
        }
        Method::Bessel => Err(Error::UnsupportedOp("the Bessel form exists for eigenstates only".into())),
    }
}

/// √((N+1)(N+2)/(F(N+1)F(N+2))), times F(N+1) when α = 1, at N = 2k + μ.
fn real_ratio(p: &AlgebraParams, mu: usize, alpha: usize, k: f64) -> f64 {
    let n = 2.0 * k + mu as f64;
    let f = |m: f64| structure_function(p, m as usize);
    let r = ((n + 1.0) * (n + 2.0) / (f(n + 1.0) * f(n + 2.0))).sqrt();
    if alpha == 1 {
        r * f(n + 1.0)
    } else {
        r
    }
}

/// Variances from ⟨a⟩, ⟨a²⟩, ⟨aa†⟩, ⟨a†a⟩ (F → n for real photons).
fn oracle_squeeze(p: &AlgebraParams, v: &StateVector, kind: Quadrature, vacuum_level: usize) -> SqueezeReport {
    let f = |n: usize| match kind {
        Quadrature::Dressed => structure_function(p, n),
        Quadrature::Real => n as f64,
    };
    let c = &v.coeffs;
    let w: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    let mut a1 = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut ada = 0.0;
    let mut aad = 0.0;
    for n in 0..c.len() {
        let pn = c[n].norm_sqr();
        ada += f(n) * pn;
        aad += f(n + 1) * pn;
        if n >= 1 {
            a1 += c[n - 1].conj() * c[n] * f(n).sqrt();
        }
        if n >= 2 {
            a2 += c[n - 2].conj() * c[n] * (f(n) * f(n - 1)).sqrt();
        }
    }
    let (a1, a2, ada, aad) = (a1 / w, a2 / w, ada / w, aad / w);
    let sym = 0.5 * (aad + ada);
    let vx = a2.re + sym - 2.0 * a1.re * a1.re;
    let vp = -a2.re + sym - 2.0 * a1.im * a1.im;
    let vac = 0.5 * (f(vacuum_level) + f(vacuum_level + 1));
    let rhs = 0.25 * (aad - ada).powi(2);
    SqueezeReport::new(vx, vp, vac, rhs, kind, Source::VectorOracle)
}

// ---------------------------------------------------------------------------
// eigenstates |z⟩

/// N^{(0)}_μ(|ω|) t^μ / Π_{ν≤μ} β̄_ν for μ = 0..λ-1, t = |z|²/λ.
fn eigen_terms(params: &AlgebraParams, t: f64) -> Result<Vec<f64>> {
    let lambda = params.lambda();
    let mut prod = 1.0;
    let mut out = Vec::with_capacity(lambda);
    for mu in 0..lambda {
        if mu > 0 {
            prod *= params.beta_bar(mu as i64);
        }
        let f = pfq_real(&[], &denominator_params(params, mu, 0), t.powi(lambda as i32), DEFAULT_TOL)?;
        out.push(f.value * t.powi(mu as i32) / prod);
    }
    Ok(out)
}

/// (S₁, S₂, 𝒩) at t = |z|²/λ.
pub fn s_series(params: &AlgebraParams, t: f64) -> Result<(f64, f64, f64)> {
    let l = params.lambda() as f64;
    let b = |j: usize| params.beta_bar(j as i64);
    let terms = eigen_terms(params, t)?;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for (mu, w) in terms.iter().enumerate() {
        let m = mu as f64;
        s1 += w * (t + m / l - b(mu));
        s2 += w
            * (m * (m - 1.0) / l - (2.0 * m - 1.0) * b(mu) + l * b(mu) * b(mu)
                + (2.0 * m + 1.0 - l * b(mu) - l * b(mu + 1)) * t
                + l * t * t);
    }
    Ok((s1, s2, terms.iter().sum()))
}

/// R(t) = I_{β̄₁}(2t) / (I_{β̄₁-1}(2t) + I_{β̄₁}(2t)).
pub fn bessel_ratio(beta_bar_1: f64, t: f64) -> Result<f64> {
    let i1 = bessel_i(beta_bar_1, 2.0 * t)?.value;
    let i0 = bessel_i(beta_bar_1 - 1.0, 2.0 * t)?.value;
    Ok(i1 / (i0 + i1))
}

pub fn mandel_q_eigenstate(params: &AlgebraParams, z_abs: f64, method: Method) -> Result<PhotonStats> {
    if !(z_abs >= 0.0) {
        return Err(Error::Domain(format!("|z| must be >= 0, got {z_abs}")));
    }
    let lambda = params.lambda();
    let l = lambda as f64;
    let t = z_abs * z_abs / l;
    let source = if method == Method::Oracle { Source::VectorOracle } else { Source::ClosedForm };
    if z_abs == 0.0 {
        return Ok(zero_limit(0.0, source));
    }
    match method {
        Method::Closed => {
            let (s1, s2, norm) = s_series(params, t)?;
            let mean_n = l * s1 / norm;
            let q = s2 / s1 - l * s1 / norm;
            Ok(stats(mean_n, mean_n * (q + 1.0) + mean_n * mean_n, q, source))
        }
        Method::Bessel => {
            if lambda != 2 {
                return Err(Error::UnsupportedOp(format!("the Bessel form needs lambda = 2, got {lambda}")));
            }
            let b1 = params.beta_bar(1);
            let r = bessel_ratio(b1, t)?;
            let c = 1.0 - 2.0 * b1;
            let q = c * (2.0 * t - 2.0 * (2.0 * t + b1) * r - c * r * r) / (2.0 * t + c * r);
            // R is the odd-level probability, so ⟨N⟩ = |z|² - β₁ R
            let mean_n = 2.0 * t + c * r;
            Ok(stats(mean_n, mean_n * (q + 1.0) + mean_n * mean_n, q, source))
        }
        Method::Oracle => {
            let v = oracle_eigenstate(params, Complex64::new(z_abs, 0.0))?;
            let (n, n2) = number_stats(&v);
            Ok(stats(n, n2, (n2 - n * n - n) / n, source))
        }
    }
}

/// Σ_n g(n) |c_n|² / Σ_n |c_n|² for the unnormalized |z⟩, c_n = z^n/√(F(1)···F(n)).
fn eigen_average<const M: usize>(params: &AlgebraParams, z_abs: f64, g: impl Fn(usize) -> [f64; M]) -> Result<[f64; M]> {
    let x = z_abs * z_abs;
    let mut w = 1.0;
    let mut total = 0.0;
    let mut acc = [0.0; M];
    let lambda = params.lambda();
    for n in 0..SERIES_CAP {
        if n > 0 {
            w *= x / structure_function(params, n);
        }
        total += w;
        for (a, v) in acc.iter_mut().zip(g(n)) {
            *a += w * v;
        }
        // decreasing over a full period once n exceeds |z|²
        if n > lambda && (n as f64) > x && w * ((n + 1) as f64).powi(2) < SERIES_TOL * total {
            return Ok(acc.map(|a| a / total));
        }
    }
    Err(Error::NoConvergence { what: "eigenstate series", terms: SERIES_CAP })
}

pub fn squeezing_eigenstate(params: &AlgebraParams, z: Complex64, kind: Quadrature, method: Method) -> Result<SqueezeReport> {
    let lambda = params.lambda();
    let l = lambda as f64;
    let z_abs = z.norm();
    let t = z_abs * z_abs / l;
    let source = if method == Method::Oracle { Source::VectorOracle } else { Source::ClosedForm };
    match (kind, method) {
        (_, Method::Oracle) => {
            let v = oracle_eigenstate(params, z)?;
            Ok(oracle_squeeze(params, &v, kind, 0))
        }
        (Quadrature::Dressed, Method::Closed) => {
            let terms = eigen_terms(params, t)?;
            let norm: f64 = terms.iter().sum();
            let s: f64 = terms
                .iter()
                .enumerate()
                .map(|(mu, w)| (params.beta_bar(mu as i64 + 1) - params.beta_bar(mu as i64)) * w)
                .sum();
            let var = 0.5 * l * s / norm;
            let vac = 0.5 * l * params.beta_bar(1);
            Ok(SqueezeReport::new(var, var, vac, var * var, kind, source))
        }
        (Quadrature::Dressed, Method::Bessel) => {
            if lambda != 2 {
                return Err(Error::UnsupportedOp(format!("the Bessel form needs lambda = 2, got {lambda}")));
            }
            let b1 = params.beta_bar(1);
            let x = 1.0 + (1.0 - 2.0 * b1) / b1 * bessel_ratio(b1, t)?;
            let vac = b1;
            let var = x * vac;
            Ok(SqueezeReport::new(var, var, vac, var * var, kind, source))
        }
        (Quadrature::Real, Method::Closed) => {
            let f = |n: usize| structure_function(params, n);
            let [h1, h2] = eigen_average(params, z_abs, |n| {
                let n1 = (n + 1) as f64;
                let n2 = (n + 2) as f64;
                [(n1 / f(n + 1)).sqrt(), (n1 * n2 / (f(n + 1) * f(n + 2))).sqrt()]
            })?;
            let (s1, _, norm) = s_series(params, t)?;
            let mean_n = if z_abs == 0.0 { 0.0 } else { l * s1 / norm };
            let base = mean_n + 0.5 - z_abs * z_abs * h2;
            let vx = base + 2.0 * z.re * z.re * (h2 - h1 * h1);
            let vp = base + 2.0 * z.im * z.im * (h2 - h1 * h1);
            Ok(SqueezeReport::new(vx, vp, 0.5, 0.25, kind, source))
        }
        (Quadrature::Real, Method::Bessel) => {
            Err(Error::UnsupportedOp("the Bessel form covers dressed quadratures only".into()))
        }
    }
}

/// ⟨N⟩ in |z⟩ as λ S₁ / 𝒩.
pub fn eigen_mean_n(params: &AlgebraParams, z_abs: f64) -> Result<f64> {
    let l = params.lambda() as f64;
    let (s1, _, _) = s_series(params, z_abs * z_abs / l)?;
    Ok(l * s1 / eigen_normalization(params, z_abs)?.value)
}
