//! Coherent states |z; μ; α⟩ and annihilation-operator eigenstates |z⟩.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::algebra::{build_operator, structure_function, AlgebraParams, OpKind};
use crate::error::{Error, Result};
use crate::special::{bessel_i, ln_gamma, pfq, pfq_real, SeriesValue};

/// Series tolerance for normalizations; tighter than the pfq default so norms match Σ|c_n|² to rounding.
pub const NORM_TOL: f64 = 1e-15;

pub const TAIL_THRESHOLD: f64 = 1e-10;
pub const MAX_DIM: usize = 1024;
pub const DEFAULT_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Normalized,
    /// The paper's round-bracket states, c_0 = 1.
    Unnormalized,
}

/// Label of a coherent state |z; μ; α⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct CsAlphaSpec {
    pub params: AlgebraParams,
    pub mu: usize,
    pub alpha: usize,
    pub z: Complex64,
}

impl CsAlphaSpec {
    pub fn new(params: &AlgebraParams, mu: usize, alpha: usize, z: Complex64) -> Result<Self> {
        let lambda = params.lambda();
        if alpha > lambda / 2 || mu + alpha + 1 > lambda {
            return Err(Error::Sector { mu, alpha, lambda });
        }
        let spec = CsAlphaSpec { params: params.clone(), mu, alpha, z };
        if spec.on_disc() && !(spec.y() < 1.0) {
            return Err(Error::Domain(format!(
                "alpha = lambda/2 needs y < 1, got y = {}",
                spec.y()
            )));
        }
        Ok(spec)
    }

    pub fn with_z(&self, z: Complex64) -> Result<Self> {
        CsAlphaSpec::new(&self.params, self.mu, self.alpha, z)
    }

    /// r = λ - 2α.
    pub fn r(&self) -> usize {
        self.params.lambda() - 2 * self.alpha
    }

    pub fn on_disc(&self) -> bool {
        self.r() == 0
    }

    /// y = |z|² / λ^{λ-2α}.
    pub fn y(&self) -> f64 {
        self.z.norm_sqr() / (self.params.lambda() as f64).powi(self.r() as i32)
    }

    /// β̄_{μ+1}..β̄_{μ+α}.
    pub fn numerator(&self) -> Vec<f64> {
        let mu = self.mu as i64;
        (mu + 1..=mu + self.alpha as i64).map(|nu| self.params.beta_bar(nu)).collect()
    }

    /// β̄_1+1..β̄_μ+1, β̄_{μ+α+1}..β̄_{λ-1}.
    pub fn denominator(&self) -> Vec<f64> {
        denominator_params(&self.params, self.mu, self.alpha)
    }

    /// N^{(α)}_μ(|z|).
    pub fn normalization(&self) -> Result<SeriesValue<f64>> {
        pfq_real(&self.numerator(), &self.denominator(), self.y(), NORM_TOL)
    }

    /// c_{k+1}/c_k without the z factor.
    fn ratio(&self, k: usize) -> f64 {
        let kf = k as f64;
        let num: f64 = self.numerator().iter().map(|b| b + kf).product();
        let den: f64 = (kf + 1.0) * self.denominator().iter().map(|b| b + kf).product::<f64>();
        let l = self.params.lambda() as f64;
        (num / den).sqrt() * l.powf(-(self.r() as f64) / 2.0)
    }
}

pub(crate) fn denominator_params(params: &AlgebraParams, mu: usize, alpha: usize) -> Vec<f64> {
    let lambda = params.lambda() as i64;
    let mu = mu as i64;
    (1..=mu)
        .map(|nu| params.beta_bar(nu) + 1.0)
        .chain((mu + alpha as i64 + 1..lambda).map(|nu| params.beta_bar(nu)))
        .collect()
}

/// Coefficients over |0⟩..|K-1⟩ with norm bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub dim: usize,
    pub coeffs: Vec<Complex64>,
    /// Norm² of the unnormalized (c_0 = 1) series, from the closed form.
    pub norm_sq_analytic: f64,
    /// Estimated mass beyond the truncation, relative to the total.
    pub tail_bound: f64,
    pub normalized: bool,
}

impl StateVector {
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// ⟨self|other⟩ over the common leading levels.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    /// Σ f(n) |c_n|² / Σ |c_n|².
    pub fn expectation<F: Fn(usize) -> f64>(&self, f: F) -> f64 {
        let mut s = 0.0;
        let mut w = 0.0;
        for (n, c) in self.coeffs.iter().enumerate() {
            let p = c.norm_sqr();
            s += f(n) * p;
            w += p;
        }
        s / w
    }

    pub fn resized(&self, dim: usize) -> StateVector {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(dim, Complex64::new(0.0, 0.0));
        StateVector { dim, coeffs, ..self.clone() }
    }

    pub fn scaled(&self, f: Complex64) -> StateVector {
        StateVector { coeffs: self.coeffs.iter().map(|c| c * f).collect(), ..self.clone() }
    }

    pub fn sub_norm_sq(&self, other: &StateVector) -> f64 {
        let dim = self.dim.max(other.dim);
        let a = self.resized(dim);
        let b = other.resized(dim);
        a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x - y).norm_sqr()).sum()
    }
}

/// Relative tail Σ_{j ≥ 0} |t_0|² ρ^j given the first omitted |term|² and the ratio of successive terms.
fn tail_estimate(first_omitted: f64, ratio: f64, total: f64) -> f64 {
    if first_omitted == 0.0 {
        return 0.0;
    }
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    first_omitted / (1.0 - ratio) / total
}

pub fn cs_alpha_state(spec: &CsAlphaSpec, k: usize, norm: Norm) -> Result<StateVector> {
    let lambda = spec.params.lambda();
    if k < lambda {
        return Err(Error::TruncationTooSmall(format!("K = {k} < lambda = {lambda}")));
    }
    let n_sq = spec.normalization()?.value;
    let mut dim = k;
    loop {
        let kmax = if dim > spec.mu { (dim - 1 - spec.mu) / lambda } else { 0 };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        let mut c = Complex64::new(1.0, 0.0);
        let mut total = 0.0;
        for kk in 0..=kmax {
            coeffs[kk * lambda + spec.mu] = c;
            total += c.norm_sqr();
            c *= spec.z * spec.ratio(kk);
        }
        let next = c.norm_sqr();
        let rho = (spec.z * spec.ratio(kmax + 1)).norm_sqr();
        let tail = tail_estimate(next, rho, total.max(n_sq));
        if tail <= TAIL_THRESHOLD {
            let normalized = norm == Norm::Normalized;
            if normalized {
                let f = 1.0 / n_sq.sqrt();
                coeffs.iter_mut().for_each(|x| *x *= f);
            }
            return Ok(StateVector { dim, coeffs, norm_sq_analytic: n_sq, tail_bound: tail, normalized });
        }
        if dim >= MAX_DIM {
            return Err(Error::TruncationTooSmall(format!(
                "tail {tail:e} exceeds {TAIL_THRESHOLD:e} at K = {dim}"
            )));
        }
        dim = (dim * 2).min(MAX_DIM);
    }
}

/// 𝒩(|z|) = Σ_μ ₀F_{λ-1}(...; t^λ) t^μ / Π_{ν≤μ} β̄_ν, t = |z|²/λ.
pub fn eigen_normalization(params: &AlgebraParams, z_abs: f64) -> Result<SeriesValue<f64>> {
    let lambda = params.lambda();
    let t = z_abs * z_abs / lambda as f64;
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut terms = 0;
    let mut prod = 1.0;
    for mu in 0..lambda {
        if mu > 0 {
            prod *= params.beta_bar(mu as i64);
        }
        let f = pfq_real(&[], &denominator_params(params, mu, 0), t.powi(lambda as i32), NORM_TOL)?;
        let w = t.powi(mu as i32) / prod;
        sum += f.value * w;
        err += f.abs_error * w;
        terms += f.terms;
    }
    Ok(SeriesValue { value: sum, abs_error: err, terms, converged: true })
}

/// λ = 2: 𝒩(|z|) = Γ(β̄₁) t^{1-β̄₁} [I_{β̄₁-1}(2t) + I_{β̄₁}(2t)], t = |z|²/2.
pub fn paraboson_normalization(beta_bar_1: f64, z_abs: f64) -> Result<f64> {
    let t = z_abs * z_abs / 2.0;
    if t == 0.0 {
        return Ok(1.0);
    }
    let i0 = bessel_i(beta_bar_1 - 1.0, 2.0 * t)?.value;
    let i1 = bessel_i(beta_bar_1, 2.0 * t)?.value;
    Ok((ln_gamma(beta_bar_1) + (1.0 - beta_bar_1) * t.ln()).exp() * (i0 + i1))
}

/// λ = 2: N^{(0)}_μ(|z|²) = Γ(β̄₁+μ) (|z|²/2)^{1-β̄₁-μ} I_{β̄₁-1+μ}(|z|²).
pub fn paraboson_sector_normalization(beta_bar_1: f64, mu: usize, z_abs: f64) -> Result<f64> {
    let x = z_abs * z_abs;
    if x == 0.0 {
        return Ok(1.0);
    }
    let b = beta_bar_1 + mu as f64;
    Ok((ln_gamma(b) + (1.0 - b) * (x / 2.0).ln()).exp() * bessel_i(b - 1.0, x)?.value)
}

/// Eigenstate a|z⟩ = z|z⟩, c_n = z^n / √(F(1)···F(n)) before normalization.
pub fn eigenstate(params: &AlgebraParams, z: Complex64, k: usize, norm: Norm) -> Result<StateVector> {
    let lambda = params.lambda();
    if k < lambda {
        return Err(Error::TruncationTooSmall(format!("K = {k} < lambda = {lambda}")));
    }
    let n_sq = eigen_normalization(params, z.norm())?.value;
    let mut dim = k;
    loop {
        let mut coeffs = Vec::with_capacity(dim);
        let mut c = Complex64::new(1.0, 0.0);
        let mut total = 0.0;
        for n in 0..dim {
            if n > 0 {
                c *= z / structure_function(params, n).sqrt();
            }
            coeffs.push(c);
            total += c.norm_sqr();
        }
        // the tail decays through full periods of λ levels
        let mut next = c;
        let mut first = 0.0;
        let mut period = 1.0;
        for j in 0..lambda {
            next *= z / structure_function(params, dim + j).sqrt();
            first += next.norm_sqr();
            if j + 1 == lambda {
                let mut p = next;
                for i in 0..lambda {
                    p *= z / structure_function(params, dim + lambda + i).sqrt();
                }
                period = p.norm_sqr() / next.norm_sqr().max(f64::MIN_POSITIVE);
            }
        }
        let tail = tail_estimate(first, period, total.max(n_sq));
        if tail <= TAIL_THRESHOLD {
            let normalized = norm == Norm::Normalized;
            if normalized {
                let f = 1.0 / n_sq.sqrt();
                coeffs.iter_mut().for_each(|x| *x *= f);
            }
            return Ok(StateVector { dim, coeffs, norm_sq_analytic: n_sq, tail_bound: tail, normalized });
        }
        if dim >= MAX_DIM {
            return Err(Error::TruncationTooSmall(format!(
                "tail {tail:e} exceeds {TAIL_THRESHOLD:e} at K = {dim}"
            )));
        }
        dim = (dim * 2).min(MAX_DIM);
    }
}

/// ⟨s1|s2⟩ from the closed form.
pub fn overlap_cs_alpha(s1: &CsAlphaSpec, s2: &CsAlphaSpec) -> Result<Complex64> {
    if s1.params != s2.params {
        return Err(Error::Domain("overlap needs identical algebra parameters".into()));
    }
    if s1.mu != s2.mu {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (lo, hi) = if s1.alpha <= s2.alpha { (s1, s2) } else { (s2, s1) };
    let lambda = s1.params.lambda() as f64;
    let arg = s1.z.conj() * s2.z / lambda.powi(s1.params.lambda() as i32 - (s1.alpha + s2.alpha) as i32);
    let f = pfq(&lo.numerator(), &hi.denominator(), arg, NORM_TOL)?;
    let n = s1.normalization()?.value * s2.normalization()?.value;
    Ok(f.value / n.sqrt())
}

/// ⟨zp|z⟩ from the closed form.
pub fn overlap_eigenstate(params: &AlgebraParams, z: Complex64, zp: Complex64) -> Result<Complex64> {
    let lambda = params.lambda();
    let w = zp.conj() * z / lambda as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prod = 1.0;
    for mu in 0..lambda {
        if mu > 0 {
            prod *= params.beta_bar(mu as i64);
        }
        let f = pfq(&[], &denominator_params(params, mu, 0), w.powu(lambda as u32), NORM_TOL)?;
        sum += f.value * w.powu(mu as u32) / prod;
    }
    let n = eigen_normalization(params, z.norm())?.value * eigen_normalization(params, zp.norm())?.value;
    Ok(sum / n.sqrt())
}

/// |z_μ⟩, the F_μ part of |z⟩, built from |z^λ; μ; 0⟩.
pub fn component_zmu(params: &AlgebraParams, z: Complex64, mu: usize, k: usize) -> Result<StateVector> {
    let lambda = params.lambda();
    if mu >= lambda {
        return Err(Error::Index(format!("mu = {mu} >= lambda = {lambda}")));
    }
    let full = eigenstate(params, z, k, Norm::Normalized)?;
    let omega = z.powu(lambda as u32);
    let spec = CsAlphaSpec::new(params, mu, 0, omega)?;
    let cs = cs_alpha_state(&spec, full.dim, Norm::Normalized)?;
    let n_mu = spec.normalization()?.value;
    let prod: f64 = (1..=mu).map(|nu| params.beta_bar(nu as i64)).product();
    let f = (n_mu / full.norm_sq_analytic).sqrt() / prod.sqrt()
        * (z / (lambda as f64).sqrt()).powu(mu as u32);
    let mut out = cs.scaled(f).resized(full.dim);
    out.norm_sq_analytic = full.norm_sq_analytic;
    out.tail_bound = full.tail_bound.max(cs.tail_bound);
    Ok(out)
}

fn interior_norm(v: &[Complex64], rows: usize) -> f64 {
    v.iter().take(rows).map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// ‖(a^{λ-α} − z a†^α)ψ‖ / ‖ψ‖ on the rows unaffected by truncation.
pub fn residual_cs_alpha(spec: &CsAlphaSpec, state: &StateVector) -> Result<f64> {
    let lambda = spec.params.lambda();
    let a = build_operator(&spec.params, OpKind::A, state.dim)?;
    let ad = build_operator(&spec.params, OpKind::Adag, state.dim)?;
    let mut lhs = state.coeffs.clone();
    for _ in 0..lambda - spec.alpha {
        lhs = a.apply(&lhs);
    }
    let mut rhs = state.coeffs.clone();
    for _ in 0..spec.alpha {
        rhs = ad.apply(&rhs);
    }
    let diff: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(l, r)| l - spec.z * r).collect();
    let rows = state.dim - lambda;
    Ok(interior_norm(&diff, rows) / interior_norm(&state.coeffs, state.dim))
}

/// ‖(a − z)|z⟩‖ / ‖|z⟩‖ on the interior rows.
pub fn residual_eigenstate(params: &AlgebraParams, z: Complex64, state: &StateVector) -> Result<f64> {
    let a = build_operator(params, OpKind::A, state.dim)?;
    let av = a.apply(&state.coeffs);
    let diff: Vec<Complex64> = av.iter().zip(&state.coeffs).map(|(l, c)| l - z * c).collect();
    Ok(interior_norm(&diff, state.dim - 1) / interior_norm(&state.coeffs, state.dim))
}

/// λ-periodic phase e^{2πiμ/λ}.
pub fn root_of_unity(lambda: usize, mu: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * mu as f64 / lambda as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_label() {
        let p = AlgebraParams::new(3, &[3.0, -3.0, 0.0]).unwrap();
        let s = CsAlphaSpec::new(&p, 1, 1, Complex64::new(0.0, 0.0)).unwrap();
        let v = cs_alpha_state(&s, 64, Norm::Normalized).unwrap();
        assert_eq!(v.coeffs[1], Complex64::new(1.0, 0.0));
        assert!((v.norm_sq() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sector_and_disc_errors() {
        let p = AlgebraParams::new(2, &[3.0, -3.0]).unwrap();
        assert!(matches!(CsAlphaSpec::new(&p, 1, 1, Complex64::new(0.1, 0.0)), Err(Error::Sector { .. })));
        assert!(matches!(CsAlphaSpec::new(&p, 0, 1, Complex64::new(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn undeformed_coherent_state() {
        let p = AlgebraParams::new(2, &[0.0, 0.0]).unwrap();
        let v = eigenstate(&p, Complex64::new(1.0, 0.0), 64, Norm::Normalized).unwrap();
        let mut fact = 1.0;
        for n in 0..20 {
            if n > 0 {
                fact *= n as f64;
            }
            let exact = (-0.5f64).exp() / fact.sqrt();
            assert!((v.coeffs[n].re - exact).abs() < 1e-14);
        }
    }
}
