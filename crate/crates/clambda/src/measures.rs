//! Weight functions resolving unity, moment problems and their checks.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::algebra::{structure_function, AlgebraParams};
use crate::error::{Error, Result};
use crate::quad::{half_line, half_line_abs, tanh_sinh};
use crate::special::{
    appell_f3_continued, find_pairing, hyp2f1, hyp2f1_split, kummer_u, ln_gamma, meijer_g_split, rgamma, MeijerSpec,
};
use crate::special::gamma::gamma_sign;
use crate::states::root_of_unity;

/// Relative tolerance of the weight evaluators.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Relative tolerance handed to the moment quadratures.
pub const QUAD_TOL: f64 = 1e-11;
const SERIES_MIN_Y: f64 = 0.1;
const SERIES_MAX_DEGREE: usize = 400;

/// ∫ y^k h(y) dy = B(k) on (0, y_max).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentProblem {
    params: AlgebraParams,
    mu: usize,
    alpha: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    ln_a_const: f64,
}

impl MomentProblem {
    pub fn new(params: &AlgebraParams, mu: usize, alpha: usize) -> Result<Self> {
        let lambda = params.lambda();
        if alpha > lambda / 2 || mu + alpha + 1 > lambda {
            return Err(Error::Sector { mu, alpha, lambda });
        }
        let (a, b) = mellin_lists(params, mu, alpha);
        let (m, al, l) = (mu as i64, alpha as i64, lambda as i64);
        let r = (lambda - 2 * alpha) as f64;
        let mut ln_a = -PI.ln() - r * (lambda as f64).ln();
        for nu in m + 1..=m + al {
            ln_a += ln_gamma(params.beta_bar(nu));
        }
        for nu in 1..=m {
            ln_a -= ln_gamma(params.beta_bar(nu) + 1.0);
        }
        for nu in m + al + 1..l {
            ln_a -= ln_gamma(params.beta_bar(nu));
        }
        Ok(MomentProblem { params: params.clone(), mu, alpha, a, b, ln_a_const: ln_a })
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// r = λ - 2α.
    pub fn r(&self) -> usize {
        self.params.lambda() - 2 * self.alpha
    }

    pub fn y_max(&self) -> f64 {
        if self.r() == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    }

    /// A^{(α)}_μ.
    pub fn a_const(&self) -> f64 {
        self.ln_a_const.exp()
    }

    /// a_ν = β̄_{μ+ν} - 1.
    pub fn a_list(&self) -> &[f64] {
        &self.a
    }

    /// (0, β̄_1..β̄_μ, β̄_{μ+α+1}-1..β̄_{λ-1}-1).
    pub fn b_list(&self) -> &[f64] {
        &self.b
    }

    pub fn ln_moment(&self, k: usize) -> f64 {
        let kf = k as f64;
        let mut l = self.ln_a_const;
        for &b in &self.b {
            l += ln_gamma(b + kf + 1.0);
        }
        for &a in &self.a {
            l -= ln_gamma(a + kf + 1.0);
        }
        l
    }

    /// Same problem with A multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> MomentProblem {
        MomentProblem { ln_a_const: self.ln_a_const + factor.ln(), ..self.clone() }
    }
}

pub(crate) fn mellin_lists(params: &AlgebraParams, mu: usize, alpha: usize) -> (Vec<f64>, Vec<f64>) {
    let (m, al, l) = (mu as i64, alpha as i64, params.lambda() as i64);
    let a = (m + 1..=m + al).map(|nu| params.beta_bar(nu) - 1.0).collect();
    let b = std::iter::once(0.0)
        .chain((1..=m).map(|nu| params.beta_bar(nu)))
        .chain((m + al + 1..l).map(|nu| params.beta_bar(nu) - 1.0))
        .collect();
    (a, b)
}

/// B^{(α)}_μ(k).
pub fn moment_target(problem: &MomentProblem, k: usize) -> f64 {
    problem.ln_moment(k).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Positivity {
    /// No a-parameters to pair (α = 0).
    Unconditional,
    /// pairing[i] = j with a_i > b_j.
    Certified { a: Vec<f64>, b: Vec<f64>, pairing: Vec<usize> },
    Refused { a: Vec<f64>, b: Vec<f64> },
}

impl Positivity {
    pub fn holds(&self) -> bool {
        !matches!(self, Positivity::Refused { .. })
    }
}

pub fn positivity_condition(params: &AlgebraParams, mu: usize, alpha: usize) -> Result<Positivity> {
    let problem = MomentProblem::new(params, mu, alpha)?;
    Ok(certify(&problem))
}

fn certify(problem: &MomentProblem) -> Positivity {
    let (a, b) = (problem.a.clone(), problem.b.clone());
    if a.is_empty() {
        return Positivity::Unconditional;
    }
    match find_pairing(&a, &b) {
        Some(pairing) => Positivity::Certified { a, b, pairing },
        None => Positivity::Refused { a, b },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightForm {
    MeijerM0,
    Kummer,
    MeijerConvolution,
    BetaPower,
    Gauss2F1,
    AppellF3,
    MultipleSeries,
    FourierMix,
}

impl WeightForm {
    pub fn tag(self) -> &'static str {
        match self {
            WeightForm::MeijerM0 => "meijer_m0",
            WeightForm::Kummer => "kummer",
            WeightForm::MeijerConvolution => "meijer_convolution",
            WeightForm::BetaPower => "beta_power",
            WeightForm::Gauss2F1 => "gauss2f1",
            WeightForm::AppellF3 => "appell_f3",
            WeightForm::MultipleSeries => "multiple_series",
            WeightForm::FourierMix => "fourier_mix",
        }
    }
}

/// h^{(α)}_μ(y).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    problem: MomentProblem,
    form: WeightForm,
    certificate: Positivity,
}

pub fn weight_function(params: &AlgebraParams, mu: usize, alpha: usize) -> Result<WeightFunction> {
    let problem = MomentProblem::new(params, mu, alpha)?;
    let certificate = certify(&problem);
    if let Positivity::Refused { a, b } = &certificate {
        return Err(Error::PositivityUnavailable(format!(
            "no injective pairing a_i > b_j for a = {a:?}, b = {b:?}"
        )));
    }
    let lambda = params.lambda();
    let form = match (problem.r(), alpha) {
        (_, 0) => WeightForm::MeijerM0,
        (0, 1) => WeightForm::BetaPower,
        (0, 2) => WeightForm::Gauss2F1,
        (0, 3) => WeightForm::AppellF3,
        (0, _) => WeightForm::MultipleSeries,
        (_, 1) if lambda == 3 => WeightForm::Kummer,
        _ => WeightForm::MeijerConvolution,
    };
    Ok(WeightFunction { problem, form, certificate })
}

impl WeightFunction {
    pub fn problem(&self) -> &MomentProblem {
        &self.problem
    }

    pub fn form(&self) -> WeightForm {
        self.form
    }

    pub fn certificate(&self) -> &Positivity {
        &self.certificate
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        self.eval_split(y, 1.0 - y)
    }

    /// h(y) with 1 - y supplied by the caller.
    pub fn eval_split(&self, y: f64, omy: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("weight needs y > 0, got {y}")));
        }
        let p = &self.problem;
        if p.r() == 0 && !(omy > 0.0) {
            return Ok(0.0);
        }
        let (a, b) = (&p.a, &p.b);
        let big_a = p.a_const();
        let v = match self.form {
            WeightForm::MeijerM0 | WeightForm::MeijerConvolution => {
                meijer_g_split(&MeijerSpec::general(a, b), y, omy, WEIGHT_TOL)?.value
            }
            WeightForm::Kummer => {
                (-y).exp() * kummer_u(a[0] - b[1], 1.0 - b[1], y)?.value
            }
            WeightForm::BetaPower => omy.powf(a[0] - 1.0) * rgamma(a[0]),
            WeightForm::Gauss2F1 => {
                let zeta = a[0] + a[1] - b[1];
                omy.powf(zeta - 1.0) * rgamma(zeta) * hyp2f1_split(a[0] - b[1], a[1] - b[1], zeta, omy, y)?.value
            }
            // the F3 and multiple series converge like (1-y)^n; small y uses the residue sum
            WeightForm::AppellF3 | WeightForm::MultipleSeries if y < SERIES_MIN_Y => {
                meijer_g_split(&MeijerSpec::general(a, b), y, omy, WEIGHT_TOL)?.value
            }
            WeightForm::AppellF3 => {
                let bp = self.shifted_beta_bar();
                let zeta = bp[1] + bp[2] + bp[3] - bp[4] - bp[5] - 1.0;
                let f3 = appell_f3_continued(
                    bp[1] - bp[4],
                    bp[3] - bp[5],
                    bp[2] - bp[4],
                    bp[3] - 1.0,
                    zeta,
                    omy,
                    -omy / y,
                )?
                .value;
                y.powf(bp[5] - bp[3]) * omy.powf(zeta - 1.0) * rgamma(zeta) * f3
            }
            WeightForm::MultipleSeries => return self.multiple_series(y, omy),
            WeightForm::FourierMix => unreachable!("sector weights are never Fourier mixtures"),
        };
        Ok(big_a * v)
    }

    /// β̄'_1..β̄'_{λ-1} (index 0 unused): the sector-μ parameters in μ = 0 notation.
    pub fn shifted_beta_bar(&self) -> Vec<f64> {
        let p = &self.problem;
        std::iter::once(f64::NAN)
            .chain(p.a.iter().map(|a| a + 1.0))
            .chain(p.b.iter().skip(1).map(|b| b + 1.0))
            .collect()
    }

    /// A · G^{α+r,0}_{α,α+r}(y | a; b), the Meijer form for any α.
    pub fn conjecture(&self, y: f64, omy: f64) -> Result<f64> {
        let p = &self.problem;
        Ok(p.a_const() * meijer_g_split(&MeijerSpec::general(&p.a, &p.b), y, omy, WEIGHT_TOL)?.value)
    }

    /// The formal multiple series of ₂F₁ functions, r = 0 and α ≥ 3.
    pub fn multiple_series(&self, y: f64, omy: f64) -> Result<f64> {
        let p = &self.problem;
        let al = p.alpha;
        if p.r() != 0 || al < 3 {
            return Err(Error::Domain("multiple series needs r = 0 and alpha >= 3".into()));
        }
        let bp = self.shifted_beta_bar();
        let d: Vec<f64> = (1..al).map(|q| bp[q] - bp[al + q]).collect(); // d[q-1] = β̄'_q - β̄'_{α+q}
        let e: Vec<f64> = (1..=al - 2).map(|q| bp[q + 1] - bp[al + q]).collect();
        let zeta0: f64 = (1..=al).map(|q| bp[q]).sum::<f64>() - (1..al).map(|q| bp[al + q]).sum::<f64>() - 1.0;
        let (mut ln_pre, mut sign_pre) = (p.ln_a_const, 1.0);
        for x in std::iter::once(d[0]).chain(e.iter().copied()) {
            ln_pre -= ln_gamma(x);
            sign_pre *= gamma_sign(x);
        }
        let nvar = al - 2;
        let mut sum = 0.0;
        let mut small = 0;
        for deg in 0..=SERIES_MAX_DEGREE {
            let mut shell = 0.0;
            let mut n = vec![0usize; nvar];
            n[nvar - 1] = deg;
            loop {
                shell += self.series_term(&n, &d, &e, zeta0, omy)?;
                if !next_composition(&mut n) {
                    break;
                }
            }
            sum += shell;
            if shell.abs() <= WEIGHT_TOL * sum.abs() {
                small += 1;
                if small >= 3 {
                    return Ok(sign_pre * ln_pre.exp() * sum);
                }
            } else {
                small = 0;
            }
        }
        let _ = y;
        Err(Error::NoConvergence { what: "multiple_series", terms: SERIES_MAX_DEGREE })
    }

    fn series_term(&self, n: &[usize], d: &[f64], e: &[f64], zeta0: f64, omy: f64) -> Result<f64> {
        let al = self.problem.alpha;
        let nsum: usize = n.iter().sum();
        let zeta = zeta0 + nsum as f64;
        let (mut l, mut s) = (0.0, 1.0);
        let mut add = |x: f64, sgn: f64| {
            l += sgn * ln_gamma(x);
            s *= gamma_sign(x);
        };
        let mut xi = 0.0;
        for p in 0..al - 2 {
            add(e[p] + n[p] as f64, 1.0);
            xi += d[p] + n[p] as f64;
            add(xi, 1.0);
            add(n[p] as f64 + 1.0, -1.0);
        }
        let eta = |p: usize| -> f64 {
            d[..=p].iter().sum::<f64>() + n[..p].iter().map(|&x| x as f64).sum::<f64>()
        };
        for p in 1..=al.saturating_sub(3) {
            add(eta(p), -1.0);
        }
        add(zeta, -1.0);
        let last = eta(al - 2);
        let bp = self.shifted_beta_bar();
        let f = hyp2f1(bp[al] - bp[2 * al - 1], last, zeta, omy)?.value;
        Ok(s * (l + (zeta - 1.0) * omy.ln()).exp() * f)
    }
}

/// Next composition of the same total in reverse-lexicographic order.
fn next_composition(n: &mut [usize]) -> bool {
    let k = n.len();
    if k < 2 {
        return false;
    }
    // find rightmost nonzero entry that is not the first
    let Some(j) = (1..k).rev().find(|&j| n[j] > 0) else {
        return false;
    };
    let tail = n[j];
    n[j] = 0;
    n[j - 1] += 1;
    n[k - 1] = tail - 1;
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub k: usize,
    pub target: f64,
    pub integral: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
    pub max_rel_error: f64,
    pub pass: bool,
}

/// ∫ f(y) h(y) dy over the support of the weight.
pub fn integrate_weighted<F>(weight: &WeightFunction, f: F, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_with(weight, |y, omy| weight.eval_split(y, omy), f, tol)
}

fn integrate_with<H, F>(weight: &WeightFunction, h: H, f: F, tol: f64) -> Result<f64>
where
    H: Fn(f64, f64) -> Result<f64>,
    F: Fn(f64) -> f64,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |y: f64, omy: f64| -> f64 {
        // nodes can underflow to the endpoint, which has measure zero
        if !(y > 0.0) {
            return 0.0;
        }
        match h(y, omy) {
            Ok(h) => f(y) * h,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let r = if weight.problem.r() == 0 {
        tanh_sinh(|y, _, dr| integrand(y, dr), 0.0, 1.0, tol)?
    } else {
        half_line(integrand, tol)?
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r.value)
}

/// ∫ y^k h(y) dy for k = 0..=k_max.
pub fn power_integrals(weight: &WeightFunction, k_max: usize, tol: f64) -> Result<Vec<f64>> {
    // the integrands share quadrature nodes, so weight values are reused across k
    let cache: RefCell<HashMap<(u64, u64), f64>> = RefCell::new(HashMap::new());
    let h = |y: f64, omy: f64| -> Result<f64> {
        let key = (y.to_bits(), omy.to_bits());
        if let Some(v) = cache.borrow().get(&key) {
            return Ok(*v);
        }
        let v = weight.eval_split(y, omy)?;
        cache.borrow_mut().insert(key, v);
        Ok(v)
    };
    (0..=k_max).map(|k| integrate_with(weight, &h, |y| y.powi(k as i32), tol)).collect()
}

pub fn verify_moments(weight: &WeightFunction, problem: &MomentProblem, k_max: usize, tol: f64) -> Result<MomentReport> {
    if weight.problem.params != problem.params || weight.problem.mu != problem.mu || weight.problem.alpha != problem.alpha {
        return Err(Error::Domain("weight built for a different moment problem".into()));
    }
    let scale = (problem.ln_a_const - weight.problem.ln_a_const).exp();
    let integrals = power_integrals(weight, k_max, QUAD_TOL)?;
    let mut rows = Vec::with_capacity(k_max + 1);
    for (k, m) in integrals.into_iter().enumerate() {
        let integral = scale * m;
        let target = moment_target(problem, k);
        rows.push(MomentRow { k, target, integral, rel_error: ((integral - target) / target).abs() });
    }
    let max_rel_error = rows.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    Ok(MomentReport { rows, max_rel_error, pass: max_rel_error < tol })
}

/// Minimal eigenvalues of the Hankel matrices B(i+j) and B(i+j+1), i, j < order,
/// after the diagonal rescaling H_ij / sqrt(H_ii H_jj) (unit diagonal, same signature).
pub fn hankel_hadamard(problem: &MomentProblem, order: usize) -> Result<(f64, f64)> {
    if order == 0 || order > 10 {
        return Err(Error::Domain(format!("Hankel order must be in 1..=10, got {order}")));
    }
    let min_eig = |shift: usize| {
        let l = |k: usize| problem.ln_moment(k);
        let h = DMatrix::from_fn(order, order, |i, j| {
            (l(i + j + shift) - 0.5 * (l(2 * i + shift) + l(2 * j + shift))).exp()
        });
        SymmetricEigen::new(h).eigenvalues.min()
    };
    Ok((min_eig(0), min_eig(1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Carleman {
    Unique,
    PossiblyNonunique,
    Inconclusive,
}

impl Carleman {
    pub fn tag(self) -> &'static str {
        match self {
            Carleman::Unique => "unique",
            Carleman::PossiblyNonunique => "possibly_nonunique",
            Carleman::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CarlemanReport {
    pub exponent: f64,
    pub verdict: Carleman,
    /// (k, Σ_{j ≤ k} B(j)^{-1/(2j)}) for sector μ = 0.
    pub partial_sums: Vec<(usize, f64)>,
}

pub fn carleman_test(params: &AlgebraParams, alpha: usize) -> Result<CarlemanReport> {
    let lambda = params.lambda();
    let problem = MomentProblem::new(params, 0, alpha)?;
    let exponent = -(lambda as f64 / 2.0 - alpha as f64);
    let verdict = if exponent > -1.0 {
        Carleman::Unique
    } else if exponent < -1.0 {
        Carleman::PossiblyNonunique
    } else {
        Carleman::Inconclusive
    };
    let mut s = 0.0;
    let mut partial_sums = Vec::new();
    for k in 1..=200 {
        s += (-problem.ln_moment(k) / (2.0 * k as f64)).exp();
        if k % 50 == 0 {
            partial_sums.push((k, s));
        }
    }
    Ok(CarlemanReport { exponent, verdict, partial_sums })
}

/// The weights h_μ(t) and g_μ(t) of the eigenstate resolutions.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenstateMeasures {
    params: AlgebraParams,
    sectors: Vec<WeightFunction>,
}

pub fn eigenstate_measures(params: &AlgebraParams) -> Result<EigenstateMeasures> {
    let sectors = (0..params.lambda()).map(|mu| weight_function(params, mu, 0)).collect::<Result<Vec<_>>>()?;
    Ok(EigenstateMeasures { params: params.clone(), sectors })
}

impl EigenstateMeasures {
    pub fn sector_weight(&self, mu: usize) -> &WeightFunction {
        &self.sectors[mu]
    }

    pub fn g_form(&self) -> WeightForm {
        WeightForm::FourierMix
    }

    /// h_μ(t) = λ^λ Π_{ν≤μ} β̄_ν t^{λ-μ-1} h^{(0)}_μ(t^λ).
    pub fn h(&self, mu: usize, t: f64) -> Result<f64> {
        let lambda = self.params.lambda();
        let prod: f64 = (1..=mu).map(|nu| self.params.beta_bar(nu as i64)).product();
        let l = lambda as f64;
        Ok(l.powi(lambda as i32) * prod * t.powi((lambda - mu - 1) as i32) * self.sectors[mu].eval(t.powi(lambda as i32))?)
    }

    /// g_μ(t) = λ^{-1} Σ_ν e^{2πiμν/λ} h_ν(t).
    pub fn g(&self, mu: usize, t: f64) -> Result<Complex64> {
        let lambda = self.params.lambda();
        let mut s = Complex64::new(0.0, 0.0);
        for nu in 0..lambda {
            s += root_of_unity(lambda, (mu * nu) as i64) * self.h(nu, t)?;
        }
        Ok(s / lambda as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionMode {
    DiagonalAlpha0,
    EigenstateDiag,
    EigenstateOffdiag,
}

impl std::str::FromStr for ResolutionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal_alpha0" | "diagonal-alpha0" => Ok(ResolutionMode::DiagonalAlpha0),
            "eigenstate_diag" | "eigenstate-diag" => Ok(ResolutionMode::EigenstateDiag),
            "eigenstate_offdiag" | "eigenstate-offdiag" => Ok(ResolutionMode::EigenstateOffdiag),
            _ => Err(Error::Config(format!("unknown resolution mode {s}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionReport {
    pub mode: ResolutionMode,
    /// ⟨n|∫dρ ...|n'⟩ for n, n' ≤ n_max.
    pub matrix: DMatrix<Complex64>,
    pub max_deviation: f64,
    pub pass: bool,
}

pub fn verify_identity_resolution(
    params: &AlgebraParams,
    mode: ResolutionMode,
    n_max: usize,
    tol: f64,
) -> Result<ResolutionReport> {
    if n_max > 8 {
        return Err(Error::Domain(format!("n_max must be <= 8, got {n_max}")));
    }
    let lambda = params.lambda();
    let dim = n_max + 1;
    let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    match mode {
        ResolutionMode::DiagonalAlpha0 => {
            let weights = (0..lambda).map(|mu| weight_function(params, mu, 0)).collect::<Result<Vec<_>>>()?;
            for n in 0..dim {
                let (k, mu) = (n / lambda, n % lambda);
                // |c_k|² = Π_ν (β̄)_k^{-1} / k! · λ^{-λk} |z|^{2k}, angular integral 2π
                let den: f64 = crate::states::denominator_params(params, mu, 0)
                    .iter()
                    .map(|b| crate::special::gamma::ln_pochhammer(*b, k))
                    .sum::<f64>()
                    + ln_gamma(k as f64 + 1.0);
                let m = integrate_weighted(&weights[mu], |y| y.powi(k as i32), QUAD_TOL)?;
                let l = lambda as f64;
                matrix[(n, n)] = Complex64::new(PI * l.powi(lambda as i32) * (-den).exp() * m, 0.0);
            }
        }
        ResolutionMode::EigenstateDiag | ResolutionMode::EigenstateOffdiag => {
            let measures = eigenstate_measures(params)?;
            for n in 0..dim {
                let ln_f: f64 = (1..=n).map(|j| structure_function(params, j).ln()).sum();
                let l = lambda as f64;
                let failure: RefCell<Option<Error>> = RefCell::new(None);
                let capture = |r: Result<Complex64>| match r {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        Complex64::new(0.0, 0.0)
                    }
                };
                // πλ ∫ dt w(t) (λt)^n / Π F over t = |z|²/λ
                let weight_at = |t: f64| -> Complex64 {
                    if !(t > 0.0) {
                        return Complex64::new(0.0, 0.0);
                    }
                    match mode {
                        ResolutionMode::EigenstateDiag => {
                            capture(measures.h(n % lambda, t).map(|v| Complex64::new(v, 0.0)))
                        }
                        _ => {
                            let mut s = Complex64::new(0.0, 0.0);
                            for mu in 0..lambda {
                                let g = capture(measures.g(mu, t));
                                s += g * root_of_unity(lambda, -((n * mu) as i64));
                            }
                            s
                        }
                    }
                };
                let radial = |t: f64| ((n as f64) * (l * t).ln() - ln_f).exp();
                let re = half_line(|t, _| weight_at(t).re * radial(t), QUAD_TOL)?;
                // the imaginary part vanishes up to rounding, so it is judged against the real part
                let im = half_line_abs(|t, _| weight_at(t).im * radial(t), QUAD_TOL, QUAD_TOL * re.value.abs())?;
                if let Some(e) = failure.into_inner() {
                    return Err(e);
                }
                matrix[(n, n)] = Complex64::new(PI * l * re.value, PI * l * im.value);
            }
        }
    }
    let mut max_deviation: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let target = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((matrix[(i, j)] - target).norm());
        }
    }
    Ok(ResolutionReport { mode, matrix, max_deviation, pass: max_deviation < tol })
}
