//! Verification suites: each module's invariants as pass/fail lines.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::algebra::{build_operator, interior, sga_structure_poly, AlgebraParams, OpKind, TruncatedOperator};
use crate::bargmann::{check_commutators, check_d_conjugation, check_hermiticity, check_intertwining, ode_residual, Basis, CheckReport, PolyFunction};
use crate::error::{Error, Result};
use crate::figures::fmt_num;
use crate::measures::{verify_identity_resolution, verify_moments, weight_function, ResolutionMode, WeightForm};
use crate::observables::{mandel_q_cs_alpha, mandel_q_eigenstate, squeezing_cs_alpha, squeezing_eigenstate, Method, Quadrature};
use crate::states::{
    cs_alpha_state, eigen_normalization, eigenstate, paraboson_normalization, residual_cs_alpha, residual_eigenstate, CsAlphaSpec, Norm,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    States,
    Moments,
    Resolution,
    Bargmann,
    Observables,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Algebra, Suite::States, Suite::Moments, Suite::Resolution, Suite::Bargmann, Suite::Observables];

    pub fn tag(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::States => "states",
            Suite::Moments => "moments",
            Suite::Resolution => "resolution",
            Suite::Bargmann => "bargmann",
            Suite::Observables => "observables",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Skip(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub status: Status,
}

impl CheckLine {
    /// Passes when value ≤ tol.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        let status = if value <= tol { Status::Pass } else { Status::Fail };
        CheckLine { name: name.into(), value, tol, status }
    }

    pub fn skip(name: impl Into<String>, why: impl Into<String>) -> Self {
        CheckLine { name: name.into(), value: f64::NAN, tol: f64::NAN, status: Status::Skip(why.into()) }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        CheckLine { name: name.into(), value: if ok { 0.0 } else { 1.0 }, tol: 0.0, status }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub lines: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.status != Status::Fail)
    }

    pub fn worst(&self) -> f64 {
        self.lines.iter().filter(|l| l.status != Status::Fail || l.value.is_finite()).map(|l| l.value).fold(0.0, f64::max)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let tag = match &l.status {
                Status::Pass => "PASS".to_string(),
                Status::Fail => "FAIL".to_string(),
                Status::Skip(why) => format!("SKIP ({why})"),
            };
            let _ = writeln!(out, "{tag:5} {}  value={} tol={}", l.name, fmt_num(l.value), fmt_num(l.tol));
        }
        let _ = writeln!(
            out,
            "suite {}: {}",
            self.suite.tag(),
            if self.passed() { "pass" } else { "FAIL" }
        );
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# suite {}\ncheck,value,tol,status\n", self.suite.tag());
        for l in &self.lines {
            let status = match &l.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip(_) => "skip",
            };
            let _ = writeln!(out, "\"{}\",{},{},{status}", l.name.replace('"', "'"), fmt_num(l.value), fmt_num(l.tol));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Fock truncation for matrix identities.
    pub k: usize,
    /// Overrides each suite's default tolerance.
    pub tol: Option<f64>,
    pub mu: Option<usize>,
    pub alpha: Option<usize>,
    /// Sample points for state and observable checks.
    pub z: Vec<Complex64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            k: 64,
            tol: None,
            mu: None,
            alpha: None,
            z: vec![Complex64::new(0.3, 0.1), Complex64::new(-0.8, 0.5), Complex64::new(1.2, -0.9), Complex64::new(0.0, 2.0)],
        }
    }
}

pub fn run_verify(suite: Suite, params: &AlgebraParams, opts: &VerifyOptions) -> Result<SuiteReport> {
    let lines = match suite {
        Suite::Algebra => algebra_checks(params, opts)?,
        Suite::States => state_checks(params, opts)?,
        Suite::Moments => moment_checks(params, opts)?,
        Suite::Resolution => resolution_checks(params, opts)?,
        Suite::Bargmann => bargmann_checks(params, opts)?,
        Suite::Observables => observable_checks(params, opts)?,
    };
    Ok(SuiteReport { suite, lines })
}

/// (μ, α) pairs allowed for λ, filtered by the options.
pub fn sectors(params: &AlgebraParams, opts: &VerifyOptions) -> Vec<(usize, usize)> {
    let lambda = params.lambda();
    let mut out = Vec::new();
    for alpha in 0..=lambda / 2 {
        for mu in 0..lambda - alpha {
            if opts.alpha.is_some_and(|a| a != alpha) || opts.mu.is_some_and(|m| m != mu) {
                continue;
            }
            out.push((mu, alpha));
        }
    }
    out
}

fn max_entry(m: &TruncatedOperator, block: usize) -> f64 {
    m.max_diff_on_block(&TruncatedOperator::zeros(m.dim), block)
}

pub fn algebra_checks(params: &AlgebraParams, opts: &VerifyOptions) -> Result<Vec<CheckLine>> {
    let tol = opts.tol.unwrap_or(1e-10);
    let k = opts.k;
    let lambda = params.lambda();
    let block = interior(params, k);
    let op = |kind| build_operator(params, kind, k);
    let (a, ad) = (op(OpKind::A)?, op(OpKind::Adag)?);
    let mut lines = Vec::new();

    let mut rhs = TruncatedOperator::identity(k);
    for mu in 0..lambda {
        let p = op(OpKind::P(mu))?;
        rhs.entries += p.entries.map(|x| x * params.alpha(mu as i64));
    }
    lines.push(CheckLine::at_most("[a,a†] = I + Σ α_μ P_μ", a.commutator(&ad).max_diff_on_block(&rhs, block), tol));

    let mut shift = 0.0f64;
    for mu in 0..lambda {
        let lhs = ad.mul(&op(OpKind::P(mu))?);
        let rhs = op(OpKind::P((mu + 1) % lambda))?.mul(&ad);
        shift = shift.max(lhs.max_diff_on_block(&rhs, block));
    }
    lines.push(CheckLine::at_most("a† P_μ = P_{μ+1} a†", shift, 0.0));

    let (jp, jm, j0) = (op(OpKind::Jplus)?, op(OpKind::Jminus)?, op(OpKind::J0)?);
    let c = jp.commutator(&jm);
    let jpjm = jp.mul(&jm);
    let mut worst = 0.0f64;
    for n in 0..block.saturating_sub(lambda) {
        let f = sga_structure_poly(params, j0.get(n, n).re, n % lambda)?;
        worst = worst.max((c.get(n, n).re - f).abs() / jpjm.get(n, n).norm().max(1.0));
    }
    lines.push(CheckLine::at_most("[J₊,J₋] = f(J₀,P_μ) (relative)", worst, tol));

    let sub = block.saturating_sub(lambda);
    let cp = j0.commutator(&jp);
    let cm = j0.commutator(&jm);
    let scale = max_entry(&jp, sub).max(1.0);
    let mut jm_neg = jm.clone();
    jm_neg.entries = -jm_neg.entries;
    lines.push(CheckLine::at_most("[J₀,J₊] = J₊ (relative)", cp.max_diff_on_block(&jp, sub) / scale, tol));
    lines.push(CheckLine::at_most("[J₀,J₋] = -J₋ (relative)", cm.max_diff_on_block(&jm_neg, sub) / scale, tol));
    Ok(lines)
}

pub fn state_checks(params: &AlgebraParams, opts: &VerifyOptions) -> Result<Vec<CheckLine>> {
    let tol = opts.tol.unwrap_or(1e-9);
    let mut lines = Vec::new();
    for (mu, alpha) in sectors(params, opts) {
        let mut res = 0.0f64;
        let mut norm = 0.0f64;
        for &z0 in &opts.z {
            let spec = match CsAlphaSpec::new(params, mu, alpha, z0) {
                Ok(s) => s,
                // keep disc states inside |z| < 1
                Err(Error::Domain(_)) => CsAlphaSpec::new(params, mu, alpha, z0 * (0.9 / z0.norm()))?,
                Err(e) => return Err(e),
            };
            let v = cs_alpha_state(&spec, 64, Norm::Normalized)?;
            res = res.max(residual_cs_alpha(&spec, &v)?);
            let u = cs_alpha_state(&spec, 64, Norm::Unnormalized)?;
            norm = norm.max((u.norm_sq() - u.norm_sq_analytic).abs() / u.norm_sq_analytic);
        }
        lines.push(CheckLine::at_most(format!("|z;{mu};{alpha}> residual"), res, tol));
        lines.push(CheckLine::at_most(format!("|z;{mu};{alpha}> norm series vs closed form"), norm, 1e-10));
    }
    let mut res = 0.0f64;
    let mut norm = 0.0f64;
    let mut bessel = 0.0f64;
    for &z in &opts.z {
        let v = eigenstate(params, z, 64, Norm::Normalized)?;
        res = res.max(residual_eigenstate(params, z, &v)?);
        let u = eigenstate(params, z, 64, Norm::Unnormalized)?;
        norm = norm.max((u.norm_sq() - u.norm_sq_analytic).abs() / u.norm_sq_analytic);
        if params.lambda() == 2 {
            let closed = paraboson_normalization(params.beta_bar(1), z.norm())?;
            let series = eigen_normalization(params, z.norm())?.value;
            bessel = bessel.max((closed - series).abs() / series);
        }
    }
    lines.push(CheckLine::at_most("|z> residual", res, tol));
    lines.push(CheckLine::at_most("|z> norm series vs closed form", norm, 1e-10));
    if params.lambda() == 2 {
        lines.push(CheckLine::at_most("|z> paraboson Bessel norm", bessel, 1e-10));
    }
    Ok(lines)
}

pub fn moment_checks(params: &AlgebraParams, opts: &VerifyOptions) -> Result<Vec<CheckLine>> {
    let tol = opts.tol.unwrap_or(1e-6);
    let mut lines = Vec::new();
    for (mu, alpha) in sectors(params, opts) {
        let name = format!("h^({alpha})_{mu} moments k<=8");
        let w = match weight_function(params, mu, alpha) {
            Ok(w) => w,
            Err(Error::PositivityUnavailable(why)) => {
                lines.push(CheckLine::skip(name, why));
                continue;
            }
            Err(e) => return Err(e),
        };
        let report = verify_moments(&w, w.problem(), 8, tol)?;
        lines.push(CheckLine::at_most(format!("{name} [{}]", w.form().tag()), report.max_rel_error, tol));
        if matches!(w.form(), WeightForm::Gauss2F1 | WeightForm::AppellF3 | WeightForm::MultipleSeries) {
            let mut worst = 0.0f64;
            for i in 1..20 {
                let y = i as f64 / 20.0;
                let h = w.eval(y)?;
                worst = worst.max((w.conjecture(y, 1.0 - y)? - h).abs() / h.abs());
            }
            lines.push(CheckLine::at_most(format!("h^({alpha})_{mu} Meijer conjecture"), worst, 1e-7));
        }
    }
    Ok(lines)
}

pub fn resolution_checks(params: &AlgebraParams, opts: &VerifyOptions) -> Result<Vec<CheckLine>> {
    let tol = opts.tol.unwrap_or(1e-6);
    let lambda = params.lambda();
    let mut lines = Vec::new();
    let mut modes = vec![ResolutionMode::DiagonalAlpha0];
    if lambda <= 3 {
        modes.push(ResolutionMode::EigenstateDiag);
    }
    if lambda == 2 {
        modes.push(ResolutionMode::EigenstateOffdiag);
    }
    let mut diag = None;
    for mode in modes {
        match verify_identity_resolution(params, mode, 6, tol) {
            Ok(r) => {
                lines.push(CheckLine::at_most(format!("resolution {mode:?} n<=6"), r.max_deviation, tol));
                match mode {
                    ResolutionMode::EigenstateDiag => diag = Some(r.matrix),
                    ResolutionMode::EigenstateOffdiag => {
                        if let Some(d) = &diag {
                            let gap = (d - &r.matrix).iter().map(|x| x.norm()).fold(0.0, f64::max);
                            lines.push(CheckLine::at_most("nondiagonal equals diagonal", gap, 1e-8));
                        }
                    }
                    _ => {}
                }
            }
            Err(Error::PositivityUnavailable(why)) => lines.push(CheckLine::skip(format!("resolution {mode:?}"), why)),
            Err(e) => return Err(e),
        }
    }
    Ok(lines)
}

fn report_line(name: String, r: &CheckReport) -> CheckLine {
    CheckLine::at_most(name, r.max_residual, r.tol)
}

pub fn bargmann_bases(params: &AlgebraParams, opts: &VerifyOptions) -> Vec<Basis> {
    let mut v: Vec<Basis> = sectors(params, opts).into_iter().map(|(mu, alpha)| Basis::SectorAlpha { mu, alpha }).collect();
    v.push(Basis::VectorAlpha0);
    v.push(Basis::Eigenstate);
    v
}

pub fn bargmann_checks(params: &AlgebraParams, opts: &VerifyOptions) -> Result<Vec<CheckLine>> {
    let tol = opts.tol.unwrap_or(1e-12);
    let lambda = params.lambda();
    let mut lines = Vec::new();
    for basis in bargmann_bases(params, opts) {
        lines.push(report_line(format!("intertwining {}", basis.tag()), &check_intertwining(params, basis, 10, tol)?));
        lines.push(report_line(format!("commutators {}", basis.tag()), &check_commutators(params, basis, 10, tol)?));
    }
    lines.push(report_line("D(z) conjugation".into(), &check_d_conjugation(params, 10, tol)?));
    if lambda <= 3 {
        for basis in bargmann_bases(params, opts) {
            if basis == Basis::Eigenstate {
                continue;
            }
            let n = match basis {
                Basis::SectorAlpha { .. } => 1,
                _ => lambda,
            };
            let samples: Vec<PolyFunction> = (0..n)
                .flat_map(|c| (0..3).map(move |k| PolyFunction::monomial(n, c, k)))
                .collect();
            match check_hermiticity(params, basis, &samples, 1e-6) {
                Ok(r) => lines.push(report_line(format!("Hermiticity {}", basis.tag()), &r)),
                Err(Error::PositivityUnavailable(why)) => {
                    lines.push(CheckLine::skip(format!("Hermiticity {}", basis.tag()), why))
                }
                Err(e) => return Err(e),
            }
        }
    }
    for (mu, alpha) in sectors(params, opts) {
        let w = match weight_function(params, mu, alpha) {
            Ok(w) => w,
            Err(Error::PositivityUnavailable(_)) => continue,
            Err(e) => return Err(e),
        };
        let y_max = w.problem().y_max();
        let ys: Vec<f64> = if y_max.is_finite() { vec![0.2, 0.5, 0.8] } else { vec![0.3, 1.0, 2.5] };
        let mut worst = 0.0f64;
        for y in ys {
            worst = worst.max(ode_residual(params, mu, alpha, y)?);
        }
        lines.push(CheckLine::at_most(format!("h^({alpha})_{mu} differential equation"), worst, 1e-6));
    }
    Ok(lines)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn observable_checks(params: &AlgebraParams, opts: &VerifyOptions) -> Result<Vec<CheckLine>> {
    let tol = opts.tol.unwrap_or(1e-8);
    let lambda = params.lambda();
    let mut lines = Vec::new();
    for (mu, alpha) in sectors(params, opts) {
        let mut q = 0.0f64;
        let mut sq = 0.0f64;
        let mut ur = f64::INFINITY;
        let mut refl = 0.0f64;
        for &z0 in &opts.z {
            let spec = match CsAlphaSpec::new(params, mu, alpha, z0) {
                Ok(s) => s,
                Err(Error::Domain(_)) => CsAlphaSpec::new(params, mu, alpha, z0 * (0.9 / z0.norm()))?,
                Err(e) => return Err(e),
            };
            let c = mandel_q_cs_alpha(&spec, Method::Closed)?;
            let o = mandel_q_cs_alpha(&spec, Method::Oracle)?;
            q = q.max(rel(c.mandel_q, o.mandel_q));
            for kind in [Quadrature::Dressed, Quadrature::Real] {
                let c = squeezing_cs_alpha(&spec, kind, Method::Closed)?;
                let o = squeezing_cs_alpha(&spec, kind, Method::Oracle)?;
                sq = sq.max(rel(c.variance_x, o.variance_x)).max(rel(c.variance_p, o.variance_p));
                ur = ur.min(o.uncertainty_lhs - o.uncertainty_rhs);
                if lambda == 2 {
                    let flipped = spec.with_z(-spec.z.conj())?;
                    let f = squeezing_cs_alpha(&flipped, kind, Method::Closed)?;
                    refl = refl.max((f.x_ratio - c.p_ratio).abs());
                }
            }
        }
        lines.push(CheckLine::at_most(format!("|z;{mu};{alpha}> Q closed vs oracle"), q, tol));
        lines.push(CheckLine::at_most(format!("|z;{mu};{alpha}> variances closed vs oracle"), sq, tol));
        lines.push(CheckLine::flag(format!("|z;{mu};{alpha}> uncertainty relation"), ur >= -1e-9));
        if lambda == 2 {
            lines.push(CheckLine::at_most(format!("|z;{mu};{alpha}> X(-z*) = P(z)"), refl, 1e-12));
        }
    }
    let mut q = 0.0f64;
    let mut sq = 0.0f64;
    let mut min_unc = 0.0f64;
    for &z in &opts.z {
        let c = mandel_q_eigenstate(params, z.norm(), Method::Closed)?;
        let o = mandel_q_eigenstate(params, z.norm(), Method::Oracle)?;
        q = q.max(rel(c.mandel_q, o.mandel_q));
        if lambda == 2 {
            q = q.max(rel(mandel_q_eigenstate(params, z.norm(), Method::Bessel)?.mandel_q, o.mandel_q));
        }
        for kind in [Quadrature::Dressed, Quadrature::Real] {
            let c = squeezing_eigenstate(params, z, kind, Method::Closed)?;
            let o = squeezing_eigenstate(params, z, kind, Method::Oracle)?;
            sq = sq.max(rel(c.variance_x, o.variance_x)).max(rel(c.variance_p, o.variance_p));
            if kind == Quadrature::Dressed {
                let half = o.uncertainty_rhs.sqrt();
                min_unc = min_unc.max((o.variance_x - half).abs()).max((o.variance_p - half).abs());
            }
        }
    }
    lines.push(CheckLine::at_most("|z> Q closed vs oracle", q, tol));
    lines.push(CheckLine::at_most("|z> variances closed vs oracle", sq, tol));
    lines.push(CheckLine::at_most("|z> minimum uncertainty", min_unc, 1e-10));
    if lambda == 2 {
        let b1 = params.beta_bar(1);
        let mut ok = true;
        for i in 1..=30 {
            let qv = mandel_q_eigenstate(params, 0.1 * i as f64, Method::Closed)?.mandel_q;
            ok &= if (b1 - 0.5).abs() < 1e-12 { qv.abs() < 1e-10 } else { qv.signum() == (b1 - 0.5).signum() };
        }
        lines.push(CheckLine::flag("|z> sign(Q) = sign(β̄₁ - 1/2) on (0,3]", ok));
    }
    Ok(lines)
}
