//! Command-line front end. Exit codes: 0 pass, 1 verification failure, 2 usage or parameter error.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::algebra::AlgebraParams;
use crate::bargmann::{check_commutators, check_d_conjugation, check_hermiticity, check_intertwining, Basis, CheckReport, PolyFunction};
use crate::error::{Error, Result};
use crate::figures::{figure_presets, fmt_num, preset, run_figure, to_csv, Curve, FigureJob, Grid};
use crate::measures::{carleman_test, positivity_condition, verify_identity_resolution, verify_moments, weight_function, Positivity, ResolutionMode};
use crate::observables::{mandel_q_cs_alpha, mandel_q_eigenstate, squeezing_cs_alpha, squeezing_eigenstate, Method, Quadrature};
use crate::states::{cs_alpha_state, eigenstate, CsAlphaSpec, Norm, DEFAULT_DIM};
use crate::verify::{bargmann_bases, run_verify, sectors, Suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "clambda", version, about = "C_lambda-extended oscillator: states, measures, Bargmann realizations, photon statistics")]
pub struct Cli {
    #[command(flatten)]
    pub opts: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Any of them may also come from `--config`.
#[derive(Debug, Default, Clone, Args)]
pub struct CommonArgs {
    /// Plain-text `key = value` file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub lambda: Option<usize>,
    /// α_0..α_{λ-1}, comma separated, summing to zero.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,
    /// β̄_1..β̄_{λ-1}, an alternative to --alpha.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "alpha")]
    pub beta_bar: Option<Vec<f64>>,
    /// Fock sector μ.
    #[arg(long, global = true)]
    pub mu: Option<usize>,
    /// Selects the |z;μ;α⟩ family with this α; without it the eigenstates |z⟩ are used.
    #[arg(long, global = true)]
    pub cs_alpha: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z_re: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z_im: Option<f64>,
    /// min:max:n
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Fock truncation.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Named figure preset such as fig4a.
    #[arg(long, global = true)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check parameters and print the derived constants, certificates and Carleman verdicts.
    Validate,
    /// Figure data as CSV: a figure number 1..8 or a preset name.
    Figure { which: Option<String> },
    /// Run a verification suite (algebra, states, moments, resolution, bargmann, observables, all).
    Verify { suite: String },
    /// Mandel Q against r = |z|.
    Mandel,
    /// Quadrature variance ratios against Re z or Im z.
    Squeeze {
        /// dressed or real
        #[arg(long, default_value = "dressed")]
        quadrature: String,
        /// re or im
        #[arg(long, default_value = "re")]
        axis: String,
    },
    /// Moment table k, target, integral, rel_error.
    Moments {
        #[arg(long, default_value_t = 8)]
        k_max: usize,
    },
    /// Matrix elements of the resolution of identity.
    Resolution {
        /// diagonal-alpha0, eigenstate-diag or eigenstate-offdiag
        #[arg(long, default_value = "diagonal-alpha0")]
        mode: String,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Bargmann realization checks as a pass/fail table.
    BargmannCheck {
        /// vector, eigenstate or sector:<mu>:<alpha>; all bases when absent
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, default_value_t = 10)]
        degree: usize,
    },
    /// Dump state coefficients n, Re c_n, Im c_n.
    State,
}

/// Process entry point; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.text, cli_out(&cli).as_deref()) {
                return report_error(&e);
            }
            if outcome.pass {
                0
            } else {
                1
            }
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error,{},{}", error_kind(e), e);
    exit_code(e)
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Shape(_) => "Shape",
        Error::ZeroSumViolation { .. } => "ZeroSumViolation",
        Error::PositivityViolation { .. } => "PositivityViolation",
        Error::TruncationTooSmall(_) => "TruncationTooSmall",
        Error::Index(_) => "Index",
        Error::Domain(_) => "Domain",
        Error::PoleInDenominator(_) => "PoleInDenominator",
        Error::DivergentSeries => "DivergentSeries",
        Error::NoConvergence { .. } => "NoConvergence",
        Error::CancellationLoss(_) => "CancellationLoss",
        Error::Sector { .. } => "Sector",
        Error::PositivityUnavailable(_) => "PositivityUnavailable",
        Error::QuadratureFailure(_) => "QuadratureFailure",
        Error::UnsupportedOp(_) => "UnsupportedOp",
        Error::NonPolynomialResult(_) => "NonPolynomialResult",
        Error::Config(_) => "Config",
    }
}

/// Parameter and usage errors map to 2, numerical failures to 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Shape(_)
        | Error::ZeroSumViolation { .. }
        | Error::PositivityViolation { .. }
        | Error::Index(_)
        | Error::Domain(_)
        | Error::Sector { .. }
        | Error::PositivityUnavailable(_)
        | Error::UnsupportedOp(_)
        | Error::Config(_) => 2,
        _ => 1,
    }
}

pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn ok(text: String) -> Result<Outcome> {
    Ok(Outcome { text, pass: true })
}

fn cli_out(cli: &Cli) -> Option<PathBuf> {
    // figure writes its own files when several panels go to a directory
    match &cli.command {
        Command::Figure { .. } | Command::Verify { .. } => None,
        _ => settings(&cli.opts).ok().and_then(|s| s.out),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Flags merged with the config file.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub lambda: Option<usize>,
    pub alpha: Option<Vec<f64>>,
    pub beta_bar: Option<Vec<f64>>,
    pub mu: Option<usize>,
    pub cs_alpha: Option<usize>,
    pub z: Complex64,
    pub grid: Option<Grid>,
    pub k: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub preset: Option<String>,
}

/// Reads `key = value` lines; `#` starts a comment. Keys use the flag names.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        const KEYS: [&str; 11] = ["lambda", "alpha", "beta-bar", "mu", "cs-alpha", "z-re", "z-im", "grid", "k", "tol", "preset"];
        if !KEYS.contains(&key.as_str()) && key != "out" {
            return Err(Error::Config(format!("config line {}: unknown key '{key}'", i + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("bad value for {key}: '{v}'")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| parse_value(key, x.trim())).collect()
}

pub fn settings(args: &CommonArgs) -> Result<Settings> {
    let cfg = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            parse_config(&text)?
        }
        None => HashMap::new(),
    };
    let get = |k: &str| cfg.get(k).map(String::as_str);
    macro_rules! pick {
        ($flag:expr, $key:literal) => {
            match ($flag.clone(), get($key)) {
                (Some(v), _) => Some(v),
                (None, Some(s)) => Some(parse_value($key, s)?),
                (None, None) => None,
            }
        };
    }
    let alpha = match (&args.alpha, get("alpha")) {
        (Some(v), _) => Some(v.clone()),
        (None, Some(s)) if args.beta_bar.is_none() => Some(parse_list("alpha", s)?),
        _ => None,
    };
    let beta_bar = match (&args.beta_bar, get("beta-bar")) {
        (Some(v), _) => Some(v.clone()),
        (None, Some(s)) if alpha.is_none() => Some(parse_list("beta-bar", s)?),
        _ => None,
    };
    let grid = match (&args.grid, get("grid")) {
        (Some(g), _) => Some(Grid::parse(g)?),
        (None, Some(g)) => Some(Grid::parse(g)?),
        _ => None,
    };
    let z_re: Option<f64> = pick!(args.z_re, "z-re");
    let z_im: Option<f64> = pick!(args.z_im, "z-im");
    Ok(Settings {
        lambda: pick!(args.lambda, "lambda"),
        alpha,
        beta_bar,
        mu: pick!(args.mu, "mu"),
        cs_alpha: pick!(args.cs_alpha, "cs-alpha"),
        z: Complex64::new(z_re.unwrap_or(0.0), z_im.unwrap_or(0.0)),
        grid,
        k: pick!(args.k, "k"),
        tol: pick!(args.tol, "tol"),
        out: args.out.clone().or_else(|| get("out").map(PathBuf::from)),
        preset: args.preset.clone().or_else(|| get("preset").map(str::to_string)),
    })
}

impl Settings {
    /// The undeformed algebra when neither --alpha nor --beta-bar is given.
    pub fn params(&self) -> Result<AlgebraParams> {
        let lambda = self.lambda.ok_or_else(|| Error::Config("--lambda is required".into()))?;
        match (&self.alpha, &self.beta_bar) {
            (Some(a), _) => AlgebraParams::new(lambda, a),
            (None, Some(b)) => AlgebraParams::from_beta_bar(lambda, b),
            (None, None) => AlgebraParams::new(lambda, &vec![0.0; lambda]),
        }
    }

    fn has_params(&self) -> bool {
        self.lambda.is_some() || self.alpha.is_some() || self.beta_bar.is_some()
    }

    fn verify_options(&self) -> VerifyOptions {
        let mut o = VerifyOptions { mu: self.mu, alpha: self.cs_alpha, tol: self.tol, ..VerifyOptions::default() };
        if let Some(k) = self.k {
            o.k = k;
        }
        if self.z != Complex64::new(0.0, 0.0) {
            o.z = vec![self.z];
        }
        o
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let s = settings(&cli.opts)?;
    match &cli.command {
        Command::Validate => validate(&s),
        Command::Figure { which } => figure(&s, which.as_deref()),
        Command::Verify { suite } => verify(&s, suite),
        Command::Mandel => mandel(&s),
        Command::Squeeze { quadrature, axis } => squeeze(&s, quadrature.parse()?, axis),
        Command::Moments { k_max } => moments(&s, *k_max),
        Command::Resolution { mode, n_max } => resolution(&s, mode.parse()?, *n_max),
        Command::BargmannCheck { basis, degree } => bargmann_check(&s, basis.as_deref(), *degree),
        Command::State => state(&s),
    }
}

fn csv_list(v: &[f64]) -> String {
    v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(";")
}

fn validate(s: &Settings) -> Result<Outcome> {
    let p = s.params()?;
    let lambda = p.lambda();
    let betas: Vec<f64> = (0..lambda as i64).map(|m| p.beta(m)).collect();
    let mut out = format!(
        "# lambda={lambda}\n# alpha={}\n# beta={}\n# beta_bar={}\nmu,alpha,positivity,weight_form\n",
        csv_list(p.alphas()),
        csv_list(&betas),
        csv_list(p.beta_bars())
    );
    for (mu, alpha) in sectors(&p, &VerifyOptions::default()) {
        let cert = match positivity_condition(&p, mu, alpha)? {
            Positivity::Unconditional => "unconditional",
            Positivity::Certified { .. } => "certified",
            Positivity::Refused { .. } => "refused",
        };
        let form = match weight_function(&p, mu, alpha) {
            Ok(w) => w.form().tag(),
            Err(Error::PositivityUnavailable(_)) => "none",
            Err(e) => return Err(e),
        };
        let _ = writeln!(out, "{mu},{alpha},{cert},{form}");
    }
    out.push_str("alpha,carleman_exponent,verdict\n");
    for alpha in 0..=lambda / 2 {
        let c = carleman_test(&p, alpha)?;
        let _ = writeln!(out, "{alpha},{},{}", fmt_num(c.exponent), c.verdict.tag());
    }
    ok(out)
}

fn figure_jobs(s: &Settings, which: Option<&str>) -> Result<Vec<FigureJob>> {
    let name = which
        .map(str::to_string)
        .or_else(|| s.preset.clone())
        .ok_or_else(|| Error::Config("figure needs a number 1..8 or a preset name".into()))?;
    let mut jobs = match name.parse::<u8>() {
        Ok(n) => figure_presets(n)?,
        Err(_) => vec![preset(&name)?],
    };
    for job in &mut jobs {
        if let Some(g) = &s.grid {
            job.grid = g.clone();
        }
        if s.has_params() {
            job.curves = vec![Curve { label: "custom".into(), params: s.params()? }];
        }
    }
    Ok(jobs)
}

fn figure(s: &Settings, which: Option<&str>) -> Result<Outcome> {
    let jobs = figure_jobs(s, which)?;
    let mut docs = Vec::new();
    for job in &jobs {
        docs.push((job.id.clone(), to_csv(&run_figure(job)?)));
    }
    match &s.out {
        Some(dir) if docs.len() > 1 => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
            let mut listing = String::new();
            for (id, doc) in docs {
                let path = dir.join(format!("{id}.csv"));
                emit(&doc, Some(&path))?;
                let _ = writeln!(listing, "{}", path.display());
            }
            ok(listing)
        }
        Some(path) => {
            emit(&docs[0].1, Some(path))?;
            ok(String::new())
        }
        None => ok(docs.into_iter().map(|(_, d)| d).collect::<Vec<_>>().join("\n")),
    }
}

fn verify(s: &Settings, suite: &str) -> Result<Outcome> {
    let p = s.params()?;
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let opts = s.verify_options();
    let mut text = String::new();
    let mut csv = String::new();
    let mut pass = true;
    for suite in suites {
        let r = run_verify(suite, &p, &opts)?;
        pass &= r.passed();
        text.push_str(&r.to_text());
        csv.push_str(&r.to_csv());
    }
    if let Some(path) = &s.out {
        emit(&csv, Some(path))?;
    }
    Ok(Outcome { text, pass })
}

fn cs_spec(s: &Settings, p: &AlgebraParams, z: Complex64) -> Option<Result<CsAlphaSpec>> {
    s.cs_alpha.map(|alpha| CsAlphaSpec::new(p, s.mu.unwrap_or(0), alpha, z))
}

fn default_grid(s: &Settings, p: &AlgebraParams, min: f64) -> Result<Grid> {
    if let Some(g) = &s.grid {
        return Ok(g.clone());
    }
    let disc = match cs_spec(s, p, Complex64::new(0.0, 0.0)) {
        Some(spec) => spec?.on_disc(),
        None => false,
    };
    Grid::new(min, if disc { 0.99 } else { 3.0 }, 61)
}

fn header(s: &Settings, p: &AlgebraParams) -> String {
    let family = match s.cs_alpha {
        Some(a) => format!("|z;{};{a}>", s.mu.unwrap_or(0)),
        None => "|z>".into(),
    };
    format!("# lambda={} beta_bar={}\n# state {family}\n", p.lambda(), csv_list(p.beta_bars()))
}

fn mandel(s: &Settings) -> Result<Outcome> {
    let p = s.params()?;
    let grid = default_grid(s, &p, 0.01)?;
    let bessel = s.cs_alpha.is_none() && p.lambda() == 2;
    let mut out = header(s, &p);
    out.push_str(if bessel { "r,q_closed,q_oracle,q_bessel\n" } else { "r,q_closed,q_oracle\n" });
    for r in grid.values() {
        let q = |m: Method| -> Result<f64> {
            match cs_spec(s, &p, Complex64::new(r, 0.0)) {
                Some(spec) => Ok(mandel_q_cs_alpha(&spec?, m)?.mandel_q),
                None => Ok(mandel_q_eigenstate(&p, r, m)?.mandel_q),
            }
        };
        let _ = write!(out, "{},{},{}", fmt_num(r), fmt_num(q(Method::Closed)?), fmt_num(q(Method::Oracle)?));
        if bessel {
            let _ = write!(out, ",{}", fmt_num(q(Method::Bessel)?));
        }
        out.push('\n');
    }
    ok(out)
}

fn squeeze(s: &Settings, kind: Quadrature, axis: &str) -> Result<Outcome> {
    let p = s.params()?;
    let imaginary = match axis {
        "re" => false,
        "im" => true,
        _ => return Err(Error::Config(format!("axis must be re or im, got '{axis}'"))),
    };
    let grid = match &s.grid {
        Some(g) => g.clone(),
        None => Grid::new(-3.0, 3.0, 61)?,
    };
    let mut out = header(s, &p);
    let _ = writeln!(
        out,
        "# {:?} quadratures, {} fixed at {}",
        kind,
        if imaginary { "Re z" } else { "Im z" },
        fmt_num(if imaginary { s.z.re } else { s.z.im })
    );
    let _ = writeln!(out, "{},x_closed,p_closed,x_oracle,p_oracle", if imaginary { "im_z" } else { "re_z" });
    for v in grid.values() {
        let z = if imaginary { Complex64::new(s.z.re, v) } else { Complex64::new(v, s.z.im) };
        let run = |m: Method| match cs_spec(s, &p, z) {
            Some(spec) => squeezing_cs_alpha(&spec?, kind, m),
            None => squeezing_eigenstate(&p, z, kind, m),
        };
        let (c, o) = (run(Method::Closed)?, run(Method::Oracle)?);
        let _ = writeln!(out, "{},{},{},{},{}", fmt_num(v), fmt_num(c.x_ratio), fmt_num(c.p_ratio), fmt_num(o.x_ratio), fmt_num(o.p_ratio));
    }
    ok(out)
}

fn moments(s: &Settings, k_max: usize) -> Result<Outcome> {
    let p = s.params()?;
    let tol = s.tol.unwrap_or(1e-6);
    let (mu, alpha) = (s.mu.unwrap_or(0), s.cs_alpha.unwrap_or(0));
    let w = weight_function(&p, mu, alpha)?;
    let report = verify_moments(&w, w.problem(), k_max, tol)?;
    let mut out = format!("# moments of h^({alpha})_{mu}, form {}\nk,target,integral,rel_error\n", w.form().tag());
    for r in &report.rows {
        let _ = writeln!(out, "{},{},{},{}", r.k, fmt_num(r.target), fmt_num(r.integral), fmt_num(r.rel_error));
    }
    Ok(Outcome { text: out, pass: report.pass })
}

fn resolution(s: &Settings, mode: ResolutionMode, n_max: usize) -> Result<Outcome> {
    let p = s.params()?;
    let tol = s.tol.unwrap_or(1e-6);
    let r = verify_identity_resolution(&p, mode, n_max, tol)?;
    let mut out = format!("# resolution {mode:?}, max deviation {}\nn,n_prime,re,im\n", fmt_num(r.max_deviation));
    for n in 0..r.matrix.nrows() {
        for m in 0..r.matrix.ncols() {
            let v = r.matrix[(n, m)];
            let _ = writeln!(out, "{n},{m},{},{}", fmt_num(v.re), fmt_num(v.im));
        }
    }
    Ok(Outcome { text: out, pass: r.pass })
}

fn bargmann_check(s: &Settings, basis: Option<&str>, degree: usize) -> Result<Outcome> {
    let p = s.params()?;
    let tol = s.tol.unwrap_or(1e-12);
    let bases = match basis {
        Some(b) => vec![b.parse::<Basis>()?],
        None => bargmann_bases(&p, &s.verify_options()),
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for b in &bases {
        reports.push(check_intertwining(&p, *b, degree, tol)?);
        reports.push(check_commutators(&p, *b, degree, tol)?);
        if p.lambda() <= 3 && *b != Basis::Eigenstate {
            let n = if matches!(b, Basis::SectorAlpha { .. }) { 1 } else { p.lambda() };
            let samples: Vec<PolyFunction> = (0..n).flat_map(|c| (0..3).map(move |k| PolyFunction::monomial(n, c, k))).collect();
            match check_hermiticity(&p, *b, &samples, s.tol.unwrap_or(1e-6)) {
                Ok(r) => reports.push(r),
                Err(Error::PositivityUnavailable(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    if basis.is_none() {
        reports.push(check_d_conjugation(&p, degree, tol)?);
    }
    let mut out = String::from("basis,op_pair,max_residual,tol,status\n");
    let mut pass = true;
    for r in &reports {
        pass &= r.pass;
        for row in &r.rows {
            let status = if row.residual <= r.tol { "pass" } else { "fail" };
            let _ = writeln!(out, "{},\"{}\",{},{},{status}", row.basis, row.label, fmt_num(row.residual), fmt_num(r.tol));
        }
    }
    Ok(Outcome { text: out, pass })
}

fn state(s: &Settings) -> Result<Outcome> {
    let p = s.params()?;
    let k = s.k.unwrap_or(DEFAULT_DIM);
    let v = match cs_spec(s, &p, s.z) {
        Some(spec) => cs_alpha_state(&spec?, k, Norm::Normalized)?,
        None => eigenstate(&p, s.z, k, Norm::Normalized)?,
    };
    let mut out = header(s, &p);
    let _ = writeln!(out, "# z={}{:+}i dim={} tail_bound={}", fmt_num(s.z.re), s.z.im, v.dim, fmt_num(v.tail_bound));
    out.push_str("n,re,im\n");
    for (n, c) in v.coeffs.iter().enumerate() {
        let _ = writeln!(out, "{n},{},{}", fmt_num(c.re), fmt_num(c.im));
    }
    ok(out)
}
