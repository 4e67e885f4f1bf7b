//! Curve data for the eight published figures, as CSV.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::thread;

use crate::algebra::AlgebraParams;
use crate::error::{Error, Result};
use crate::measures::weight_function;
use crate::observables::{mandel_q_cs_alpha, mandel_q_eigenstate, squeezing_cs_alpha, squeezing_eigenstate, Method, Quadrature};
use crate::states::CsAlphaSpec;

pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Config(format!("grid needs at least 2 points, got {points}")));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::Config(format!("grid bounds must satisfy min < max, got {min}:{max}")));
        }
        Ok(Grid { min, max, points })
    }

    /// Parses `min:max:n`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("grid must be min:max:n, got '{s}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let min = parts[0].trim().parse().map_err(|_| bad())?;
        let max = parts[1].trim().parse().map_err(|_| bad())?;
        let n = parts[2].trim().parse().map_err(|_| bad())?;
        Grid::new(min, max, n)
    }

    pub fn values(&self) -> Vec<f64> {
        let h = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|i| if i + 1 == self.points { self.max } else { self.min + h * i as f64 }).collect()
    }
}

/// What a figure plots against its grid variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// h^{(α)}_μ(y).
    Weight { mu: usize, alpha: usize },
    /// Q(r) for |z; μ; α⟩, z = r.
    MandelCsAlpha { mu: usize, alpha: usize },
    /// Q(r) for |z⟩.
    MandelEigen,
    /// X for |z; 0; 0⟩ against -Re z.
    SqueezeCsAlpha { kind: Quadrature },
    /// X = P for |z⟩ against r.
    SqueezeEigen,
    /// X for real photons in |z⟩ against Re z (`imaginary` false) or Im z.
    SqueezeEigenReal { imaginary: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub params: AlgebraParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureJob {
    pub id: String,
    pub title: String,
    pub variable: String,
    pub quantity: Quantity,
    pub curves: Vec<Curve>,
    pub grid: Grid,
}

pub const PRESETS: [&str; 15] = [
    "fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b", "fig7a",
    "fig7b", "fig8a", "fig8b",
];

const STYLES: [&str; 4] = ["solid", "dashed", "dotted", "dot-dashed"];

fn curves(lambda: usize, sets: &[&[f64]], styles: &[&str]) -> Result<Vec<Curve>> {
    sets.iter()
        .zip(styles)
        .map(|(bb, style)| {
            let params = AlgebraParams::from_beta_bar(lambda, bb)?;
            let label = format!(
                "{style} beta_bar=({})",
                bb.iter().map(|b| fmt_num(*b)).collect::<Vec<_>>().join(";")
            );
            Ok(Curve { label, params })
        })
        .collect()
}

fn job(id: &str, title: &str, variable: &str, quantity: Quantity, curves: Vec<Curve>, grid: (f64, f64, usize)) -> FigureJob {
    FigureJob {
        id: id.into(),
        title: title.into(),
        variable: variable.into(),
        quantity,
        curves,
        grid: Grid { min: grid.0, max: grid.1, points: grid.2 },
    }
}

/// Parameter sets transcribed from the figure captions.
pub fn preset(name: &str) -> Result<FigureJob> {
    const N: usize = 61;
    let name = name.trim().to_ascii_lowercase();
    let name = name.strip_prefix("figure").map(|s| format!("fig{s}")).unwrap_or(name);
    let four = &STYLES[..];
    let j = match name.as_str() {
        "fig1" => job(
            "fig1",
            "weight h^(1)_0(y), lambda=3",
            "y",
            Quantity::Weight { mu: 0, alpha: 1 },
            curves(3, &[&[4.0 / 3.0, 2.0 / 3.0], &[4.0 / 3.0, 4.0 / 3.0]], &["solid", "dashed"])?,
            (0.02, 6.0, N),
        ),
        "fig2a" => job(
            "fig2a",
            "weight h^(2)_0(y), lambda=4",
            "y",
            Quantity::Weight { mu: 0, alpha: 2 },
            curves(
                4,
                &[&[1.5, 1.5, 1.25], &[1.5, 1.75, 1.25], &[1.5, 2.0, 1.25]],
                &["solid", "dashed", "dot-dashed"],
            )?,
            (0.01, 0.99, N),
        ),
        "fig2b" => job(
            "fig2b",
            "weight h^(2)_0(y), lambda=4",
            "y",
            Quantity::Weight { mu: 0, alpha: 2 },
            curves(
                4,
                &[&[1.5, 1.0, 0.75], &[1.5, 1.25, 0.75], &[1.5, 1.5, 0.75]],
                &["solid", "dashed", "dot-dashed"],
            )?,
            (0.01, 0.99, N),
        ),
        "fig3a" => job(
            "fig3a",
            "Mandel Q for |z;0;1>, lambda=3",
            "r",
            Quantity::MandelCsAlpha { mu: 0, alpha: 1 },
            curves(
                3,
                &[&[1.0 / 3.0, 2.0 / 3.0], &[1.0, 0.1], &[1.0, 0.01], &[0.1, 2.0 / 3.0]],
                four,
            )?,
            (0.01, 3.0, N),
        ),
        "fig3b" => job(
            "fig3b",
            "Mandel Q for |z;1;1>, lambda=3",
            "r",
            Quantity::MandelCsAlpha { mu: 1, alpha: 1 },
            curves(
                3,
                &[&[1.0 / 3.0, 2.0 / 3.0], &[1.0 / 3.0, 0.1], &[1.0 / 3.0, 0.02], &[1.0 / 3.0, 2.0]],
                four,
            )?,
            (0.01, 3.0, N),
        ),
        "fig4a" => job(
            "fig4a",
            "Mandel Q for |z>, lambda=2",
            "r",
            Quantity::MandelEigen,
            curves(2, &[&[1.0 / 90.0], &[0.25], &[1.0], &[10.0]], four)?,
            (0.05, 3.0, N),
        ),
        "fig4b" => job(
            "fig4b",
            "Mandel Q for |z>, lambda=3",
            "r",
            Quantity::MandelEigen,
            curves(
                3,
                &[&[0.01, 2.0 / 3.0], &[1.0 / 3.0, 10.0], &[2.0 / 3.0, 0.01], &[10.0, 1.0 / 3.0]],
                four,
            )?,
            (0.05, 3.0, N),
        ),
        "fig5a" => job(
            "fig5a",
            "X for |z;0;0>, lambda=2, dressed photons",
            "-Re z",
            Quantity::SqueezeCsAlpha { kind: Quadrature::Dressed },
            curves(2, &[&[0.5], &[0.3], &[1.0], &[2.0]], four)?,
            (0.0, 3.0, N),
        ),
        "fig5b" => job(
            "fig5b",
            "X for |z;0;0>, lambda=2, real photons",
            "-Re z",
            Quantity::SqueezeCsAlpha { kind: Quadrature::Real },
            curves(2, &[&[0.5], &[0.3], &[1.0], &[2.0]], four)?,
            (0.0, 3.0, N),
        ),
        "fig6a" => job(
            "fig6a",
            "X = P for |z>, lambda=2, dressed photons",
            "r",
            Quantity::SqueezeEigen,
            curves(2, &[&[10.0], &[2.0], &[0.75], &[0.3]], four)?,
            (0.0, 3.0, N),
        ),
        "fig6b" => job(
            "fig6b",
            "X = P for |z>, lambda=3, dressed photons",
            "r",
            Quantity::SqueezeEigen,
            curves(3, &[&[2.0, 0.05], &[2.0 / 3.0, 2.0 / 3.0], &[2.0, 5.0], &[0.25, 0.125]], four)?,
            (0.0, 3.0, N),
        ),
        "fig7a" => job(
            "fig7a",
            "X for |z>, lambda=2, real photons, Im z = 0",
            "Re z",
            Quantity::SqueezeEigenReal { imaginary: false },
            curves(2, &[&[0.25], &[0.1], &[0.025], &[0.01]], four)?,
            (0.0, 3.0, N),
        ),
        "fig7b" => job(
            "fig7b",
            "X for |z>, lambda=2, real photons, Re z = 0",
            "Im z",
            Quantity::SqueezeEigenReal { imaginary: true },
            curves(2, &[&[1.0], &[4.0], &[10.0], &[40.0]], four)?,
            (0.0, 3.0, N),
        ),
        "fig8a" => job(
            "fig8a",
            "X for |z>, lambda=3, real photons, Im z = 0",
            "Re z",
            Quantity::SqueezeEigenReal { imaginary: false },
            curves(3, &[&[0.1, 0.4], &[0.1, 1.0], &[1.0, 15.0], &[5.0, 50.0]], four)?,
            (0.0, 3.0, N),
        ),
        "fig8b" => job(
            "fig8b",
            "X for |z>, lambda=3, real photons, Re z = 0",
            "Im z",
            Quantity::SqueezeEigenReal { imaginary: true },
            curves(3, &[&[0.1, 0.1], &[1.0, 0.1], &[5.0, 0.1], &[5.0, 1.0]], four)?,
            (0.0, 3.0, N),
        ),
        other => return Err(Error::Config(format!("unknown figure preset '{other}'"))),
    };
    Ok(j)
}

/// Presets belonging to figure `n` (1..=8).
pub fn figure_presets(n: u8) -> Result<Vec<FigureJob>> {
    match n {
        1 => Ok(vec![preset("fig1")?]),
        2..=8 => Ok(vec![preset(&format!("fig{n}a"))?, preset(&format!("fig{n}b"))?]),
        _ => Err(Error::Config(format!("figure number must be 1..8, got {n}"))),
    }
}

/// One value of `quantity` for one curve at grid point `x`.
pub fn evaluate(quantity: Quantity, params: &AlgebraParams, x: f64) -> Result<f64> {
    let re = |v: f64| Complex64::new(v, 0.0);
    match quantity {
        Quantity::Weight { mu, alpha } => weight_function(params, mu, alpha)?.eval(x),
        Quantity::MandelCsAlpha { mu, alpha } => {
            Ok(mandel_q_cs_alpha(&CsAlphaSpec::new(params, mu, alpha, re(x))?, Method::Closed)?.mandel_q)
        }
        Quantity::MandelEigen => Ok(mandel_q_eigenstate(params, x, Method::Closed)?.mandel_q),
        Quantity::SqueezeCsAlpha { kind } => {
            let spec = CsAlphaSpec::new(params, 0, 0, re(-x))?;
            Ok(squeezing_cs_alpha(&spec, kind, Method::Closed)?.x_ratio)
        }
        Quantity::SqueezeEigen => Ok(squeezing_eigenstate(params, re(x), Quadrature::Dressed, Method::Closed)?.x_ratio),
        Quantity::SqueezeEigenReal { imaginary } => {
            let z = if imaginary { Complex64::new(0.0, x) } else { re(x) };
            Ok(squeezing_eigenstate(params, z, Quadrature::Real, Method::Closed)?.x_ratio)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub job: FigureJob,
    pub x: Vec<f64>,
    /// One column per curve.
    pub columns: Vec<Vec<f64>>,
}

pub fn run_figure(job: &FigureJob) -> Result<FigureData> {
    if job.grid.points < 2 {
        return Err(Error::Config("grid needs at least 2 points".into()));
    }
    let x = job.grid.values();
    let mut columns = Vec::with_capacity(job.curves.len());
    for curve in &job.curves {
        columns.push(par_map(&x, |v| evaluate(job.quantity, &curve.params, v))?);
    }
    Ok(FigureData { job: job.clone(), x, columns })
}

/// Evaluates f on every point, in parallel, preserving order.
pub fn par_map<F>(xs: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let workers = thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(xs.len().max(1));
    let chunk = xs.len().div_ceil(workers).max(1);
    let parts: Vec<Result<Vec<f64>>> = thread::scope(|s| {
        let handles: Vec<_> = xs
            .chunks(chunk)
            .map(|c| s.spawn(|| c.iter().map(|&v| f(v)).collect::<Result<Vec<f64>>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(xs.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// 12 significant digits, locale independent.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let e = v.abs().log10().floor() as i32;
    if (-4..12).contains(&e) {
        let decimals = (SIG_DIGITS as i32 - 1 - e).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.prec$e}", prec = SIG_DIGITS - 1)
    }
}

pub fn to_csv(data: &FigureData) -> String {
    let j = &data.job;
    let mut out = String::new();
    let _ = writeln!(out, "# figure {}", j.id);
    let _ = writeln!(out, "# {}", j.title);
    for (i, c) in j.curves.iter().enumerate() {
        let _ = writeln!(out, "# curve{} lambda={} {}", i + 1, c.params.lambda(), c.label);
    }
    let header: Vec<String> =
        std::iter::once(j.variable.clone()).chain((1..=j.curves.len()).map(|i| format!("curve{i}"))).collect();
    let _ = writeln!(out, "{}", header.join(","));
    for (row, x) in data.x.iter().enumerate() {
        let mut line = fmt_num(*x);
        for col in &data.columns {
            line.push(',');
            line.push_str(&fmt_num(col[row]));
        }
        let _ = writeln!(out, "{line}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(-2.0), "-2");
        assert_eq!(fmt_num(1.0e-7), "1.00000000000e-7");
    }

    #[test]
    fn every_preset_builds() {
        for name in PRESETS {
            let j = preset(name).unwrap();
            assert!(j.curves.len() >= 2, "{name}");
        }
    }

    #[test]
    fn grid_parse() {
        let g = Grid::parse("0:1:5").unwrap();
        assert_eq!(g.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(Grid::parse("1:0:5").is_err());
        assert!(Grid::parse("0:1:1").is_err());
    }
}
