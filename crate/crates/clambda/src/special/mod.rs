//! Special functions with error estimates.

pub mod appell;
pub mod bessel;
pub mod gamma;
pub mod gauss;
pub mod kummer;
pub mod meijer;
pub mod pfq;

pub use appell::{appell_f3, appell_f3_continued};
pub use bessel::{bessel_i, bessel_k};
pub use gamma::{gamma, gamma_complex, ln_gamma, rgamma};
pub use gauss::{gauss_2f1, hyp2f1, hyp2f1_split};
pub use kummer::kummer_u;
pub use meijer::{find_pairing, meijer_g, meijer_g_contour, meijer_g_split, MeijerClass, MeijerSpec};
pub use pfq::{pfq, pfq_real};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Step used for integer-parameter degeneracies.
pub(crate) const EPS_DEGENERATE: f64 = 1e-6;

/// A value with an absolute-error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    pub abs_error: f64,
    pub terms: usize,
    pub converged: bool,
}

impl<T> SeriesValue<T> {
    pub fn exact(value: T, terms: usize) -> Self {
        SeriesValue { value, abs_error: 0.0, terms, converged: true }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SeriesValue<U> {
        SeriesValue { value: f(self.value), abs_error: self.abs_error, terms: self.terms, converged: self.converged }
    }
}

/// Linear interpolation through values at p - ε and p + ε, evaluated at p.
pub(crate) fn straddle<F>(p: f64, mut f: F) -> crate::error::Result<SeriesValue<f64>>
where
    F: FnMut(f64) -> crate::error::Result<SeriesValue<f64>>,
{
    let lo = f(p - EPS_DEGENERATE)?;
    let hi = f(p + EPS_DEGENERATE)?;
    let value = 0.5 * (lo.value + hi.value);
    // second-order remainder, estimated from the spread
    let spread = (hi.value - lo.value).abs() * EPS_DEGENERATE;
    Ok(SeriesValue {
        value,
        abs_error: lo.abs_error.max(hi.abs_error) + spread,
        terms: lo.terms + hi.terms,
        converged: lo.converged && hi.converged,
    })
}

/// Distance of x from the nearest integer.
pub(crate) fn near_integer(x: f64) -> (f64, f64) {
    let n = x.round();
    (n, (x - n).abs())
}
