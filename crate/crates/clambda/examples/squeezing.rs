//! Quadrature variance ratios for dressed and real photons.

use clambda::observables::{squeezing_cs_alpha, squeezing_eigenstate, Method, Quadrature};
use clambda::{AlgebraParams, CsAlphaSpec, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let params = AlgebraParams::from_beta_bar(2, &[0.5])?;
    println!("|z;0;0>, lambda = 2, beta_bar_1 = 1/2");
    println!("  Re z   X dressed   P dressed   X real");
    for x in [-3.0, -2.0, -1.0, -0.5] {
        let spec = CsAlphaSpec::new(&params, 0, 0, Complex64::new(x, 0.0))?;
        let d = squeezing_cs_alpha(&spec, Quadrature::Dressed, Method::Closed)?;
        let r = squeezing_cs_alpha(&spec, Quadrature::Real, Method::Closed)?;
        println!("{x:6.2} {:11.6} {:11.6} {:9.6}", d.x_ratio, d.p_ratio, r.x_ratio);
    }

    let params = AlgebraParams::from_beta_bar(2, &[2.0])?;
    println!("\n|z>, lambda = 2, beta_bar_1 = 2 (minimum uncertainty)");
    for r in [0.5, 1.0, 2.0, 3.0] {
        let s = squeezing_eigenstate(&params, Complex64::new(r, 0.0), Quadrature::Dressed, Method::Oracle)?;
        println!(
            "  r = {r:.1}  X = {:.6}  P = {:.6}  (Δx Δp)² - bound = {:.1e}",
            s.x_ratio,
            s.p_ratio,
            s.uncertainty_lhs - s.uncertainty_rhs
        );
    }
    Ok(())
}
