//! Both coherent-state families, their eigenvalue residuals and overlaps.

use clambda::states::{cs_alpha_state, eigenstate, overlap_cs_alpha, residual_cs_alpha, residual_eigenstate};
use clambda::{AlgebraParams, CsAlphaSpec, Norm, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let params = AlgebraParams::from_beta_bar(3, &[4.0 / 3.0, 2.0 / 3.0])?;
    let z = Complex64::new(0.8, 0.4);

    for (mu, alpha) in [(0, 0), (1, 0), (0, 1)] {
        let spec = CsAlphaSpec::new(&params, mu, alpha, z)?;
        let psi = cs_alpha_state(&spec, 64, Norm::Normalized)?;
        println!(
            "|z;{mu};{alpha}>  dim {:3}  residual {:.2e}  <N> = {:.6}",
            psi.dim,
            residual_cs_alpha(&spec, &psi)?,
            psi.expectation(|n| n as f64)
        );
    }

    let spec = CsAlphaSpec::new(&params, 0, 1, z)?;
    let other = spec.with_z(Complex64::new(0.5, -0.2))?;
    println!("overlap <z;0;1|z';0;1> = {:.8}", overlap_cs_alpha(&spec, &other)?);

    let psi = eigenstate(&params, z, 64, Norm::Normalized)?;
    println!("|z>  residual {:.2e}", residual_eigenstate(&params, z, &psi)?);
    for (n, c) in psi.coeffs.iter().take(6).enumerate() {
        println!("  c_{n} = {:.8}", c);
    }
    Ok(())
}
