//! Mandel Q for the Perelomov states and for the λ = 2 eigenstates, closed form against oracle.

use clambda::observables::{mandel_q_cs_alpha, mandel_q_eigenstate, Method};
use clambda::{AlgebraParams, CsAlphaSpec, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let perelomov = AlgebraParams::from_beta_bar(2, &[0.75])?;
    println!("   y     Q closed     Q oracle   (1+y)/(1-y)");
    for y in [0.1f64, 0.3, 0.5, 0.7, 0.9] {
        // y = |z|²
        let spec = CsAlphaSpec::new(&perelomov, 0, 1, Complex64::new(y.sqrt(), 0.0))?;
        let c = mandel_q_cs_alpha(&spec, Method::Closed)?;
        let o = mandel_q_cs_alpha(&spec, Method::Oracle)?;
        println!("{y:5.2} {:12.8} {:12.8} {:12.8}", c.mandel_q, o.mandel_q, (1.0 + y) / (1.0 - y));
    }

    println!("\nbeta_bar_1    r     Q");
    for b in [1.0 / 90.0, 0.25, 1.0, 10.0] {
        let params = AlgebraParams::from_beta_bar(2, &[b])?;
        for r in [0.5, 1.5, 3.0] {
            let q = mandel_q_eigenstate(&params, r, Method::Bessel)?;
            println!("{b:9.4} {r:5.2} {:+.8}", q.mandel_q);
        }
    }
    Ok(())
}
