//! Weight functions solving the moment problems, checked against their moments,
//! and the Carleman verdicts for λ = 2..5.

use clambda::measures::{carleman_test, verify_moments, weight_function};
use clambda::{AlgebraParams, Result};

fn main() -> Result<()> {
    let cases: [(usize, &[f64], usize, usize); 4] = [
        (2, &[2.0], 0, 0),
        (2, &[2.0], 0, 1),
        (3, &[4.0 / 3.0, 2.0 / 3.0], 0, 1),
        (4, &[1.5, 1.5, 1.25], 0, 2),
    ];
    for (lambda, bb, mu, alpha) in cases {
        let params = AlgebraParams::from_beta_bar(lambda, bb)?;
        let w = weight_function(&params, mu, alpha)?;
        let report = verify_moments(&w, w.problem(), 8, 1e-6)?;
        println!(
            "lambda={lambda} beta_bar={bb:?} h^({alpha})_{mu} [{}]  h(0.5) = {:.10}  max rel moment error {:.2e}",
            w.form().tag(),
            w.eval(0.5)?,
            report.max_rel_error
        );
    }

    println!("\nlambda alpha exponent verdict");
    for lambda in 2..=5 {
        let params = AlgebraParams::new(lambda, &vec![0.0; lambda])?;
        for alpha in 0..=lambda / 2 {
            let c = carleman_test(&params, alpha)?;
            println!("{lambda:6} {alpha:5} {:8.2} {}", c.exponent, c.verdict.tag());
        }
    }
    Ok(())
}
