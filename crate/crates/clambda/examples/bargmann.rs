//! Differential-operator realizations acting on polynomials, and their checks.

use clambda::bargmann::{apply_realization, check_d_conjugation, check_intertwining, Basis, PolyFunction};
use clambda::{AlgebraParams, OpKind, Result};

fn main() -> Result<()> {
    let params = AlgebraParams::from_beta_bar(3, &[4.0 / 3.0, 2.0 / 3.0])?;

    let basis = Basis::SectorAlpha { mu: 0, alpha: 1 };
    let f = PolyFunction::monomial(1, 0, 2);
    for op in [OpKind::Jplus, OpKind::Jminus, OpKind::J0] {
        let g = apply_realization(&params, basis, op, &f)?;
        let terms: Vec<String> = g.components[0]
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(k, c)| format!("{:.6} z^{k}", c.re))
            .collect();
        println!("{op:?} z^2 = {}", terms.join(" + "));
    }

    for basis in [basis, Basis::VectorAlpha0, Basis::Eigenstate] {
        let r = check_intertwining(&params, basis, 10, 1e-12)?;
        println!("{}: intertwining max residual {:.2e}", basis.tag(), r.max_residual);
    }
    println!("D(z) conjugation max residual {:.2e}", check_d_conjugation(&params, 10, 1e-12)?.max_residual);
    Ok(())
}
