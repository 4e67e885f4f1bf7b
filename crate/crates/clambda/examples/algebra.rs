//! Truncated Fock matrices for λ = 3 and the defining commutators.

use clambda::algebra::{build_operator, interior, structure_function};
use clambda::{AlgebraParams, OpKind, Result, TruncatedOperator};

fn main() -> Result<()> {
    let params = AlgebraParams::from_beta_bar(3, &[4.0 / 3.0, 2.0 / 3.0])?;
    println!("alpha = {:?}", params.alphas());
    for n in 0..7 {
        println!("F({n}) = {:.6}", structure_function(&params, n));
    }

    let k = 48;
    let a = build_operator(&params, OpKind::A, k)?;
    let ad = build_operator(&params, OpKind::Adag, k)?;
    let mut rhs = TruncatedOperator::identity(k);
    for mu in 0..3 {
        let p = build_operator(&params, OpKind::P(mu), k)?;
        rhs.entries += p.entries.map(|x| x * params.alpha(mu as i64));
    }
    let block = interior(&params, k);
    println!("max |[a,a†] - (I + Σ α P)| on {block}x{block} block: {:e}", a.commutator(&ad).max_diff_on_block(&rhs, block));

    let h0 = build_operator(&params, OpKind::H0, 8)?;
    let levels: Vec<String> = (0..8).map(|n| format!("{:.4}", h0.get(n, n).re)).collect();
    println!("H0 spectrum: {}", levels.join(" "));
    Ok(())
}
