//! Matrix elements of the resolutions of identity in the three modes.

use clambda::measures::{verify_identity_resolution, ResolutionMode};
use clambda::{AlgebraParams, Result};

fn main() -> Result<()> {
    let params = AlgebraParams::from_beta_bar(2, &[2.0])?;
    for mode in [ResolutionMode::DiagonalAlpha0, ResolutionMode::EigenstateDiag, ResolutionMode::EigenstateOffdiag] {
        let r = verify_identity_resolution(&params, mode, 4, 1e-6)?;
        println!("{mode:?}: max |<n|I|n'> - δ| = {:.2e}", r.max_deviation);
        for n in 0..r.matrix.nrows() {
            let row: Vec<String> = (0..r.matrix.ncols()).map(|m| format!("{:+.8}", r.matrix[(n, m)].re)).collect();
            println!("  {}", row.join(" "));
        }
    }
    Ok(())
}
