//! Procedural minimizers gamma_2, gamma_3 of twoedge4 and their eigen-residuals.
//! The third minimizer is not an eigenvector of the operator.

use hyperlap::hypergraph::{bundled, weighted_from_normalized};
use hyperlap::spectral::{procedural_minimizers, SpectralOptions};

fn main() -> hyperlap::Result<()> {
    let h = bundled::twoedge4();
    let res = procedural_minimizers(&h, 3, &SpectralOptions::default())?;
    for g in &res.gammas {
        let f = weighted_from_normalized(&h, &g.x);
        println!("gamma_{} = {:.9}  residual {:.3e}  f = {:.4?}", g.k, g.gamma, g.residual, f);
    }
    println!("closed forms: {:.9} {:.9}", (5.0 - 5f64.sqrt()) / 4.0, (11.0 + 5f64.sqrt()) / 8.0);
    Ok(())
}
