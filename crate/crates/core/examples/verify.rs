//! Certify gamma_3 of nested5 on one branch with the permutation verifier,
//! then watch it reject a value that is too large.

use hyperlap::hypergraph::{bundled, discrepancy_ratio};
use hyperlap::verify::{verify_gamma, VerifyMethod, DEFAULT_TOL};
use hyperlap::StateVector;

fn main() -> hyperlap::Result<()> {
    let h = bundled::nested5();
    let priors = vec![vec![1.0; 5], vec![1.0, 1.0, 1.0, -4.0, -4.0]];
    let gamma = 113.0 / 99.0;

    let ok = verify_gamma(&h, &priors, gamma, DEFAULT_TOL, VerifyMethod::ProjectedGradient)?;
    println!("gamma = {gamma:.9}: verified {} (minimum {:.3e})", ok.verified, ok.minimum);

    let bad = verify_gamma(&h, &priors, gamma + 0.01, DEFAULT_TOL, VerifyMethod::ProjectedGradient)?;
    println!("gamma + 0.01: verified {}", bad.verified);
    if let Some(f) = bad.counterexample {
        let d = discrepancy_ratio(&h, &StateVector::weighted(f.clone()))?;
        println!("counterexample {f:.4?} has D_w = {d:.9}");
    }
    Ok(())
}
