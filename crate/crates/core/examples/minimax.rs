//! Orthogonal minimaximizers xi_k and zeta_k on louis4: the brute-force
//! oracle against the fast heuristic.

use hyperlap::hypergraph::bundled;
use hyperlap::spectral::minimax_parameters;
use hyperlap::verify::oracle_xi_zeta;

fn main() -> hyperlap::Result<()> {
    let h = bundled::louis4();
    let oracle = oracle_xi_zeta(&h, 2)?;
    let fast = minimax_parameters(&h, 2, 64, 7)?;
    println!("oracle:    xi_2 {:.6}  zeta_2 {:.6}  stable {}", oracle.xi, oracle.zeta, oracle.stable);
    println!("heuristic: xi_2 {:.6}  zeta_2 {:.6}", fast.xi, fast.zeta);
    println!("gamma_2 = 2/3, so xi_2 sits strictly below it");
    Ok(())
}
