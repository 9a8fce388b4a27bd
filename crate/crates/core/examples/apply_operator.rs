//! Evaluate the diffusion operator on a bundled instance and inspect the
//! peeling layers and flows.
//!
//! ```text
//! cargo run --example apply_operator
//! ```

use hyperlap::hypergraph::bundled;
use hyperlap::operator::{apply_operator, DEFAULT_TOL};
use hyperlap::StateVector;

fn main() -> hyperlap::Result<()> {
    let h = bundled::louis4();
    let f = StateVector::weighted(vec![1.0, 1.0, -1.0, -1.0]);
    let res = apply_operator(&h, &f, DEFAULT_TOL)?;

    println!("L_w f = {:?}", res.laplacian_weighted());
    for layer in &res.layers {
        let names: Vec<&str> = layer.nodes.iter().map(|&u| h.nodes()[u].as_str()).collect();
        println!("layer {names:?} density {:.6}", layer.delta);
    }
    println!("energy identity residual {:.2e}", res.energy_residual(&h));
    println!("net flow {:.2e}", res.net_flow());
    Ok(())
}
