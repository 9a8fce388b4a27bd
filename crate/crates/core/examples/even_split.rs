//! Compare the peeling operator with the naive even split of each edge's
//! flow. They disagree on louis4, which is why the even split is not the
//! right operator.

use hyperlap::hypergraph::bundled;
use hyperlap::operator::{apply_even_split_operator, apply_operator, DEFAULT_TOL};
use hyperlap::StateVector;

fn main() -> hyperlap::Result<()> {
    let h = bundled::louis4();
    let f = StateVector::weighted(vec![1.0, 1.0, -1.0, -1.0]);
    let peel = apply_operator(&h, &f, DEFAULT_TOL)?.laplacian_weighted();
    let even = apply_even_split_operator(&h, &f, DEFAULT_TOL)?.laplacian_weighted();
    for (u, name) in h.nodes().iter().enumerate() {
        println!("{name}: peeling {:+.6}  even split {:+.6}", peel[u], even[u]);
    }
    Ok(())
}
