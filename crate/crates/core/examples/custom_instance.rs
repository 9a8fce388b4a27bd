//! Load an instance from JSON, check edge expansion and the discrepancy
//! ratio on an indicator vector, and compute its spectral gap.

use hyperlap::hypergraph::{discrepancy_ratio, edge_expansion};
use hyperlap::spectral::gamma2;
use hyperlap::{Hypergraph, StateVector};

const INSTANCE: &str = r#"{
  "nodes": ["u", "v", "w", "x", "y"],
  "edges": [
    {"nodes": ["u", "v", "w"], "weight": 1.0},
    {"nodes": ["w", "x"], "weight": 2.0},
    {"nodes": ["x", "y"], "weight": 1.0},
    {"nodes": ["u", "y"], "weight": 0.5}
  ]
}"#;

fn main() -> hyperlap::Result<()> {
    let h = Hypergraph::from_json(INSTANCE)?;
    println!("hash {}", h.content_hash());

    let s = [0, 1, 2];
    let indicator = StateVector::weighted(vec![1.0, 1.0, 1.0, 0.0, 0.0]);
    println!("phi(S) = {:.6}", edge_expansion(&h, &s)?);
    println!("D_w(1_S) = {:.6}", discrepancy_ratio(&h, &indicator)?);

    let (g2, _) = gamma2(&h, 64, 7)?;
    println!("gamma_2 = {g2:.9}");
    Ok(())
}
