//! Integrate the deterministic diffusion from a point mass, write the
//! trajectory as CSV and compare the mixing time with its bound.
//!
//! ```text
//! cargo run --example diffusion -- traj.csv
//! ```

use hyperlap::diffusion::{mixing_time, simulate};
use hyperlap::hypergraph::bundled;
use hyperlap::operator::DEFAULT_TOL;
use hyperlap::StateVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = bundled::nested5();
    let phi0 = StateVector::measure(vec![1.0, 0.0, 0.0, 0.0, 0.0]);

    let traj = simulate(&h, &phi0, 10.0, 1e-3, DEFAULT_TOL)?;
    let last = traj.diagnostics.last().expect("nonempty trajectory");
    println!("{} steps, final l1 distance {:.3e}", traj.len(), last.l1_to_equilibrium);
    if let Some(path) = std::env::args().nth(1) {
        traj.write_csv(&h, std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }

    let rep = mixing_time(&h, &phi0, 0.01, 5.0 / 6.0, 1e-3)?;
    println!("t_mix {:.4} <= bound {:.4}: {}", rep.t_mix, rep.bound, rep.within_bound);
    Ok(())
}
