//! Diffusion-based Laplacian for weighted hypergraphs.
//!
//! The crate evaluates the nonlinear operator induced by measure diffusion
//! on a hypergraph, integrates the deterministic and stochastic diffusion
//! processes, computes procedural minimizers of the discrepancy ratio and
//! ships brute-force oracles that certify the results on small instances.
//!
//! | module | contents |
//! |---|---|
//! | [`hypergraph`] | data model, coordinate spaces, discrepancy ratio, edge expansion |
//! | [`operator`] | rate vector `r = df/dt`, peeling, layer flows, weight splits |
//! | [`diffusion`] | event-guarded Euler integration, derivative identities, mixing time |
//! | [`stochastic`] | Euler–Maruyama simulation and ensemble statistics |
//! | [`spectral`] | procedural minimizers `γ_k`, eigen-residuals, minimaximizers |
//! | [`verify`] | permutation verifier, brute-force operator, `ξ_k`/`ζ_k` oracles |
//! | [`golden`] | the golden suite over the bundled instances |
//! | [`cli`] | the `hyperlap` command line |

pub mod error;
pub mod hypergraph;
pub mod operator;
pub mod diffusion;
pub mod stochastic;
pub mod spectral;
pub mod verify;
pub mod golden;
pub mod cli;
mod linalg;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, Space, StateVector};
