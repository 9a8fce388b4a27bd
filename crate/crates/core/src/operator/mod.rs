//! The nonlinear Laplacian induced by hypergraph diffusion.
//!
//! Measure flows inside each edge from its maximizing nodes `S_e` to its
//! minimizing nodes `I_e` at total rate `c_e = w_e Δ_e`, and a node only
//! keeps sending (receiving) if it stays extremal to first order. These
//! rules fix a unique rate vector `r = df/dt`; the operators are
//! `L_w f = -r`, `L φ = -W r` and `L̂ x = -W^{1/2} r`.

pub mod density;
pub mod flow;
pub mod split;

use serde::Serialize;

pub use density::{
    max_density_set, peel, peel_with, solve_layer_flow, DensityMethod, DensitySubproblem,
    PeelLayer, RateEntry, SubEdge,
};
pub use split::{apply_even_split_operator, edge_weight_split, even_split_matrix};

use crate::error::{Error, Result};
use crate::hypergraph::{inner_w, norm_sq_w, to_weighted, Hypergraph, StateVector};

/// Default gap below which two values are treated as equal.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Extremal structure of one edge under a given `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeExtremes {
    pub edge: usize,
    /// `S_e`: nodes attaining the maximum.
    pub top: Vec<usize>,
    /// `I_e`: nodes attaining the minimum.
    pub bottom: Vec<usize>,
    /// `Δ_e = max - min` from raw values, or 0 when the whole edge is tied.
    pub spread: f64,
    /// `c_e = w_e Δ_e`.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorResult {
    /// `r = df/dt` in weighted coordinates.
    pub r: Vec<f64>,
    /// `ρ = dφ/dt = W r`.
    pub rho: Vec<f64>,
    /// Layers of every equivalence class, classes in ascending `f`.
    pub layers: Vec<PeelLayer>,
    pub extremes: Vec<EdgeExtremes>,
}

impl OperatorResult {
    /// `L_w f = -r`.
    pub fn laplacian_weighted(&self) -> Vec<f64> {
        self.r.iter().map(|v| -v).collect()
    }

    /// `L φ = -W r`.
    pub fn laplacian_measure(&self) -> Vec<f64> {
        self.rho.iter().map(|v| -v).collect()
    }

    /// `L̂ x = -W^{1/2} r`.
    pub fn laplacian_normalized(&self, h: &Hypergraph) -> Vec<f64> {
        self.r
            .iter()
            .zip(h.node_weights())
            .map(|(r, w)| -r * w.sqrt())
            .collect()
    }

    /// Both sides of `sum_e c_e (r_I(e) - r_S(e)) = ||r||_w^2`.
    pub fn energy_terms(&self, h: &Hypergraph) -> (f64, f64) {
        let lhs: f64 = self
            .extremes
            .iter()
            .filter(|x| x.rate > 0.0)
            .map(|x| {
                let r_s = x.top.iter().map(|&u| self.r[u]).fold(f64::NEG_INFINITY, f64::max);
                let r_i = x.bottom.iter().map(|&u| self.r[u]).fold(f64::INFINITY, f64::min);
                x.rate * (r_i - r_s)
            })
            .sum();
        (lhs, norm_sq_w(h, &self.r))
    }

    /// Relative residual of the energy identity.
    pub fn energy_residual(&self, h: &Hypergraph) -> f64 {
        let (lhs, rhs) = self.energy_terms(h);
        (lhs - rhs).abs() / rhs.abs().max(lhs.abs()).max(1e-300)
    }

    /// `sum_u ρ_u`, zero for a closed system.
    pub fn net_flow(&self) -> f64 {
        self.rho.iter().sum()
    }
}

/// Groups nodes into equivalence classes of (nearly) equal value.
///
/// Values are sorted and consecutive values with gap `<= tol` are chained
/// into one class. Returns the class index of every node and the classes
/// themselves, ascending in value, members ascending by index.
pub fn equivalence_classes(f: &[f64], tol: f64) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));
    let mut class_of = vec![0; f.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &u) in order.iter().enumerate() {
        if i == 0 || f[u] - f[order[i - 1]] > tol {
            classes.push(Vec::new());
        }
        class_of[u] = classes.len() - 1;
        classes.last_mut().unwrap().push(u);
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    (class_of, classes)
}

fn extremes_with_classes(h: &Hypergraph, f: &[f64], class_of: &[usize]) -> Vec<EdgeExtremes> {
    h.edges()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            let hi = e.nodes.iter().map(|&u| class_of[u]).max().unwrap();
            let lo = e.nodes.iter().map(|&u| class_of[u]).min().unwrap();
            if hi == lo {
                let mut all = e.nodes.clone();
                all.sort_unstable();
                return EdgeExtremes {
                    edge: id,
                    top: all.clone(),
                    bottom: all,
                    spread: 0.0,
                    rate: 0.0,
                };
            }
            let mut top: Vec<usize> = e.nodes.iter().copied().filter(|&u| class_of[u] == hi).collect();
            let mut bottom: Vec<usize> =
                e.nodes.iter().copied().filter(|&u| class_of[u] == lo).collect();
            top.sort_unstable();
            bottom.sort_unstable();
            let max = e.nodes.iter().map(|&u| f[u]).fold(f64::NEG_INFINITY, f64::max);
            let min = e.nodes.iter().map(|&u| f[u]).fold(f64::INFINITY, f64::min);
            let spread = max - min;
            EdgeExtremes {
                edge: id,
                top,
                bottom,
                spread,
                rate: e.weight * spread,
            }
        })
        .collect()
}

/// `S_e`, `I_e`, `Δ_e` and `c_e` for every edge under weighted vector `f`.
///
/// Extremal sets are snapped to the tolerance classes of
/// [`equivalence_classes`]; the spread itself is computed from raw values.
pub fn edge_extremes(h: &Hypergraph, f: &[f64], tol: f64) -> Vec<EdgeExtremes> {
    let (class_of, _) = equivalence_classes(f, tol);
    extremes_with_classes(h, f, &class_of)
}

/// Builds the density subproblem of every class.
pub fn class_subproblems(
    h: &Hypergraph,
    classes: &[Vec<usize>],
    class_of: &[usize],
    extremes: &[EdgeExtremes],
) -> Vec<DensitySubproblem> {
    let mut local = vec![0usize; h.n()];
    let mut subs: Vec<DensitySubproblem> = classes
        .iter()
        .map(|c| {
            for (i, &u) in c.iter().enumerate() {
                local[u] = i;
            }
            DensitySubproblem {
                nodes: c.clone(),
                weights: c.iter().map(|&u| h.weight(u)).collect(),
                in_edges: Vec::new(),
                out_edges: Vec::new(),
            }
        })
        .collect();
    for x in extremes.iter().filter(|x| x.rate > 0.0) {
        let ci = class_of[x.bottom[0]];
        subs[ci].in_edges.push(SubEdge {
            edge: x.edge,
            rate: x.rate,
            members: x.bottom.iter().map(|&u| local[u]).collect(),
        });
        let cs = class_of[x.top[0]];
        subs[cs].out_edges.push(SubEdge {
            edge: x.edge,
            rate: x.rate,
            members: x.top.iter().map(|&u| local[u]).collect(),
        });
    }
    subs
}

/// Options for [`apply_operator_with`].
#[derive(Debug, Clone, Copy)]
pub struct OperatorOptions {
    pub tol: f64,
    pub method: DensityMethod,
}

impl Default for OperatorOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, method: DensityMethod::Auto }
    }
}

/// Evaluates the diffusion rates with full diagnostics.
///
/// # Panics
///
/// Panics if a layer flow is infeasible, which would mean the peeling
/// produced a set that is not of maximum density.
pub fn apply_operator_with(
    h: &Hypergraph,
    v: &StateVector,
    opts: OperatorOptions,
) -> Result<OperatorResult> {
    let f = to_weighted(h, v)?;
    Ok(evaluate(h, &f, opts, true))
}

/// [`apply_operator_with`] using the default density method.
pub fn apply_operator(h: &Hypergraph, v: &StateVector, tol: f64) -> Result<OperatorResult> {
    apply_operator_with(h, v, OperatorOptions { tol, ..Default::default() })
}

/// Operator evaluation on raw weighted coordinates.
pub fn evaluate(h: &Hypergraph, f: &[f64], opts: OperatorOptions, with_flow: bool) -> OperatorResult {
    assert_eq!(f.len(), h.n(), "vector length must match node count");
    let (class_of, classes) = equivalence_classes(f, opts.tol);
    let extremes = extremes_with_classes(h, f, &class_of);
    let subs = class_subproblems(h, &classes, &class_of, &extremes);
    let mut r = vec![0.0; h.n()];
    let mut layers = Vec::new();
    for sub in &subs {
        let peeled = match peel_with(sub, opts.method, with_flow) {
            Ok(p) => p,
            Err(Error::FlowInfeasible { routed, required }) => panic!(
                "layer flow infeasible (routed {routed}, required {required}) at f = {f:?}"
            ),
            Err(e) => panic!("peeling failed: {e}"),
        };
        for layer in peeled {
            for &u in &layer.nodes {
                r[u] = layer.delta;
            }
            layers.push(layer);
        }
    }
    let rho = r.iter().zip(h.node_weights()).map(|(r, w)| r * w).collect();
    OperatorResult { r, rho, layers, extremes }
}

/// Only `r = df/dt`, skipping the per-edge flow decomposition.
pub fn rate_vector(h: &Hypergraph, f: &[f64], tol: f64) -> Vec<f64> {
    // Fast path: all values distinct means every class is a singleton.
    let mut sorted: Vec<f64> = f.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).all(|w| w[1] - w[0] > tol) {
        let mut rho = vec![0.0; h.n()];
        for e in h.edges() {
            let (mut hi, mut lo) = (e.nodes[0], e.nodes[0]);
            for &u in &e.nodes[1..] {
                if f[u] > f[hi] {
                    hi = u;
                }
                if f[u] < f[lo] {
                    lo = u;
                }
            }
            if hi != lo {
                let c = e.weight * (f[hi] - f[lo]);
                rho[hi] -= c;
                rho[lo] += c;
            }
        }
        return rho.iter().zip(h.node_weights()).map(|(p, w)| p / w).collect();
    }
    evaluate(h, f, OperatorOptions { tol, ..Default::default() }, false).r
}

/// `<f, L_w f>_w / <f, f>_w`, computed through the operator.
pub fn rayleigh_quotient(h: &Hypergraph, v: &StateVector) -> Result<f64> {
    let f = to_weighted(h, v)?;
    let den = norm_sq_w(h, &f);
    if den <= 0.0 {
        return Err(Error::ZeroVector);
    }
    let r = rate_vector(h, &f, DEFAULT_TOL);
    Ok(-inner_w(h, &f, &r) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{bundled, discrepancy_ratio};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn louis_extremes() {
        let h = bundled::louis4();
        let ex = edge_extremes(&h, &[1.0, 1.0, -1.0, -1.0], DEFAULT_TOL);
        let e5 = &ex[4];
        assert_eq!(e5.top, vec![0, 1]);
        assert_eq!(e5.bottom, vec![2]);
        assert_eq!(e5.spread, 2.0);
        assert_eq!(e5.rate, 2.0);
        let flat = edge_extremes(&h, &[0.5; 4], DEFAULT_TOL);
        for x in flat {
            assert_eq!(x.spread, 0.0);
            assert_eq!(x.top, x.bottom);
            assert_eq!(x.top.len(), h.edges()[x.edge].nodes.len());
        }
    }

    #[test]
    fn twoedge_extremes() {
        let s5 = 5f64.sqrt();
        let h = bundled::twoedge4();
        let ex = edge_extremes(&h, &[s5 - 1.0, -1.0, 4.0 - s5, -1.0], DEFAULT_TOL);
        assert_eq!(ex[1].top, vec![2]);
        assert_eq!(ex[1].bottom, vec![1, 3]);
        assert!((ex[1].spread - (5.0 - s5)).abs() < 1e-15);
    }

    #[test]
    fn louis_operator_is_eigen() {
        let h = bundled::louis4();
        let res = apply_operator(&h, &StateVector::weighted(vec![1.0, 1.0, -1.0, -1.0]), DEFAULT_TOL)
            .unwrap();
        let t = 2.0 / 3.0;
        assert!(close(&res.laplacian_weighted(), &[t, t, -t, -t], 1e-12));
    }

    #[test]
    fn twoedge_operator() {
        let s5 = 5f64.sqrt();
        let h = bundled::twoedge4();
        let res = apply_operator(
            &h,
            &StateVector::weighted(vec![s5 - 1.0, -1.0, 4.0 - s5, -1.0]),
            DEFAULT_TOL,
        )
        .unwrap();
        let want = [s5, -5.0 / 3.0, 5.0 - s5, -5.0 / 3.0];
        assert!(close(&res.laplacian_weighted(), &want, 1e-12), "{:?}", res.r);
        // b and d form one class moving together.
        let bd = res.layers.iter().find(|l| l.nodes.contains(&1)).unwrap();
        assert_eq!(bd.nodes, vec![1, 3]);
    }

    #[test]
    fn constant_and_zero_vectors() {
        let h = bundled::nested5();
        for v in [vec![2.0; 5], vec![0.0; 5]] {
            let res = apply_operator(&h, &StateVector::weighted(v), DEFAULT_TOL).unwrap();
            assert!(res.r.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn rayleigh_examples() {
        let h = bundled::louis4();
        let f = StateVector::weighted(vec![1.0, 1.0, -1.0, -1.0]);
        assert!((rayleigh_quotient(&h, &f).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(rayleigh_quotient(&h, &StateVector::weighted(vec![3.0; 4])).unwrap(), 0.0);
        assert!(rayleigh_quotient(&h, &StateVector::weighted(vec![0.0; 4])).is_err());
        let d = discrepancy_ratio(&h, &f).unwrap();
        assert!((d - rayleigh_quotient(&h, &f).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn fast_path_matches_full_evaluation() {
        let h = bundled::nested5();
        let f = [0.3, -0.2, 0.9, -1.1, 0.05];
        let fast = rate_vector(&h, &f, DEFAULT_TOL);
        let full = evaluate(&h, &f, OperatorOptions::default(), true).r;
        assert!(close(&fast, &full, 1e-14));
    }

    #[test]
    fn classes_chain_within_tolerance() {
        let (class_of, classes) = equivalence_classes(&[0.0, 0.6e-9, 1.2e-9, 1.0], 1e-9);
        assert_eq!(classes, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(class_of, vec![0, 0, 0, 1]);
    }
}
