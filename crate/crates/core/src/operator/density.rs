//! Maximum-density peeling of one equivalence class.
//!
//! For a class `U` of equal-valued nodes, `I_U` holds the edges whose
//! minimizing nodes lie in `U` (they push measure in at rate `c_e`) and
//! `S_U` the edges whose maximizing nodes lie in `U` (they drain `c_e`).
//! For `X ⊆ U`
//!
//! ```text
//! I_X = { e in I_U : I_e ⊆ X }        S_X = { e in S_U : S_e ∩ X ≠ ∅ }
//! δ(X) = (c(I_X) - c(S_X)) / w(X)
//! ```
//!
//! The maximizers of `δ` are closed under union, so there is a unique
//! maximal maximizer `P`. Its nodes all move at rate `δ(P)`; removing `P`
//! and its edges and repeating yields the layers of the class.

use serde::Serialize;

use super::flow::FlowNetwork;
use crate::error::{Error, Result};

/// Largest class accepted by subset enumeration.
pub const BRUTE_FORCE_LIMIT: usize = 22;

/// How the maximum-density set is found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum DensityMethod {
    /// Enumerate every nonempty subset.
    BruteForce,
    /// Dinkelbach iteration over a min-cut oracle.
    ParametricCut,
    /// `BruteForce` up to [`BRUTE_FORCE_LIMIT`] nodes, `ParametricCut` above.
    #[default]
    Auto,
}

/// An edge restricted to one class: its id, rate `c_e` and the local
/// indices of its extremal nodes inside the class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubEdge {
    pub edge: usize,
    pub rate: f64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensitySubproblem {
    /// Global node ids of the class, ascending.
    pub nodes: Vec<usize>,
    /// Node weights, parallel to `nodes`.
    pub weights: Vec<f64>,
    /// `I_U`; members are `I_e ∩ U` as local indices.
    pub in_edges: Vec<SubEdge>,
    /// `S_U`; members are `S_e ∩ U` as local indices.
    pub out_edges: Vec<SubEdge>,
}

/// `ρ_v(e)`: rate of change of the measure at `node` due to `edge`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEntry {
    pub node: usize,
    pub edge: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeelLayer {
    /// Global node ids of `T`, ascending.
    pub nodes: Vec<usize>,
    /// Common rate `δ(T)` of every node in the layer.
    pub delta: f64,
    /// Edge ids of `I_T`.
    pub in_edges: Vec<usize>,
    /// Edge ids of `S_T`.
    pub out_edges: Vec<usize>,
    /// Zero-surplus assignment of edge rates to layer nodes.
    pub rates: Vec<RateEntry>,
}

impl DensitySubproblem {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn total_rate(&self) -> f64 {
        self.in_edges
            .iter()
            .chain(&self.out_edges)
            .map(|e| e.rate)
            .sum()
    }

    /// Tolerance on `δ` below which two densities count as tied.
    pub fn tie_eps(&self) -> f64 {
        let wmin = self.weights.iter().copied().fold(f64::INFINITY, f64::min);
        1e-9 * (1.0 + self.total_rate() / wmin)
    }

    /// `C(X)` and `w(X)` for a membership mask over local indices.
    pub fn surplus_and_weight(&self, inside: &[bool]) -> (f64, f64) {
        let gain: f64 = self
            .in_edges
            .iter()
            .filter(|e| e.members.iter().all(|&u| inside[u]))
            .map(|e| e.rate)
            .sum();
        let loss: f64 = self
            .out_edges
            .iter()
            .filter(|e| e.members.iter().any(|&u| inside[u]))
            .map(|e| e.rate)
            .sum();
        let w: f64 = self
            .weights
            .iter()
            .zip(inside)
            .filter(|(_, &b)| b)
            .map(|(w, _)| w)
            .sum();
        (gain - loss, w)
    }

    /// `δ(X)`; `None` for the empty set.
    pub fn density(&self, inside: &[bool]) -> Option<f64> {
        let (c, w) = self.surplus_and_weight(inside);
        (w > 0.0).then(|| c / w)
    }

    fn density_of(&self, set: &[usize]) -> f64 {
        let mut inside = vec![false; self.len()];
        for &u in set {
            inside[u] = true;
        }
        self.density(&inside).expect("nonempty set")
    }

    /// Removes layer `T` (local indices) and its edges, returning the
    /// residual instance together with `I_T` and `S_T`.
    fn split_off(&self, layer: &[usize]) -> (DensitySubproblem, Vec<SubEdge>, Vec<SubEdge>) {
        let mut inside = vec![false; self.len()];
        for &u in layer {
            inside[u] = true;
        }
        let mut remap = vec![usize::MAX; self.len()];
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for u in 0..self.len() {
            if !inside[u] {
                remap[u] = nodes.len();
                nodes.push(self.nodes[u]);
                weights.push(self.weights[u]);
            }
        }
        let mut taken_in = Vec::new();
        let mut rest_in = Vec::new();
        for e in &self.in_edges {
            if e.members.iter().all(|&u| inside[u]) {
                taken_in.push(e.clone());
            } else {
                rest_in.push(SubEdge {
                    edge: e.edge,
                    rate: e.rate,
                    members: e
                        .members
                        .iter()
                        .filter(|&&u| !inside[u])
                        .map(|&u| remap[u])
                        .collect(),
                });
            }
        }
        let mut taken_out = Vec::new();
        let mut rest_out = Vec::new();
        for e in &self.out_edges {
            if e.members.iter().any(|&u| inside[u]) {
                taken_out.push(e.clone());
            } else {
                rest_out.push(SubEdge {
                    edge: e.edge,
                    rate: e.rate,
                    members: e.members.iter().map(|&u| remap[u]).collect(),
                });
            }
        }
        let residual = DensitySubproblem {
            nodes,
            weights,
            in_edges: rest_in,
            out_edges: rest_out,
        };
        (residual, taken_in, taken_out)
    }
}

/// The unique maximal maximum-density set `P` (local indices, ascending)
/// and `δ_M = δ(P)`.
pub fn max_density_set(sub: &DensitySubproblem, method: DensityMethod) -> Result<(Vec<usize>, f64)> {
    if sub.is_empty() {
        return Err(Error::InvalidArgument("empty density subproblem".into()));
    }
    if sub.len() == 1 {
        return Ok((vec![0], sub.density_of(&[0])));
    }
    let method = match method {
        DensityMethod::Auto if sub.len() <= BRUTE_FORCE_LIMIT => DensityMethod::BruteForce,
        DensityMethod::Auto => DensityMethod::ParametricCut,
        m => m,
    };
    let set = match method {
        DensityMethod::BruteForce => brute_force(sub)?,
        _ => parametric_cut(sub),
    };
    let delta = sub.density_of(&set);
    Ok((set, delta))
}

fn brute_force(sub: &DensitySubproblem) -> Result<Vec<usize>> {
    let n = sub.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            what: "class size",
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mask_of = |members: &[usize]| members.iter().fold(0u32, |m, &u| m | (1 << u));
    let ins: Vec<(u32, f64)> = sub.in_edges.iter().map(|e| (mask_of(&e.members), e.rate)).collect();
    let outs: Vec<(u32, f64)> = sub.out_edges.iter().map(|e| (mask_of(&e.members), e.rate)).collect();
    let density = |x: u32| {
        let mut c = 0.0;
        for &(m, r) in &ins {
            if m & x == m {
                c += r;
            }
        }
        for &(m, r) in &outs {
            if m & x != 0 {
                c -= r;
            }
        }
        let mut w = 0.0;
        for u in 0..n {
            if x & (1 << u) != 0 {
                w += sub.weights[u];
            }
        }
        c / w
    };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let densities: Vec<f64> = (1..=full).map(density).collect();
    let best = densities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let eps = sub.tie_eps();
    let union = densities
        .iter()
        .enumerate()
        .filter(|(_, &d)| d >= best - eps)
        .fold(0u32, |acc, (i, _)| acc | (i as u32 + 1));
    Ok((0..n).filter(|&u| union & (1 << u) != 0).collect())
}

/// Maximizes `C(X) - λ w(X)` over `X ⊆ U` with a single min cut and returns
/// the minimal optimal `X`.
fn best_cut(sub: &DensitySubproblem, lambda: f64) -> Vec<usize> {
    let n = sub.len();
    let (s, t) = (0, 1);
    let mut g = FlowNetwork::new(2 + n);
    let node = |u: usize| 2 + u;
    for e in &sub.in_edges {
        let x = g.add_node();
        g.add_arc(s, x, e.rate);
        for &u in &e.members {
            g.add_arc(x, node(u), f64::INFINITY);
        }
    }
    for e in &sub.out_edges {
        let y = g.add_node();
        g.add_arc(y, t, e.rate);
        for &u in &e.members {
            g.add_arc(node(u), y, f64::INFINITY);
        }
    }
    for u in 0..n {
        let c = lambda * sub.weights[u];
        if c > 0.0 {
            g.add_arc(node(u), t, c);
        } else if c < 0.0 {
            g.add_arc(s, node(u), -c);
        }
    }
    g.max_flow(s, t);
    let side = g.reachable_from(s);
    (0..n).filter(|&u| side[node(u)]).collect()
}

fn parametric_cut(sub: &DensitySubproblem) -> Vec<usize> {
    let eps = sub.tie_eps();
    let all: Vec<usize> = (0..sub.len()).collect();
    let mut best_set = all.clone();
    let mut lambda = sub.density_of(&all);
    // Dinkelbach: each improving cut strictly raises λ; finitely many sets.
    for _ in 0..(4 * sub.len() + 64) {
        let x = best_cut(sub, lambda);
        if x.is_empty() {
            break;
        }
        let d = sub.density_of(&x);
        if d <= lambda + eps {
            break;
        }
        lambda = d;
        best_set = x;
    }
    // Shifting λ slightly down makes the maximal maximizer the unique optimum.
    let p = best_cut(sub, lambda - eps);
    if p.is_empty() {
        best_set
    } else {
        p
    }
}

/// Assigns `ρ_v(e)` for a layer `T` by a zero-surplus flow: every `e ∈ I_T`
/// supplies `c_e` to nodes of `I_e ∩ T`, every `e ∈ S_T` draws `c_e` from
/// nodes of `S_e ∩ T`, and node `v` nets `w_v δ`.
///
/// `layer` holds global node ids and `weights`; edge members are local
/// indices into `layer`.
pub fn solve_layer_flow(
    layer: &[usize],
    weights: &[f64],
    delta: f64,
    in_edges: &[SubEdge],
    out_edges: &[SubEdge],
) -> Result<Vec<RateEntry>> {
    let mut rates = Vec::new();
    if layer.len() == 1 {
        for e in in_edges {
            rates.push(RateEntry { node: layer[0], edge: e.edge, rate: e.rate });
        }
        for e in out_edges {
            rates.push(RateEntry { node: layer[0], edge: e.edge, rate: -e.rate });
        }
        return Ok(rates);
    }
    let n = layer.len();
    let (s, t) = (0, 1);
    let mut g = FlowNetwork::new(2 + n);
    let node = |u: usize| 2 + u;
    let mut required = 0.0;
    let mut supply_arcs = Vec::new();
    for e in in_edges {
        let x = g.add_node();
        g.add_arc(s, x, e.rate);
        required += e.rate;
        for &u in &e.members {
            supply_arcs.push((g.add_arc(x, node(u), f64::INFINITY), u, e.edge));
        }
    }
    let mut demand_arcs = Vec::new();
    for e in out_edges {
        let y = g.add_node();
        g.add_arc(y, t, e.rate);
        for &u in &e.members {
            demand_arcs.push((g.add_arc(node(u), y, f64::INFINITY), u, e.edge));
        }
    }
    for (u, &w) in weights.iter().enumerate() {
        let c = w * delta;
        if c > 0.0 {
            g.add_arc(node(u), t, c);
        } else if c < 0.0 {
            g.add_arc(s, node(u), -c);
            required += -c;
        }
    }
    let routed = g.max_flow(s, t);
    if routed < required - 1e-9 * required.max(1.0) {
        return Err(Error::FlowInfeasible { routed, required });
    }
    for (arc, u, edge) in supply_arcs {
        let f = g.flow(arc);
        if f > 0.0 {
            rates.push(RateEntry { node: layer[u], edge, rate: f });
        }
    }
    for (arc, u, edge) in demand_arcs {
        let f = g.flow(arc);
        if f > 0.0 {
            rates.push(RateEntry { node: layer[u], edge, rate: -f });
        }
    }
    Ok(rates)
}

/// Peels a class into layers of strictly decreasing rate. With
/// `with_flow = false` the per-edge rates are left empty.
pub fn peel_with(
    sub: &DensitySubproblem,
    method: DensityMethod,
    with_flow: bool,
) -> Result<Vec<PeelLayer>> {
    let mut layers = Vec::new();
    let mut current = sub.clone();
    while !current.is_empty() {
        let (set, delta) = max_density_set(&current, method)?;
        let (residual, taken_in, taken_out) = current.split_off(&set);
        let mut local = vec![usize::MAX; current.len()];
        for (i, &u) in set.iter().enumerate() {
            local[u] = i;
        }
        let relabel = |edges: &[SubEdge], keep_all: bool| -> Vec<SubEdge> {
            edges
                .iter()
                .map(|e| SubEdge {
                    edge: e.edge,
                    rate: e.rate,
                    members: e
                        .members
                        .iter()
                        .filter(|&&u| keep_all || local[u] != usize::MAX)
                        .map(|&u| local[u])
                        .collect(),
                })
                .collect()
        };
        let layer_in = relabel(&taken_in, true);
        let layer_out = relabel(&taken_out, false);
        let nodes: Vec<usize> = set.iter().map(|&u| current.nodes[u]).collect();
        let weights: Vec<f64> = set.iter().map(|&u| current.weights[u]).collect();
        let rates = if with_flow {
            solve_layer_flow(&nodes, &weights, delta, &layer_in, &layer_out)?
        } else {
            Vec::new()
        };
        layers.push(PeelLayer {
            nodes,
            delta,
            in_edges: taken_in.iter().map(|e| e.edge).collect(),
            out_edges: taken_out.iter().map(|e| e.edge).collect(),
            rates,
        });
        current = residual;
    }
    Ok(layers)
}

/// [`peel_with`] including the layer flows.
pub fn peel(sub: &DensitySubproblem, method: DensityMethod) -> Result<Vec<PeelLayer>> {
    peel_with(sub, method, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub_edge(edge: usize, rate: f64, members: &[usize]) -> SubEdge {
        SubEdge { edge, rate, members: members.to_vec() }
    }

    /// Class `{a, b}` of louis4 at f = (1,1,-1,-1): e2={b,d} and e5={a,b,c}
    /// both drain at rate 2; S_e2 = {b}, S_e5 = {a, b}.
    fn louis_top() -> DensitySubproblem {
        DensitySubproblem {
            nodes: vec![0, 1],
            weights: vec![3.0, 3.0],
            in_edges: vec![],
            out_edges: vec![sub_edge(1, 2.0, &[1]), sub_edge(4, 2.0, &[0, 1])],
        }
    }

    fn louis_bottom() -> DensitySubproblem {
        DensitySubproblem {
            nodes: vec![2, 3],
            weights: vec![3.0, 3.0],
            in_edges: vec![sub_edge(1, 2.0, &[1]), sub_edge(4, 2.0, &[0])],
            out_edges: vec![],
        }
    }

    #[test]
    fn louis_top_class_hand_enumeration() {
        let sub = louis_top();
        assert!((sub.density(&[true, false]).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        assert!((sub.density(&[false, true]).unwrap() + 4.0 / 3.0).abs() < 1e-15);
        assert!((sub.density(&[true, true]).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        for m in [DensityMethod::BruteForce, DensityMethod::ParametricCut] {
            let (p, d) = max_density_set(&sub, m).unwrap();
            assert_eq!(p, vec![0, 1]);
            assert!((d + 2.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn louis_bottom_class_and_flow() {
        let sub = louis_bottom();
        for m in [DensityMethod::BruteForce, DensityMethod::ParametricCut] {
            let (p, d) = max_density_set(&sub, m).unwrap();
            assert_eq!(p, vec![0, 1]);
            assert!((d - 2.0 / 3.0).abs() < 1e-15);
        }
        let layers = peel(&sub, DensityMethod::Auto).unwrap();
        assert_eq!(layers.len(), 1);
        let mut rates = layers[0].rates.clone();
        rates.sort_by_key(|r| (r.node, r.edge));
        // c gets all of e5, d all of e2.
        assert_eq!(rates.len(), 2);
        assert_eq!((rates[0].node, rates[0].edge), (2, 4));
        assert!((rates[0].rate - 2.0).abs() < 1e-12);
        assert_eq!((rates[1].node, rates[1].edge), (3, 1));
        assert!((rates[1].rate - 2.0).abs() < 1e-12);
    }

    #[test]
    fn singleton_class_is_forced() {
        let sub = DensitySubproblem {
            nodes: vec![7],
            weights: vec![2.0],
            in_edges: vec![sub_edge(0, 3.0, &[0])],
            out_edges: vec![sub_edge(1, 1.0, &[0])],
        };
        let (p, d) = max_density_set(&sub, DensityMethod::Auto).unwrap();
        assert_eq!(p, vec![0]);
        assert_eq!(d, 1.0);
        let layers = peel(&sub, DensityMethod::Auto).unwrap();
        assert_eq!(layers[0].rates.len(), 2);
    }

    #[test]
    fn splitting_class_has_decreasing_layers() {
        // u fed by a large edge, v drained.
        let sub = DensitySubproblem {
            nodes: vec![0, 1],
            weights: vec![1.0, 1.0],
            in_edges: vec![sub_edge(0, 5.0, &[0])],
            out_edges: vec![sub_edge(1, 1.0, &[1])],
        };
        let layers = peel(&sub, DensityMethod::Auto).unwrap();
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0].nodes, vec![0]);
        assert_eq!(layers[0].delta, 5.0);
        assert_eq!(layers[1].nodes, vec![1]);
        assert_eq!(layers[1].delta, -1.0);
    }

    #[test]
    fn residual_restricts_in_edges() {
        // e0 has I_e = {u, v}; u alone is favored by e1 so it peels first.
        let sub = DensitySubproblem {
            nodes: vec![0, 1],
            weights: vec![1.0, 1.0],
            in_edges: vec![sub_edge(0, 1.0, &[0, 1]), sub_edge(1, 4.0, &[0])],
            out_edges: vec![],
        };
        let layers = peel(&sub, DensityMethod::Auto).unwrap();
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0].delta, 4.0);
        assert_eq!(layers[1].delta, 1.0);
        assert_eq!(layers[1].in_edges, vec![0]);
    }

    #[test]
    fn brute_force_refuses_large_classes() {
        let n = BRUTE_FORCE_LIMIT + 1;
        let sub = DensitySubproblem {
            nodes: (0..n).collect(),
            weights: vec![1.0; n],
            in_edges: vec![],
            out_edges: vec![],
        };
        assert!(matches!(
            max_density_set(&sub, DensityMethod::BruteForce),
            Err(Error::TooLarge { .. })
        ));
        let (p, d) = max_density_set(&sub, DensityMethod::Auto).unwrap();
        assert_eq!(p.len(), n);
        assert_eq!(d, 0.0);
    }
}
