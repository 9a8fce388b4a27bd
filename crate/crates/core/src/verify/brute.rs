//! Operator evaluation by exhaustive subset search.
//!
//! Shares no code with [`crate::operator`]: classes, edge extremes, the
//! density maximization and the layer flows (push–relabel here) are all
//! recomputed from the definitions.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::operator::{EdgeExtremes, OperatorResult, PeelLayer, RateEntry};

/// Largest class the subset search accepts.
pub const CLASS_LIMIT: usize = 18;

/// FIFO push–relabel max flow on real capacities.
struct PushRelabel {
    head: Vec<usize>,
    cap: Vec<f64>,
    orig: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl PushRelabel {
    fn new(n: usize) -> Self {
        Self { head: Vec::new(), cap: Vec::new(), orig: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add(&mut self, u: usize, v: usize, c: f64) -> usize {
        let id = self.head.len();
        self.head.push(v);
        self.cap.push(c);
        self.orig.push(c);
        self.adj[u].push(id);
        self.head.push(u);
        self.cap.push(0.0);
        self.orig.push(0.0);
        self.adj[v].push(id + 1);
        id
    }

    fn flow(&self, arc: usize) -> f64 {
        self.orig[arc] - self.cap[arc]
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let n = self.adj.len();
        let scale: f64 = self.orig.iter().sum::<f64>().max(1.0);
        let eps = 1e-15 * scale;
        let mut height = vec![0usize; n];
        let mut excess = vec![0.0; n];
        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        height[s] = n;
        for &a in &self.adj[s].clone() {
            let c = self.cap[a];
            if c > 0.0 {
                let v = self.head[a];
                self.cap[a] = 0.0;
                self.cap[a ^ 1] += c;
                excess[v] += c;
                excess[s] -= c;
                if v != t && !queued[v] {
                    queued[v] = true;
                    queue.push_back(v);
                }
            }
        }
        let mut guard = 0usize;
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            while excess[u] > eps {
                guard += 1;
                assert!(guard < 10_000_000, "push-relabel did not terminate");
                let mut pushed = false;
                for &a in &self.adj[u] {
                    let v = self.head[a];
                    if self.cap[a] > eps && height[u] == height[v] + 1 {
                        let d = excess[u].min(self.cap[a]);
                        self.cap[a] -= d;
                        self.cap[a ^ 1] += d;
                        excess[u] -= d;
                        excess[v] += d;
                        if v != s && v != t && !queued[v] {
                            queued[v] = true;
                            queue.push_back(v);
                        }
                        pushed = true;
                        if excess[u] <= eps {
                            break;
                        }
                    }
                }
                if !pushed {
                    let lowest = self.adj[u]
                        .iter()
                        .filter(|&&a| self.cap[a] > eps)
                        .map(|&a| height[self.head[a]])
                        .min();
                    match lowest {
                        Some(h) if h < 2 * n => height[u] = h + 1,
                        _ => break,
                    }
                }
            }
        }
        excess[t]
    }
}

struct ClassEdge {
    edge: usize,
    rate: f64,
    /// Bitmask over class-local indices.
    mask: u32,
}

/// Evaluates the rates by enumerating every subset of every class.
pub fn brute_force_operator(h: &Hypergraph, f: &[f64], tol: f64) -> Result<OperatorResult> {
    let n = h.n();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.len() });
    }

    // Classes: walk nodes from the largest value down, chaining gaps <= tol.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[b].total_cmp(&f[a]));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &u) in order.iter().enumerate() {
        if i == 0 || f[order[i - 1]] - f[u] > tol {
            classes.push(Vec::new());
        }
        classes.last_mut().unwrap().push(u);
    }
    classes.reverse();
    let mut class_of = vec![0; n];
    for (c, members) in classes.iter_mut().enumerate() {
        members.sort_unstable();
        for &u in members.iter() {
            class_of[u] = c;
        }
    }

    let extremes: Vec<EdgeExtremes> = h
        .edges()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            let hi = e.nodes.iter().map(|&u| f[u]).fold(f64::NEG_INFINITY, f64::max);
            let lo = e.nodes.iter().map(|&u| f[u]).fold(f64::INFINITY, f64::min);
            let top_class = e.nodes.iter().map(|&u| class_of[u]).max().unwrap();
            let bottom_class = e.nodes.iter().map(|&u| class_of[u]).min().unwrap();
            let top: Vec<usize> = e.nodes.iter().copied().filter(|&u| class_of[u] == top_class).collect();
            let bottom: Vec<usize> =
                e.nodes.iter().copied().filter(|&u| class_of[u] == bottom_class).collect();
            let spread = if top_class == bottom_class { 0.0 } else { hi - lo };
            EdgeExtremes { edge: id, top, bottom, spread, rate: e.weight * spread }
        })
        .collect();

    let mut r = vec![0.0; n];
    let mut layers = Vec::new();
    for members in &classes {
        if members.len() > CLASS_LIMIT {
            return Err(Error::TooLarge { what: "class size", size: members.len(), limit: CLASS_LIMIT });
        }
        let local = |u: usize| members.iter().position(|&v| v == u).unwrap();
        let mask_of = |nodes: &[usize]| nodes.iter().fold(0u32, |m, &u| m | (1 << local(u)));
        let mut ins: Vec<ClassEdge> = Vec::new();
        let mut outs: Vec<ClassEdge> = Vec::new();
        for x in extremes.iter().filter(|x| x.rate > 0.0) {
            if members.contains(&x.bottom[0]) {
                ins.push(ClassEdge { edge: x.edge, rate: x.rate, mask: mask_of(&x.bottom) });
            }
            if members.contains(&x.top[0]) {
                outs.push(ClassEdge { edge: x.edge, rate: x.rate, mask: mask_of(&x.top) });
            }
        }
        let weights: Vec<f64> = members.iter().map(|&u| h.weight(u)).collect();
        let mut remaining: u32 = if members.len() == 32 { u32::MAX } else { (1 << members.len()) - 1 };

        while remaining != 0 {
            let density = |x: u32| -> f64 {
                let gain: f64 = ins.iter().filter(|e| e.mask & x == e.mask).map(|e| e.rate).sum();
                let loss: f64 = outs.iter().filter(|e| e.mask & x != 0).map(|e| e.rate).sum();
                let w: f64 = (0..members.len()).filter(|&i| x & (1 << i) != 0).map(|i| weights[i]).sum();
                (gain - loss) / w
            };
            // Enumerate submasks of `remaining`.
            let mut subsets = Vec::new();
            let mut s = remaining;
            while s != 0 {
                subsets.push((s, density(s)));
                s = (s - 1) & remaining;
            }
            let best = subsets.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            let total: f64 = ins.iter().chain(&outs).map(|e| e.rate).sum();
            let wmin = (0..members.len())
                .filter(|&i| remaining & (1 << i) != 0)
                .map(|i| weights[i])
                .fold(f64::INFINITY, f64::min);
            let eps = 1e-9 * (1.0 + total / wmin);
            let p = subsets.iter().filter(|s| s.1 >= best - eps).fold(0u32, |m, s| m | s.0);
            let delta = density(p);

            let taken_in: Vec<&ClassEdge> = ins.iter().filter(|e| e.mask & p == e.mask).collect();
            let taken_out: Vec<&ClassEdge> = outs.iter().filter(|e| e.mask & p != 0).collect();
            let layer_nodes: Vec<usize> = (0..members.len()).filter(|&i| p & (1 << i) != 0).collect();
            let rates = layer_flow(members, &weights, &layer_nodes, delta, &taken_in, &taken_out, p)?;
            for &i in &layer_nodes {
                r[members[i]] = delta;
            }
            layers.push(PeelLayer {
                nodes: layer_nodes.iter().map(|&i| members[i]).collect(),
                delta,
                in_edges: taken_in.iter().map(|e| e.edge).collect(),
                out_edges: taken_out.iter().map(|e| e.edge).collect(),
                rates,
            });

            ins = ins
                .into_iter()
                .filter(|e| e.mask & p != e.mask)
                .map(|e| ClassEdge { mask: e.mask & !p, ..e })
                .collect();
            outs.retain(|e| e.mask & p == 0);
            remaining &= !p;
        }
    }
    let rho = r.iter().zip(h.node_weights()).map(|(r, w)| r * w).collect();
    Ok(OperatorResult { r, rho, layers, extremes })
}

fn layer_flow(
    members: &[usize],
    weights: &[f64],
    layer: &[usize],
    delta: f64,
    ins: &[&ClassEdge],
    outs: &[&ClassEdge],
    p: u32,
) -> Result<Vec<RateEntry>> {
    let k = layer.len();
    let (s, t) = (0, 1);
    let base = 2;
    let mut g = PushRelabel::new(base + k + ins.len() + outs.len());
    let pos = |i: usize| base + layer.iter().position(|&j| j == i).unwrap();
    let big: f64 = ins.iter().chain(outs).map(|e| e.rate).sum::<f64>()
        + weights.iter().sum::<f64>() * delta.abs()
        + 1.0;
    let mut required = 0.0;
    let mut arcs = Vec::new();
    for (j, e) in ins.iter().enumerate() {
        let x = base + k + j;
        g.add(s, x, e.rate);
        required += e.rate;
        for &i in layer {
            if e.mask & (1 << i) != 0 {
                arcs.push((g.add(x, pos(i), big), members[i], e.edge, 1.0));
            }
        }
    }
    for (j, e) in outs.iter().enumerate() {
        let y = base + k + ins.len() + j;
        g.add(y, t, e.rate);
        for &i in layer {
            if e.mask & p & (1 << i) != 0 {
                arcs.push((g.add(pos(i), y, big), members[i], e.edge, -1.0));
            }
        }
    }
    for &i in layer {
        let c = weights[i] * delta;
        if c > 0.0 {
            g.add(pos(i), t, c);
        } else if c < 0.0 {
            g.add(s, pos(i), -c);
            required -= c;
        }
    }
    let routed = g.max_flow(s, t);
    if routed < required - 1e-9 * required.max(1.0) {
        return Err(Error::FlowInfeasible { routed, required });
    }
    Ok(arcs
        .into_iter()
        .filter_map(|(arc, node, edge, sign)| {
            let fl = g.flow(arc);
            (fl > 0.0).then_some(RateEntry { node, edge, rate: sign * fl })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{bundled, random};
    use crate::operator::{apply_operator, DEFAULT_TOL};
    use crate::StateVector;
    use rand::SeedableRng;

    fn partition(layers: &[PeelLayer]) -> Vec<Vec<usize>> {
        let mut p: Vec<Vec<usize>> = layers.iter().map(|l| l.nodes.clone()).collect();
        p.sort();
        p
    }

    #[test]
    fn push_relabel_textbook_network() {
        let mut g = PushRelabel::new(6);
        for (u, v, c) in [(0, 1, 16.0), (0, 2, 13.0), (1, 3, 12.0), (2, 1, 4.0), (2, 4, 14.0), (3, 2, 9.0), (3, 5, 20.0), (4, 3, 7.0), (4, 5, 4.0)] {
            g.add(u, v, c);
        }
        assert!((g.max_flow(0, 5) - 23.0).abs() < 1e-12);
    }

    #[test]
    fn agrees_on_louis() {
        let h = bundled::louis4();
        let f = [1.0, 1.0, -1.0, -1.0];
        let a = brute_force_operator(&h, &f, DEFAULT_TOL).unwrap();
        let b = apply_operator(&h, &StateVector::weighted(f.to_vec()), DEFAULT_TOL).unwrap();
        for (x, y) in a.r.iter().zip(&b.r) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(partition(&a.layers), partition(&b.layers));
    }

    #[test]
    fn constant_vector_has_zero_rates() {
        let h = bundled::nested5();
        let a = brute_force_operator(&h, &[0.3; 5], DEFAULT_TOL).unwrap();
        assert!(a.r.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn agrees_on_random_ties() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let n = 2 + (rand::Rng::random_range(&mut rng, 0..6));
            let m = rand::Rng::random_range(&mut rng, 1..8);
            let h = random::hypergraph(&mut rng, n, m, 4);
            let f = random::vector_with_ties(&mut rng, n);
            let a = brute_force_operator(&h, &f, DEFAULT_TOL).unwrap();
            let b = apply_operator(&h, &StateVector::weighted(f.clone()), DEFAULT_TOL).unwrap();
            for (x, y) in a.r.iter().zip(&b.r) {
                assert!((x - y).abs() < 1e-10, "{f:?}: {:?} vs {:?}", a.r, b.r);
            }
            assert_eq!(partition(&a.layers), partition(&b.layers));
        }
    }
}
