//! Augmenting-path maximum flow on real capacities.

use std::collections::VecDeque;

/// Residual capacities at or below this are treated as saturated.
pub const RESIDUAL_EPS: f64 = 1e-12;

/// Directed flow network with paired residual arcs (arc `i` and `i ^ 1`).
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<f64>,
    capacity: Vec<f64>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        Self {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            residual: Vec::new(),
            capacity: Vec::new(),
        }
    }

    pub fn add_node(&mut self) -> usize {
        self.head.push(Vec::new());
        self.head.len() - 1
    }

    /// Adds arc `u -> v` and returns its id. `cap` may be `f64::INFINITY`.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: f64) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.residual.push(cap);
        self.capacity.push(cap);
        self.head[u].push(id);
        self.to.push(u);
        self.residual.push(0.0);
        self.capacity.push(0.0);
        self.head[v].push(id + 1);
        id
    }

    /// Flow currently carried by a forward arc.
    pub fn flow(&self, arc: usize) -> f64 {
        self.residual[arc ^ 1]
    }

    /// Edmonds–Karp: shortest augmenting paths by BFS.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let n = self.head.len();
        let mut total = 0.0;
        let mut pred = vec![usize::MAX; n];
        loop {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            let mut queue = VecDeque::new();
            queue.push_back(s);
            pred[s] = usize::MAX - 1;
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.head[u] {
                    let v = self.to[a];
                    if pred[v] == usize::MAX && self.residual[a] > RESIDUAL_EPS {
                        pred[v] = a;
                        if v == t {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if pred[t] == usize::MAX {
                return total;
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = t;
            while v != s {
                let a = pred[v];
                bottleneck = bottleneck.min(self.residual[a]);
                v = self.to[a ^ 1];
            }
            if !bottleneck.is_finite() {
                // An all-infinite path means the cut is unbounded; callers
                // never build such networks.
                panic!("unbounded augmenting path in flow network");
            }
            let mut v = t;
            while v != s {
                let a = pred[v];
                self.residual[a] -= bottleneck;
                self.residual[a ^ 1] += bottleneck;
                v = self.to[a ^ 1];
            }
            total += bottleneck;
        }
    }

    /// Nodes reachable from `s` through arcs with positive residual capacity.
    /// After [`max_flow`](Self::max_flow) this is the source side of the
    /// minimal minimum cut.
    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &a in &self.head[u] {
                let v = self.to[a];
                if !seen[v] && self.residual[a] > RESIDUAL_EPS {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn arc_capacity(&self, arc: usize) -> f64 {
        self.capacity[arc]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        // CLRS figure 26.1, max flow 23.
        let mut g = FlowNetwork::new(6);
        for (u, v, c) in [
            (0, 1, 16.0),
            (0, 2, 13.0),
            (1, 3, 12.0),
            (2, 1, 4.0),
            (2, 4, 14.0),
            (3, 2, 9.0),
            (3, 5, 20.0),
            (4, 3, 7.0),
            (4, 5, 4.0),
        ] {
            g.add_arc(u, v, c);
        }
        assert!((g.max_flow(0, 5) - 23.0).abs() < 1e-12);
        let side = g.reachable_from(0);
        assert!(side[0] && !side[5]);
    }

    #[test]
    fn infinite_middle_arcs() {
        let mut g = FlowNetwork::new(4);
        let a = g.add_arc(0, 1, 0.5);
        g.add_arc(1, 2, f64::INFINITY);
        g.add_arc(2, 3, 0.25);
        assert!((g.max_flow(0, 3) - 0.25).abs() < 1e-15);
        assert!((g.flow(a) - 0.25).abs() < 1e-15);
        assert_eq!(g.arc_capacity(a), 0.5);
    }
}
