//! Hypergraph data model, the three coordinate spaces, discrepancy ratios
//! and edge expansion.
//!
//! A vector over the nodes lives in one of three isomorphic spaces:
//!
//! ```text
//! measure     phi
//! weighted    f = W^-1 phi
//! normalized  x = W^{1/2} f
//! ```
//!
//! where `W` is the diagonal matrix of node weights. Diffusion is naturally
//! written in measure space, edge expansion in weighted space and the
//! Laplacian in normalized space.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A weighted hyperedge. Node indices refer to [`Hypergraph::nodes`].
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub nodes: Vec<usize>,
    pub weight: f64,
}

/// An immutable weighted hypergraph with derived node weights
/// `w_u = sum_{e ∋ u} w_e`.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    node_weights: Vec<f64>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    nodes: Vec<String>,
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    nodes: Vec<String>,
    edges: Vec<EdgeDoc>,
}

impl Hypergraph {
    /// Builds a hypergraph from node names and `(member indices, weight)` pairs.
    pub fn new(nodes: Vec<String>, edges: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, name) in nodes.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate node id {name:?}")));
            }
        }
        let n = nodes.len();
        let mut node_weights = vec![0.0; n];
        let mut out = Vec::with_capacity(edges.len());
        for (k, (members, weight)) in edges.into_iter().enumerate() {
            if !(weight > 0.0) || !weight.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "edge {k} has nonpositive weight {weight}"
                )));
            }
            if members.is_empty() {
                return Err(Error::InvalidInstance(format!("edge {k} is empty")));
            }
            let mut seen = vec![false; n];
            for &u in &members {
                if u >= n {
                    return Err(Error::InvalidInstance(format!(
                        "edge {k} references unknown node index {u}"
                    )));
                }
                if seen[u] {
                    return Err(Error::InvalidInstance(format!(
                        "edge {k} lists node {:?} twice",
                        nodes[u]
                    )));
                }
                seen[u] = true;
                node_weights[u] += weight;
            }
            out.push(Edge {
                nodes: members,
                weight,
            });
        }
        if let Some(u) = node_weights.iter().position(|&w| w <= 0.0) {
            return Err(Error::InvalidInstance(format!(
                "node {:?} has zero weight (covered by no edge)",
                nodes[u]
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInstance("no nodes".into()));
        }
        Ok(Self {
            nodes,
            edges: out,
            node_weights,
            index,
        })
    }

    /// Parses the JSON instance format
    /// `{"nodes": [...], "edges": [{"nodes": [...], "weight": w}]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)?;
        let index: HashMap<&str, usize> = doc
            .nodes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (k, e) in doc.edges.iter().enumerate() {
            let mut members = Vec::with_capacity(e.nodes.len());
            for name in &e.nodes {
                match index.get(name.as_str()) {
                    Some(&i) => members.push(i),
                    None => {
                        return Err(Error::InvalidInstance(format!(
                            "edge {k} references unknown node {name:?}"
                        )))
                    }
                }
            }
            edges.push((members, e.weight));
        }
        Self::new(doc.nodes, edges)
    }

    pub fn to_json(&self) -> String {
        let doc = InstanceDoc {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    nodes: e.nodes.iter().map(|&u| self.nodes[u].clone()).collect(),
                    weight: e.weight,
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("instance serializes")
    }

    /// Hex SHA-256 of the canonical JSON serialization.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node_weights
    }

    pub fn weight(&self, u: usize) -> f64 {
        self.node_weights[u]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Total weight `w(V)`.
    pub fn total_weight(&self) -> f64 {
        self.node_weights.iter().sum()
    }

    /// `w(S)` for a subset of node indices.
    pub fn subset_weight(&self, subset: &[usize]) -> f64 {
        subset.iter().map(|&u| self.node_weights[u]).sum()
    }

    /// Whether every edge has exactly two nodes.
    pub fn is_two_graph(&self) -> bool {
        self.edges.iter().all(|e| e.nodes.len() == 2)
    }

    /// Connected components, each as a sorted list of node indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let a = find(&mut parent, e.nodes[0]);
            for &v in &e.nodes[1..] {
                let b = find(&mut parent, v);
                if a != b {
                    parent[b] = a;
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for u in 0..n {
            let r = find(&mut parent, u);
            groups.entry(r).or_default().push(u);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }
}

/// Which coordinates a [`StateVector`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Measure,
    Weighted,
    Normalized,
}

impl std::str::FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "measure" => Ok(Space::Measure),
            "weighted" => Ok(Space::Weighted),
            "normalized" => Ok(Space::Normalized),
            other => Err(Error::InvalidArgument(format!(
                "unknown space {other:?} (expected measure, weighted or normalized)"
            ))),
        }
    }
}

/// A vector over the nodes, tagged with its space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub space: Space,
    pub values: Vec<f64>,
}

impl StateVector {
    pub fn new(space: Space, values: Vec<f64>) -> Self {
        Self { space, values }
    }

    pub fn measure(values: Vec<f64>) -> Self {
        Self::new(Space::Measure, values)
    }

    pub fn weighted(values: Vec<f64>) -> Self {
        Self::new(Space::Weighted, values)
    }

    pub fn normalized(values: Vec<f64>) -> Self {
        Self::new(Space::Normalized, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_dim(h: &Hypergraph, v: &StateVector) -> Result<()> {
    if v.len() != h.n() {
        return Err(Error::DimensionMismatch {
            expected: h.n(),
            got: v.len(),
        });
    }
    Ok(())
}

/// Converts `v` into `target` coordinates.
pub fn convert(h: &Hypergraph, v: &StateVector, target: Space) -> Result<StateVector> {
    check_dim(h, v)?;
    if v.space == target {
        return Ok(v.clone());
    }
    let w = h.node_weights();
    // Every conversion goes through weighted coordinates.
    let f: Vec<f64> = match v.space {
        Space::Weighted => v.values.clone(),
        Space::Measure => v.values.iter().zip(w).map(|(p, w)| p / w).collect(),
        Space::Normalized => v.values.iter().zip(w).map(|(x, w)| x / w.sqrt()).collect(),
    };
    let values = match target {
        Space::Weighted => f,
        Space::Measure => f.iter().zip(w).map(|(f, w)| f * w).collect(),
        Space::Normalized => f.iter().zip(w).map(|(f, w)| f * w.sqrt()).collect(),
    };
    Ok(StateVector::new(target, values))
}

/// Weighted coordinates of `v` without the tag.
pub fn to_weighted(h: &Hypergraph, v: &StateVector) -> Result<Vec<f64>> {
    Ok(convert(h, v, Space::Weighted)?.values)
}

pub fn normalized_from_weighted(h: &Hypergraph, f: &[f64]) -> Vec<f64> {
    f.iter().zip(h.node_weights()).map(|(f, w)| f * w.sqrt()).collect()
}

pub fn weighted_from_normalized(h: &Hypergraph, x: &[f64]) -> Vec<f64> {
    x.iter().zip(h.node_weights()).map(|(x, w)| x / w.sqrt()).collect()
}

/// `<f, g>_w = sum_u w_u f_u g_u`.
pub fn inner_w(h: &Hypergraph, f: &[f64], g: &[f64]) -> f64 {
    f.iter()
        .zip(g)
        .zip(h.node_weights())
        .map(|((a, b), w)| w * a * b)
        .sum()
}

pub fn norm_sq_w(h: &Hypergraph, f: &[f64]) -> f64 {
    inner_w(h, f, f)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `max_{u,v in e} (f_u - f_v)` for one edge.
#[inline]
pub fn edge_spread(e: &Edge, f: &[f64]) -> f64 {
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for &u in &e.nodes {
        hi = hi.max(f[u]);
        lo = lo.min(f[u]);
    }
    hi - lo
}

/// Numerator of the discrepancy ratio, `sum_e w_e max_{u,v in e} (f_u - f_v)^2`,
/// evaluated on weighted coordinates.
pub fn discrepancy_numerator(h: &Hypergraph, f: &[f64]) -> f64 {
    h.edges
        .iter()
        .map(|e| {
            let d = edge_spread(e, f);
            e.weight * d * d
        })
        .sum()
}

/// `D_w(f)` on raw weighted coordinates. Returns `None` for the zero vector.
pub fn discrepancy_weighted(h: &Hypergraph, f: &[f64]) -> Option<f64> {
    let den = norm_sq_w(h, f);
    if den <= 0.0 {
        return None;
    }
    Some(discrepancy_numerator(h, f) / den)
}

/// `D̂(x)` on raw normalized coordinates. Returns `None` for the zero vector.
pub fn discrepancy_normalized(h: &Hypergraph, x: &[f64]) -> Option<f64> {
    let den = dot(x, x);
    if den <= 0.0 {
        return None;
    }
    let w = h.node_weights();
    let num: f64 = h
        .edges
        .iter()
        .map(|e| {
            let mut hi = f64::NEG_INFINITY;
            let mut lo = f64::INFINITY;
            for &u in &e.nodes {
                let v = x[u] / w[u].sqrt();
                hi = hi.max(v);
                lo = lo.min(v);
            }
            e.weight * (hi - lo) * (hi - lo)
        })
        .sum();
    Some(num / den)
}

/// The discrepancy ratio `D_w(f) = D̂(x)` of a vector in any space.
pub fn discrepancy_ratio(h: &Hypergraph, v: &StateVector) -> Result<f64> {
    let f = to_weighted(h, v)?;
    discrepancy_weighted(h, &f).ok_or(Error::ZeroVector)
}

/// Edge expansion `w(∂S) / w(S)` of a proper nonempty subset.
pub fn edge_expansion(h: &Hypergraph, subset: &[usize]) -> Result<f64> {
    let n = h.n();
    let mut inside = vec![false; n];
    for &u in subset {
        if u >= n {
            return Err(Error::InvalidSubset(format!("node index {u} out of range")));
        }
        inside[u] = true;
    }
    let count = inside.iter().filter(|&&b| b).count();
    if count == 0 {
        return Err(Error::InvalidSubset("subset is empty".into()));
    }
    if count == n {
        return Err(Error::InvalidSubset("subset is the whole node set".into()));
    }
    let cut: f64 = h
        .edges
        .iter()
        .filter(|e| {
            let k = e.nodes.iter().filter(|&&u| inside[u]).count();
            k > 0 && k < e.nodes.len()
        })
        .map(|e| e.weight)
        .sum();
    let ws: f64 = (0..n).filter(|&u| inside[u]).map(|u| h.weight(u)).sum();
    Ok(cut / ws)
}

/// Equilibrium `phi* = (<1, phi> / w(V)) W 1` of a measure vector.
pub fn equilibrium(h: &Hypergraph, phi: &StateVector) -> Result<StateVector> {
    let m = convert(h, phi, Space::Measure)?;
    let total: f64 = m.values.iter().sum();
    let scale = total / h.total_weight();
    Ok(StateVector::measure(
        h.node_weights().iter().map(|w| scale * w).collect(),
    ))
}

/// `x_1 = W^{1/2} 1`, the trivial eigenvector in normalized space.
pub fn trivial_normalized(h: &Hypergraph) -> Vec<f64> {
    h.node_weights().iter().map(|w| w.sqrt()).collect()
}

/// Orthogonal projection `Π x` onto the complement of `W^{1/2} 1`.
pub fn project_out_trivial(h: &Hypergraph, x: &[f64]) -> Vec<f64> {
    let x1 = trivial_normalized(h);
    let coef = dot(x, &x1) / h.total_weight();
    x.iter().zip(&x1).map(|(a, b)| a - coef * b).collect()
}

/// The three instances from the worked examples, addressable by name.
pub mod bundled {
    use super::Hypergraph;

    pub const NAMES: [&str; 3] = ["louis4", "nested5", "twoedge4"];

    fn build(nodes: &[&str], edges: &[(&[usize], f64)]) -> Hypergraph {
        Hypergraph::new(
            nodes.iter().map(|s| s.to_string()).collect(),
            edges.iter().map(|(m, w)| (m.to_vec(), *w)).collect(),
        )
        .expect("bundled instance is valid")
    }

    /// `e1={a,b}, e2={b,d}, e3={c,d} (w=2), e4={a}, e5={a,b,c}`; every node
    /// has weight 3.
    pub fn louis4() -> Hypergraph {
        build(
            &["a", "b", "c", "d"],
            &[
                (&[0, 1], 1.0),
                (&[1, 3], 1.0),
                (&[2, 3], 2.0),
                (&[0], 1.0),
                (&[0, 1, 2], 1.0),
            ],
        )
    }

    /// Five nested unit-weight edges `{a} ⊂ {a,b} ⊂ ... ⊂ {a,b,c,d,e}`.
    pub fn nested5() -> Hypergraph {
        build(
            &["a", "b", "c", "d", "e"],
            &[
                (&[0], 1.0),
                (&[0, 1], 1.0),
                (&[0, 1, 2], 1.0),
                (&[0, 1, 2, 3], 1.0),
                (&[0, 1, 2, 3, 4], 1.0),
            ],
        )
    }

    /// `e1={a,b}, e2={b,c,d}`, unit weights.
    pub fn twoedge4() -> Hypergraph {
        build(&["a", "b", "c", "d"], &[(&[0, 1], 1.0), (&[1, 2, 3], 1.0)])
    }

    pub fn by_name(name: &str) -> Option<Hypergraph> {
        match name {
            "louis4" => Some(louis4()),
            "nested5" => Some(nested5()),
            "twoedge4" => Some(twoedge4()),
            _ => None,
        }
    }
}

/// Loads a bundled instance by name, or otherwise a JSON file from disk.
pub fn load_instance(name_or_path: &str) -> Result<Hypergraph> {
    if let Some(h) = bundled::by_name(name_or_path) {
        return Ok(h);
    }
    let text = std::fs::read_to_string(name_or_path).map_err(|source| Error::Io {
        path: name_or_path.to_string(),
        source,
    })?;
    Hypergraph::from_json(&text)
}

/// Seeded random instances for property checks.
pub mod random {
    use rand::Rng;

    use super::Hypergraph;

    /// A random hypergraph on `n` nodes with `m` edges of size in
    /// `1..=max_size`; every node is covered, weights lie in `[0.5, 2.5)`.
    pub fn hypergraph<R: Rng>(rng: &mut R, n: usize, m: usize, max_size: usize) -> Hypergraph {
        let max_size = max_size.clamp(1, n);
        let mut edges: Vec<(Vec<usize>, f64)> = Vec::with_capacity(m + n);
        let mut covered = vec![false; n];
        for _ in 0..m {
            let size = rng.random_range(2.min(max_size)..=max_size);
            let mut members: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = rng.random_range(i..n);
                members.swap(i, j);
            }
            members.truncate(size);
            members.sort_unstable();
            for &u in &members {
                covered[u] = true;
            }
            edges.push((members, 0.5 + 2.0 * rng.random::<f64>()));
        }
        // Link any uncovered node to a random partner so nothing is isolated.
        for u in 0..n {
            if !covered[u] {
                let v = (u + 1 + rng.random_range(0..n.max(2) - 1)) % n;
                let mut members = vec![u, v];
                members.sort_unstable();
                members.dedup();
                edges.push((members, 0.5 + 2.0 * rng.random::<f64>()));
            }
        }
        Hypergraph::new((0..n).map(|i| format!("v{i}")).collect(), edges)
            .expect("random instance is valid")
    }

    /// A random weighted vector; with probability one half some coordinates
    /// are copied from others to engineer ties.
    pub fn vector_with_ties<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
        let mut f: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        if n > 1 && rng.random_bool(0.5) {
            let copies = rng.random_range(1..n);
            for _ in 0..copies {
                let src = rng.random_range(0..n);
                let dst = rng.random_range(0..n);
                f[dst] = f[src];
            }
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bundled_node_weights() {
        assert_eq!(bundled::louis4().node_weights(), &[3.0, 3.0, 3.0, 3.0]);
        assert_eq!(bundled::twoedge4().node_weights(), &[1.0, 2.0, 1.0, 1.0]);
        assert_eq!(bundled::nested5().node_weights(), &[5.0, 4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn single_self_loop() {
        let h = Hypergraph::from_json(r#"{"nodes":["a"],"edges":[{"nodes":["a"],"weight":5}]}"#)
            .unwrap();
        assert_eq!(h.node_weights(), &[5.0]);
    }

    #[test]
    fn load_errors() {
        let dup = r#"{"nodes":["a","a"],"edges":[{"nodes":["a"],"weight":1}]}"#;
        assert!(matches!(Hypergraph::from_json(dup), Err(Error::InvalidInstance(_))));
        let unknown = r#"{"nodes":["a"],"edges":[{"nodes":["b"],"weight":1}]}"#;
        assert!(matches!(Hypergraph::from_json(unknown), Err(Error::InvalidInstance(_))));
        let nonpos = r#"{"nodes":["a"],"edges":[{"nodes":["a"],"weight":0}]}"#;
        assert!(matches!(Hypergraph::from_json(nonpos), Err(Error::InvalidInstance(_))));
        let isolated = r#"{"nodes":["a","b"],"edges":[{"nodes":["a"],"weight":1}]}"#;
        assert!(matches!(Hypergraph::from_json(isolated), Err(Error::InvalidInstance(_))));
        assert!(matches!(Hypergraph::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn json_round_trip_keeps_order() {
        let h = bundled::louis4();
        let back = Hypergraph::from_json(&h.to_json()).unwrap();
        assert_eq!(back.nodes(), h.nodes());
        assert_eq!(back.edges(), h.edges());
        assert_eq!(back.content_hash(), h.content_hash());
    }

    #[test]
    fn conversions() {
        let h = bundled::louis4();
        let phi = StateVector::measure(h.node_weights().to_vec());
        assert_eq!(convert(&h, &phi, Space::Weighted).unwrap().values, vec![1.0; 4]);
        let f = StateVector::weighted(vec![1.0, 1.0, -1.0, -1.0]);
        let x = convert(&h, &f, Space::Normalized).unwrap();
        let s = 3f64.sqrt();
        for (a, b) in x.values.iter().zip([s, s, -s, -s]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(convert(&h, &f, Space::Weighted).unwrap(), f);
        let bad = StateVector::weighted(vec![1.0]);
        assert!(matches!(
            convert(&h, &bad, Space::Measure),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn discrepancy_examples() {
        let h = bundled::louis4();
        let d = discrepancy_ratio(&h, &StateVector::weighted(vec![1.0, 1.0, -1.0, -1.0])).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            discrepancy_ratio(&h, &StateVector::weighted(vec![1.0; 4])).unwrap(),
            0.0
        );
        assert!(matches!(
            discrepancy_ratio(&h, &StateVector::weighted(vec![0.0; 4])),
            Err(Error::ZeroVector)
        ));
        let n5 = bundled::nested5();
        let d = discrepancy_ratio(&n5, &StateVector::weighted(vec![1.0, 1.0, 1.0, -4.0, -4.0]))
            .unwrap();
        assert!((d - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn expansion_examples() {
        let h = bundled::twoedge4();
        assert_eq!(edge_expansion(&h, &[0]).unwrap(), 1.0);
        let two = Hypergraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![(vec![0, 1], 1.0), (vec![2], 1.0)],
        )
        .unwrap();
        assert_eq!(edge_expansion(&two, &[2]).unwrap(), 0.0);
        assert!(edge_expansion(&h, &[]).is_err());
        assert!(edge_expansion(&h, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn expansion_equals_indicator_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(2..8);
            let m = rng.random_range(1..8);
            let h = random::hypergraph(&mut rng, n, m, 4);
            let mut s: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            if s.is_empty() {
                s.push(0);
            }
            if s.len() == n {
                s.pop();
            }
            let mut ind = vec![0.0; n];
            for &u in &s {
                ind[u] = 1.0;
            }
            let a = edge_expansion(&h, &s).unwrap();
            let b = discrepancy_ratio(&h, &StateVector::weighted(ind)).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn equilibrium_examples() {
        let h = bundled::twoedge4();
        let phi = StateVector::measure(vec![1.0, 0.0, 0.0, 0.0]);
        let eq = equilibrium(&h, &phi).unwrap();
        let want = [0.2, 0.4, 0.2, 0.2];
        for (a, b) in eq.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let l4 = bundled::louis4();
        let phi = StateVector::measure(l4.node_weights().to_vec());
        assert_eq!(equilibrium(&l4, &phi).unwrap(), phi);
        let zero_total = StateVector::measure(vec![1.0, -1.0, 2.0, -2.0]);
        assert!(equilibrium(&l4, &zero_total).unwrap().values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn components_of_disconnected() {
        let h = Hypergraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![(vec![0, 1], 1.0), (vec![2], 1.0)],
        )
        .unwrap();
        assert_eq!(h.components(), vec![vec![0, 1], vec![2]]);
    }
}
