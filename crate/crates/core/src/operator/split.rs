//! Edge-weight splits `A_f` and the even-split operator.
//!
//! Any rates satisfying the diffusion rules can be realized by distributing
//! each `w_e` over pairs in `S_e × I_e`, inducing a symmetric matrix `A_f`
//! whose rows sum to the node weights, with `(I - W^-1 A_f) f = -r`. The
//! split is not unique; [`edge_weight_split`] returns one.
//!
//! [`apply_even_split_operator`] instead splits `w_e` uniformly over
//! `S_e × I_e` regardless of the rates. It is kept to show that this
//! simpler rule does not produce eigenvectors at the minimizers.

use nalgebra::DMatrix;

use super::{edge_extremes, EdgeExtremes, OperatorResult};
use crate::error::Result;
use crate::hypergraph::{to_weighted, Hypergraph, StateVector};

/// Spreads `w_e` uniformly over the unordered pairs of a fully tied edge.
fn add_tied_edge(a: &mut DMatrix<f64>, members: &[usize], weight: f64) {
    let k = members.len();
    if k < 2 {
        return;
    }
    let per = weight / (k * (k - 1) / 2) as f64;
    for i in 0..k {
        for j in (i + 1)..k {
            let (u, v) = (members[i], members[j]);
            a[(u, v)] += per;
            a[(v, u)] += per;
        }
    }
}

/// Sets the diagonal so that row `u` sums to `w_u`.
fn fill_diagonal(h: &Hypergraph, a: &mut DMatrix<f64>) {
    let n = h.n();
    for u in 0..n {
        let off: f64 = (0..n).filter(|&v| v != u).map(|v| a[(u, v)]).sum();
        a[(u, u)] = h.weight(u) - off;
    }
}

/// One symmetric matrix `A_f` consistent with the rates in `result`.
///
/// Each edge with `Δ_e > 0` is a small transportation problem: node
/// `u ∈ S_e` ships `-ρ_u(e) / Δ_e`, node `v ∈ I_e` receives `ρ_v(e) / Δ_e`,
/// totals `w_e`. It is solved with the north-west corner rule.
pub fn edge_weight_split(h: &Hypergraph, result: &OperatorResult) -> DMatrix<f64> {
    let n = h.n();
    let mut a = DMatrix::zeros(n, n);
    let mut per_edge: Vec<Vec<(usize, f64)>> = vec![Vec::new(); h.edges().len()];
    for layer in &result.layers {
        for entry in &layer.rates {
            per_edge[entry.edge].push((entry.node, entry.rate));
        }
    }
    for x in &result.extremes {
        let e = &h.edges()[x.edge];
        if x.rate <= 0.0 {
            add_tied_edge(&mut a, &x.top, e.weight);
            continue;
        }
        let mut supply: Vec<(usize, f64)> = x
            .top
            .iter()
            .map(|&u| {
                let s: f64 = per_edge[x.edge]
                    .iter()
                    .filter(|(v, r)| *v == u && *r < 0.0)
                    .map(|(_, r)| -r)
                    .sum();
                (u, s / x.spread)
            })
            .collect();
        let mut demand: Vec<(usize, f64)> = x
            .bottom
            .iter()
            .map(|&u| {
                let d: f64 = per_edge[x.edge]
                    .iter()
                    .filter(|(v, r)| *v == u && *r > 0.0)
                    .map(|(_, r)| *r)
                    .sum();
                (u, d / x.spread)
            })
            .collect();
        let (mut i, mut j) = (0, 0);
        while i < supply.len() && j < demand.len() {
            let q = supply[i].1.min(demand[j].1);
            let (u, v) = (supply[i].0, demand[j].0);
            a[(u, v)] += q;
            a[(v, u)] += q;
            supply[i].1 -= q;
            demand[j].1 -= q;
            if supply[i].1 <= demand[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
    }
    fill_diagonal(h, &mut a);
    a
}

/// `Ā` with `w_e` split uniformly over `S_e × I_e`.
pub fn even_split_matrix(h: &Hypergraph, extremes: &[EdgeExtremes]) -> DMatrix<f64> {
    let n = h.n();
    let mut a = DMatrix::zeros(n, n);
    for x in extremes {
        let e = &h.edges()[x.edge];
        if x.rate <= 0.0 {
            add_tied_edge(&mut a, &x.top, e.weight);
            continue;
        }
        let per = e.weight / (x.top.len() * x.bottom.len()) as f64;
        for &u in &x.top {
            for &v in &x.bottom {
                a[(u, v)] += per;
                a[(v, u)] += per;
            }
        }
    }
    fill_diagonal(h, &mut a);
    a
}

/// `(I - W^-1 Ā) f` packaged as an [`OperatorResult`] with `r` its negation.
/// No layers are produced.
pub fn apply_even_split_operator(
    h: &Hypergraph,
    v: &StateVector,
    tol: f64,
) -> Result<OperatorResult> {
    let f = to_weighted(h, v)?;
    let extremes = edge_extremes(h, &f, tol);
    let a = even_split_matrix(h, &extremes);
    let n = h.n();
    let mut r = vec![0.0; n];
    for u in 0..n {
        let af: f64 = (0..n).map(|v| a[(u, v)] * f[v]).sum();
        r[u] = af / h.weight(u) - f[u];
    }
    let rho = r.iter().zip(h.node_weights()).map(|(r, w)| r * w).collect();
    Ok(OperatorResult { r, rho, layers: Vec::new(), extremes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::bundled;
    use crate::operator::{apply_operator, DEFAULT_TOL};

    fn matrix_close(a: &DMatrix<f64>, want: &[[f64; 4]; 4]) -> bool {
        (0..4).all(|i| (0..4).all(|j| (a[(i, j)] - want[i][j]).abs() < 1e-12))
    }

    #[test]
    fn louis_even_split_matrix_and_image() {
        let h = bundled::louis4();
        let f2 = StateVector::weighted(vec![1.0, 1.0, -1.0, -1.0]);
        let res = apply_even_split_operator(&h, &f2, DEFAULT_TOL).unwrap();
        let a = even_split_matrix(&h, &res.extremes);
        let want = [
            [1.5, 1.0, 0.5, 0.0],
            [1.0, 0.5, 0.5, 1.0],
            [0.5, 0.5, 0.0, 2.0],
            [0.0, 1.0, 2.0, 0.0],
        ];
        assert!(matrix_close(&a, &want), "{a}");
        let lf = res.laplacian_weighted();
        let want = [1.0 / 3.0, 1.0, -2.0 / 3.0, -2.0 / 3.0];
        assert!(lf.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12), "{lf:?}");
    }

    #[test]
    fn louis_diffusion_split_sends_e5_to_ac() {
        let h = bundled::louis4();
        let f2 = StateVector::weighted(vec![1.0, 1.0, -1.0, -1.0]);
        let res = apply_operator(&h, &f2, DEFAULT_TOL).unwrap();
        let a = edge_weight_split(&h, &res);
        let want = [
            [1.0, 1.0, 1.0, 0.0],
            [1.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 2.0],
            [0.0, 1.0, 2.0, 0.0],
        ];
        assert!(matrix_close(&a, &want), "{a}");
    }

    #[test]
    fn two_graph_split_is_adjacency_and_even_split_agrees() {
        let h = Hypergraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![(vec![0, 1], 1.0), (vec![1, 2], 2.0), (vec![0, 2], 0.5)],
        )
        .unwrap();
        let f = StateVector::weighted(vec![0.3, -0.7, 1.1]);
        let res = apply_operator(&h, &f, DEFAULT_TOL).unwrap();
        let even = apply_even_split_operator(&h, &f, DEFAULT_TOL).unwrap();
        for (a, b) in res.r.iter().zip(&even.r) {
            assert!((a - b).abs() < 1e-12);
        }
        let a = edge_weight_split(&h, &res);
        assert!((a[(0, 1)] - 1.0).abs() < 1e-12);
        assert!((a[(1, 2)] - 2.0).abs() < 1e-12);
        assert!((a[(0, 2)] - 0.5).abs() < 1e-12);
    }
}
