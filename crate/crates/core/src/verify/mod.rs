//! Certification of procedural minimizers and independent oracles.
//!
//! Fixing a relative order `σ` of the node values fixes, for every edge,
//! which node is maximal and which minimal, so on the order cone
//! `K_σ = { f : f(σ(1)) <= ... <= f(σ(n)) }` the discrepancy numerator is a
//! quadratic form. Then
//!
//! ```text
//! P(σ) = min { Σ_e w_e (f(S_σ(e)) - f(I_σ(e)))² - γ Σ_u w_u f_u² :
//!              f ∈ K_σ, f ⊥_w priors, ||f||_w = 1 }
//! ```
//!
//! is nonnegative for every `σ` exactly when no vector orthogonal to the
//! priors has `D_w(f) < γ`.
//!
//! Two ways to compute `P(σ)` are offered:
//!
//! * [`VerifyMethod::ProjectedGradient`] (default): seeded multi-start
//!   projected gradient on the unit sphere, projecting onto
//!   `K_σ ∩ priors^⊥` by alternating weighted isotonic regression and the
//!   subspace projection (Dykstra). "Verified" means no violation was found.
//! * [`VerifyMethod::FaceEnumeration`]: every face of `K_σ` is a set of
//!   consecutive ties; on the relative interior of a face the problem is a
//!   generalized eigenproblem, and a minimizer lies in the relative
//!   interior of some face, so taking the best order-feasible eigenvector
//!   over all faces is exact up to floating point.
//!
//! Reported minima are always `D_w(f) - γ` re-evaluated on the returned
//! vector, so a negative value is a genuine counterexample.

pub mod brute;
pub mod oracle;

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use brute::brute_force_operator;
pub use oracle::{oracle_xi_zeta, oracle_xi_zeta_with, OracleResult};

use crate::error::{Error, Result};
use crate::hypergraph::{discrepancy_weighted, inner_w, Hypergraph};
use crate::linalg::{generalized_eigen, null_space};
use crate::stochastic::PolarGaussian;

pub const DEFAULT_TOL: f64 = 1e-7;
pub const PERMUTATION_LIMIT: usize = 8;
pub const DEFAULT_PG_RESTARTS: usize = 256;
const DYKSTRA_ROUNDS: usize = 50;
const PG_ITERATIONS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum VerifyMethod {
    #[default]
    ProjectedGradient,
    FaceEnumeration,
}

impl std::str::FromStr for VerifyMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pg" | "projected-gradient" => Ok(Self::ProjectedGradient),
            "faces" | "face-enumeration" => Ok(Self::FaceEnumeration),
            _ => Err(Error::InvalidArgument(format!("unknown verify method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Nonneg,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationCertificate {
    /// Nodes in ascending order of value.
    pub permutation: Vec<usize>,
    /// Best value of `D_w(f) - γ` found; `None` if the cone meets the
    /// orthogonality subspace only in zero.
    pub minimum: Option<f64>,
    /// The vector attaining `minimum` (weighted, unit `w`-norm).
    pub vector: Vec<f64>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaCertificate {
    pub gamma: f64,
    pub tol: f64,
    pub method: VerifyMethod,
    pub verified: bool,
    /// Smallest `D_w(f) - γ` over all permutations.
    pub minimum: f64,
    /// A vector with `D_w(f) < γ - tol`, when one was found.
    pub counterexample: Option<Vec<f64>>,
    pub certificates: Vec<PermutationCertificate>,
    /// Explains what "verified" means for the method used.
    pub note: &'static str,
}

const PG_NOTE: &str = "numerical certificate: no violation found by seeded projected-gradient multi-start on any order cone; not a proof";
const FACE_NOTE: &str = "exhaustive over faces of every order cone with generalized eigen-solves; exact up to floating point";

/// Shared problem data.
struct Problem<'a> {
    h: &'a Hypergraph,
    w: Vec<f64>,
    /// `w`-orthonormal priors.
    priors: Vec<Vec<f64>>,
    gamma: f64,
}

fn check_priors(h: &Hypergraph, priors: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    for p in priors {
        if p.len() != h.n() {
            return Err(Error::DimensionMismatch { expected: h.n(), got: p.len() });
        }
    }
    let norms: Vec<f64> = priors.iter().map(|p| inner_w(h, p, p).sqrt()).collect();
    for (i, n) in norms.iter().enumerate() {
        if *n <= 0.0 {
            return Err(Error::InvalidArgument(format!("prior {i} is the zero vector")));
        }
    }
    for i in 0..priors.len() {
        for j in (i + 1)..priors.len() {
            let c = inner_w(h, &priors[i], &priors[j]) / (norms[i] * norms[j]);
            if c.abs() > 1e-8 {
                return Err(Error::NonOrthogonalPriors { i, j, value: c.abs() });
            }
        }
    }
    Ok(priors.iter().zip(&norms).map(|(p, n)| p.iter().map(|v| v / n).collect()).collect())
}

impl Problem<'_> {
    fn norm_w(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.w).map(|(v, w)| w * v * v).sum::<f64>().sqrt()
    }

    fn project_subspace(&self, f: &mut [f64]) {
        for p in &self.priors {
            let c: f64 = f.iter().zip(p).zip(&self.w).map(|((a, b), w)| w * a * b).sum();
            for (a, b) in f.iter_mut().zip(p) {
                *a -= c * b;
            }
        }
    }

    /// `D_w(f) - γ` on the exact subspace projection of `f`, normalized.
    fn certify(&self, f: &[f64]) -> Option<(f64, Vec<f64>)> {
        let mut g = f.to_vec();
        self.project_subspace(&mut g);
        self.project_subspace(&mut g);
        let n = self.norm_w(&g);
        if !(n > 1e-12) {
            return None;
        }
        g.iter_mut().for_each(|v| *v /= n);
        discrepancy_weighted(self.h, &g).map(|d| (d - self.gamma, g))
    }
}

/// Weighted isotonic regression (nondecreasing along `order`), in place.
pub fn weighted_pava(values: &mut [f64], weights: &[f64], order: &[usize]) {
    // Blocks of (sum w*v, sum w, count).
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(order.len());
    for &u in order {
        blocks.push((weights[u] * values[u], weights[u], 1));
        while blocks.len() > 1 {
            let (s1, w1, c1) = blocks[blocks.len() - 1];
            let (s0, w0, c0) = blocks[blocks.len() - 2];
            if s0 / w0 > s1 / w1 {
                blocks.pop();
                *blocks.last_mut().unwrap() = (s0 + s1, w0 + w1, c0 + c1);
            } else {
                break;
            }
        }
    }
    let mut i = 0;
    for (s, w, c) in blocks {
        let mean = s / w;
        for &u in &order[i..i + c] {
            values[u] = mean;
        }
        i += c;
    }
}

struct Cone<'a> {
    prob: &'a Problem<'a>,
    order: Vec<usize>,
    /// `(top, bottom, w_e)` per edge under the order.
    pairs: Vec<(usize, usize, f64)>,
}

impl<'a> Cone<'a> {
    fn new(prob: &'a Problem<'a>, order: &[usize]) -> Self {
        let mut rank = vec![0; order.len()];
        for (i, &u) in order.iter().enumerate() {
            rank[u] = i;
        }
        let pairs = prob
            .h
            .edges()
            .iter()
            .filter_map(|e| {
                let top = *e.nodes.iter().max_by_key(|&&u| rank[u]).unwrap();
                let bot = *e.nodes.iter().min_by_key(|&&u| rank[u]).unwrap();
                (top != bot).then_some((top, bot, e.weight))
            })
            .collect();
        Self { prob, order: order.to_vec(), pairs }
    }

    fn objective(&self, f: &[f64]) -> f64 {
        let num: f64 = self.pairs.iter().map(|&(s, i, w)| w * (f[s] - f[i]).powi(2)).sum();
        let den: f64 = f.iter().zip(&self.prob.w).map(|(v, w)| w * v * v).sum();
        num - self.prob.gamma * den
    }

    /// Gradient in the `w` metric.
    fn gradient(&self, f: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; f.len()];
        for &(s, i, w) in &self.pairs {
            let d = 2.0 * w * (f[s] - f[i]);
            g[s] += d;
            g[i] -= d;
        }
        for ((gi, fi), w) in g.iter_mut().zip(f).zip(&self.prob.w) {
            *gi = *gi / w - 2.0 * self.prob.gamma * fi;
        }
        g
    }

    /// `w`-projection onto `K_σ ∩ priors^⊥` (Dykstra).
    fn project(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let mut y = f.to_vec();
        let mut p = vec![0.0; n];
        for _ in 0..DYKSTRA_ROUNDS {
            let mut z: Vec<f64> = y.iter().zip(&p).map(|(a, b)| a + b).collect();
            weighted_pava(&mut z, &self.prob.w, &self.order);
            for i in 0..n {
                p[i] += y[i] - z[i];
            }
            let mut next = z;
            self.prob.project_subspace(&mut next);
            let change: f64 = next.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
            y = next;
            if change < 1e-15 {
                break;
            }
        }
        y
    }

    fn unit(&self, f: Vec<f64>) -> Option<Vec<f64>> {
        let n = self.prob.norm_w(&f);
        (n > 1e-10).then(|| f.iter().map(|v| v / n).collect())
    }

    fn descend(&self, start: Vec<f64>) -> Option<(f64, Vec<f64>)> {
        let mut f = self.unit(self.project(&start))?;
        let mut val = self.objective(&f);
        let mut step = 0.25;
        for _ in 0..PG_ITERATIONS {
            let g = self.gradient(&f);
            let mut next = None;
            while step > 1e-12 {
                let trial: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a - step * b).collect();
                if let Some(y) = self.unit(self.project(&trial)) {
                    let v = self.objective(&y);
                    if v < val {
                        next = Some((v, y));
                        break;
                    }
                }
                step *= 0.5;
            }
            let Some((v, y)) = next else { break };
            let gain = val - v;
            f = y;
            val = v;
            step *= 1.3;
            if gain < 1e-14 {
                break;
            }
        }
        Some((val, f))
    }
}

fn certificate_from(
    prob: &Problem,
    order: &[usize],
    best: Option<(f64, Vec<f64>)>,
    tol: f64,
) -> PermutationCertificate {
    let certified = best.and_then(|(_, f)| prob.certify(&f));
    match certified {
        Some((value, vector)) => PermutationCertificate {
            permutation: order.to_vec(),
            minimum: Some(value),
            status: if value < -tol { Status::Violated } else { Status::Nonneg },
            vector,
        },
        None => PermutationCertificate {
            permutation: order.to_vec(),
            minimum: None,
            vector: Vec::new(),
            status: Status::Nonneg,
        },
    }
}

fn pg_certificate(prob: &Problem, order: &[usize], rank: u64, tol: f64) -> PermutationCertificate {
    let cone = Cone::new(prob, order);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7665_7269_6679 ^ rank);
    let mut gauss = PolarGaussian::default();
    let n = order.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..DEFAULT_PG_RESTARTS {
        let start: Vec<f64> = (0..n).map(|_| gauss.sample(&mut rng)).collect();
        if let Some((v, f)) = cone.descend(start) {
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, f));
            }
            if v < -10.0 * tol {
                break;
            }
        }
    }
    certificate_from(prob, order, best, tol)
}

/// Best order-feasible generalized eigenvector on one face, given as block
/// labels along `order` (`blocks[i]` is the block of `order[i]`).
fn face_minimum(prob: &Problem, order: &[usize], blocks: &[usize]) -> Option<(f64, Vec<f64>)> {
    let n = order.len();
    let nb = blocks[n - 1] + 1;
    let mut blk = vec![0; n];
    for (i, &u) in order.iter().enumerate() {
        blk[u] = blocks[i];
    }
    let mut a = DMatrix::zeros(nb, nb);
    for e in prob.h.edges() {
        let t = e.nodes.iter().map(|&u| blk[u]).max().unwrap();
        let b = e.nodes.iter().map(|&u| blk[u]).min().unwrap();
        if t != b {
            a[(t, t)] += e.weight;
            a[(b, b)] += e.weight;
            a[(t, b)] -= e.weight;
            a[(b, t)] -= e.weight;
        }
    }
    let mut d = DMatrix::zeros(nb, nb);
    for u in 0..n {
        d[(blk[u], blk[u])] += prob.w[u];
    }
    let rows: Vec<Vec<f64>> = prob
        .priors
        .iter()
        .map(|p| {
            let mut row = vec![0.0; nb];
            for u in 0..n {
                row[blk[u]] += prob.w[u] * p[u];
            }
            row
        })
        .collect();
    let ns = null_space(&rows, nb);
    if ns.ncols() == 0 {
        return None;
    }
    let (vals, z) = generalized_eigen(&(ns.transpose() * &a * &ns), &(ns.transpose() * &d * &ns))?;
    let g = &ns * z;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (c, &lambda) in vals.iter().enumerate() {
        let col: Vec<f64> = (0..nb).map(|b| g[(b, c)]).collect();
        let scale = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let gap = 1e-9 * scale;
        let up = col.windows(2).all(|p| p[1] - p[0] > gap);
        let down = col.windows(2).all(|p| p[0] - p[1] > gap);
        if !(up || down) {
            continue;
        }
        let sign = if up { 1.0 } else { -1.0 };
        let f: Vec<f64> = (0..n).map(|u| sign * col[blk[u]]).collect();
        let value = lambda - prob.gamma;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, f));
        }
    }
    best
}

/// Block labels for composition `mask` (bit `i` set: `order[i]` and
/// `order[i+1]` tie).
fn blocks_of(mask: u32, n: usize) -> Vec<usize> {
    let mut blocks = vec![0; n];
    for i in 1..n {
        blocks[i] = blocks[i - 1] + usize::from(mask & (1 << (i - 1)) == 0);
    }
    blocks
}

fn face_certificate(prob: &Problem, order: &[usize], tol: f64) -> PermutationCertificate {
    let n = order.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0..(1u32 << (n - 1)) {
        if let Some((v, f)) = face_minimum(prob, order, &blocks_of(mask, n)) {
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, f));
            }
        }
    }
    certificate_from(prob, order, best, tol)
}

/// Checks that no `f ≠ 0` with `f ⊥_w priors` has `D_w(f) < γ - tol`.
///
/// `priors` are weighted vectors `f_1, ..., f_{k-1}`; for `k = 2` pass the
/// all-ones vector.
pub fn verify_gamma(
    h: &Hypergraph,
    priors: &[Vec<f64>],
    gamma: f64,
    tol: f64,
    method: VerifyMethod,
) -> Result<GammaCertificate> {
    let n = h.n();
    if n > PERMUTATION_LIMIT {
        return Err(Error::TooLarge { what: "node count", size: n, limit: PERMUTATION_LIMIT });
    }
    let priors = check_priors(h, priors)?;
    let prob = Problem { h, w: h.node_weights().to_vec(), priors, gamma };
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let certificates: Vec<PermutationCertificate> = perms
        .par_iter()
        .enumerate()
        .map(|(rank, order)| match method {
            VerifyMethod::ProjectedGradient => pg_certificate(&prob, order, rank as u64, tol),
            VerifyMethod::FaceEnumeration => face_certificate(&prob, order, tol),
        })
        .collect();
    let worst = certificates
        .iter()
        .filter_map(|c| c.minimum.map(|m| (m, c)))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    let minimum = worst.map_or(f64::INFINITY, |(m, _)| m);
    let verified = certificates.iter().all(|c| c.status == Status::Nonneg);
    let counterexample = worst.filter(|(m, _)| *m < -tol).map(|(_, c)| c.vector.clone());
    Ok(GammaCertificate {
        gamma,
        tol,
        method,
        verified,
        minimum,
        counterexample,
        certificates,
        note: match method {
            VerifyMethod::ProjectedGradient => PG_NOTE,
            VerifyMethod::FaceEnumeration => FACE_NOTE,
        },
    })
}

/// Exact `min D_w(f)` over `f ≠ 0`, `f ⊥_w priors`, with a minimizer (unit
/// `w`-norm), by enumerating every ordered partition of the nodes.
pub fn exact_minimum(h: &Hypergraph, priors: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let n = h.n();
    if n > PERMUTATION_LIMIT {
        return Err(Error::TooLarge { what: "node count", size: n, limit: PERMUTATION_LIMIT });
    }
    let priors = check_priors(h, priors)?;
    let prob = Problem { h, w: h.node_weights().to_vec(), priors, gamma: 0.0 };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for order in (0..n).permutations(n) {
        for mask in 0..(1u32 << (n.max(1) - 1)) {
            // Each ordered partition once: members ascending within a block.
            if (0..n - 1).any(|i| mask & (1 << i) != 0 && order[i] > order[i + 1]) {
                continue;
            }
            if let Some((v, f)) = face_minimum(&prob, &order, &blocks_of(mask, n)) {
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, f));
                }
            }
        }
    }
    let (_, f) = best.ok_or_else(|| {
        Error::InvalidArgument("no nonzero vector is orthogonal to the priors".into())
    })?;
    let (value, f) = prob.certify(&f).expect("nonzero minimizer");
    Ok((value, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{bundled, discrepancy_ratio, StateVector};

    fn ones(n: usize) -> Vec<f64> {
        vec![1.0; n]
    }

    #[test]
    fn pava_pools_violators() {
        let mut v = vec![3.0, 1.0, 2.0];
        weighted_pava(&mut v, &[1.0, 1.0, 2.0], &[0, 1, 2]);
        assert_eq!(v, vec![2.0, 2.0, 2.0]);
        let mut v = vec![1.0, 3.0, 2.0];
        weighted_pava(&mut v, &[1.0, 1.0, 1.0], &[0, 1, 2]);
        assert_eq!(v, vec![1.0, 2.5, 2.5]);
        let mut v = vec![1.0, 3.0, 2.0];
        weighted_pava(&mut v, &[1.0, 1.0, 1.0], &[2, 1, 0]);
        assert_eq!(v, vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn louis_gamma2_faces() {
        let h = bundled::louis4();
        let ok = verify_gamma(&h, &[ones(4)], 2.0 / 3.0, DEFAULT_TOL, VerifyMethod::FaceEnumeration).unwrap();
        assert!(ok.verified, "{}", ok.minimum);
        let bad = verify_gamma(&h, &[ones(4)], 0.7, DEFAULT_TOL, VerifyMethod::FaceEnumeration).unwrap();
        assert!(!bad.verified);
        let f = bad.counterexample.unwrap();
        assert!(discrepancy_ratio(&h, &StateVector::weighted(f)).unwrap() < 0.7);
    }

    #[test]
    fn louis_gamma2_projected_gradient() {
        let h = bundled::louis4();
        let ok = verify_gamma(&h, &[ones(4)], 2.0 / 3.0, DEFAULT_TOL, VerifyMethod::ProjectedGradient).unwrap();
        assert!(ok.verified, "{}", ok.minimum);
        assert_eq!(ok.certificates.len(), 24);
        // Minimizers lie in span(1,1,-1,-1).
        let (_, best) = ok
            .certificates
            .iter()
            .filter_map(|c| c.minimum.map(|m| (m, c)))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap();
        let f = &best.vector;
        assert!((f[0] - f[1]).abs() < 1e-4 && (f[2] - f[3]).abs() < 1e-4 && (f[0] + f[2]).abs() < 1e-4);
        let bad = verify_gamma(&h, &[ones(4)], 0.7, DEFAULT_TOL, VerifyMethod::ProjectedGradient).unwrap();
        assert!(!bad.verified);
        let f = bad.counterexample.unwrap();
        assert!(discrepancy_ratio(&h, &StateVector::weighted(f)).unwrap() < 0.7);
    }

    #[test]
    fn twoedge_gamma3_with_known_priors() {
        let h = bundled::twoedge4();
        let s5 = 5f64.sqrt();
        let f2 = vec![s5 - 1.0, (3.0 - s5) / 2.0, -1.0, -1.0];
        let g3 = (11.0 + s5) / 8.0;
        for m in [VerifyMethod::FaceEnumeration, VerifyMethod::ProjectedGradient] {
            let ok = verify_gamma(&h, &[ones(4), f2.clone()], g3, DEFAULT_TOL, m).unwrap();
            assert!(ok.verified, "{m:?}: {}", ok.minimum);
            let bad = verify_gamma(&h, &[ones(4), f2.clone()], g3 + 0.01, DEFAULT_TOL, m).unwrap();
            assert!(!bad.verified, "{m:?}");
        }
    }

    #[test]
    fn exact_minimum_matches_known_values() {
        let h = bundled::nested5();
        let (g, _) = exact_minimum(&h, &[ones(5)]).unwrap();
        assert!((g - 5.0 / 6.0).abs() < 1e-12, "{g}");
        let (g3, _) = exact_minimum(&h, &[ones(5), vec![1.0, 1.0, 1.0, -4.0, -4.0]]).unwrap();
        assert!((g3 - 113.0 / 99.0).abs() < 1e-12, "{g3}");
        let (g3, _) = exact_minimum(&h, &[ones(5), vec![2.0, 2.0, -3.0, -3.0, -3.0]]).unwrap();
        assert!((g3 - 181.0 / 165.0).abs() < 1e-12, "{g3}");
    }

    #[test]
    fn prior_validation() {
        let h = bundled::louis4();
        let r = verify_gamma(&h, &[ones(4), vec![1.0, 0.0, 0.0, 0.0]], 0.5, DEFAULT_TOL, VerifyMethod::FaceEnumeration);
        assert!(matches!(r, Err(Error::NonOrthogonalPriors { .. })));
        let big = crate::hypergraph::Hypergraph::new(
            (0..9).map(|i| i.to_string()).collect(),
            vec![((0..9).collect(), 1.0)],
        )
        .unwrap();
        assert!(matches!(
            verify_gamma(&big, &[ones(9)], 0.5, DEFAULT_TOL, VerifyMethod::FaceEnumeration),
            Err(Error::TooLarge { .. })
        ));
    }
}
