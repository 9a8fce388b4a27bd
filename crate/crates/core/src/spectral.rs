//! Procedural minimizers of the normalized discrepancy ratio.
//!
//! `γ_k` is the minimum of `D̂` over unit vectors orthogonal to the
//! previously found `x_1, ..., x_{k-1}`. Each restart runs the diffusion
//! itself as a descent method (`x ← normalize(Π(x - h L̂x))`, never
//! increasing `D̂`) and then polishes: nodes whose values nearly tie are
//! merged, `D̂` becomes a ratio of quadratic forms on the merged blocks,
//! and the block problem is solved exactly as a generalized eigenproblem.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{
    discrepancy_normalized, dot, norm2, trivial_normalized, weighted_from_normalized, Hypergraph,
};
use crate::linalg::{generalized_eigen, null_space};
use crate::operator::{rate_vector, DEFAULT_TOL};
use crate::stochastic::PolarGaussian;

pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_SEED: u64 = 7;
/// Two restarts within this gap count as agreeing.
pub const AGREEMENT_TOL: f64 = 1e-6;
/// Restarts within this gap of the best are tied; the lowest index wins.
pub const SELECTION_TOL: f64 = 1e-10;

/// Values this close count as equal when choosing between candidates.
const VALUE_SLACK: f64 = 1e-14;
const POLISH_TIES: [f64; 8] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 0.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Descent iterations per restart.
    pub max_iter: usize,
    /// Tie tolerance of the operator.
    pub tol: f64,
    /// Certify each `γ_k` with the exact face enumeration (n <= 5 only).
    pub verify: bool,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            seed: DEFAULT_SEED,
            max_iter: 2000,
            tol: DEFAULT_TOL,
            verify: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaEntry {
    pub k: usize,
    pub gamma: f64,
    /// Unit minimizer in normalized coordinates.
    pub x: Vec<f64>,
    /// `||L̂x - γx||_2`.
    pub residual: f64,
    /// Number of restarts whose value is within [`AGREEMENT_TOL`] of `gamma`.
    pub agreeing_restarts: usize,
    /// At least two restarts agree.
    pub converged: bool,
    /// Total descent iterations over all restarts.
    pub iterations: usize,
    /// Outcome of the exact certification, when requested and possible.
    pub verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub gammas: Vec<GammaEntry>,
    pub restarts: usize,
    pub seed: u64,
}

impl SpectralResult {
    pub fn gamma(&self, k: usize) -> Option<f64> {
        self.gammas.iter().find(|g| g.k == k).map(|g| g.gamma)
    }

    pub fn vector(&self, k: usize) -> Option<&[f64]> {
        self.gammas.iter().find(|g| g.k == k).map(|g| g.x.as_slice())
    }

    pub fn converged(&self) -> bool {
        self.gammas.iter().all(|g| g.converged)
    }
}

fn dhat(h: &Hypergraph, x: &[f64]) -> f64 {
    discrepancy_normalized(h, x).unwrap_or(f64::INFINITY)
}

/// `L̂x = -W^{1/2} r` with `r` the rate vector at `f = W^{-1/2} x`.
pub fn apply_normalized(h: &Hypergraph, x: &[f64], tol: f64) -> Vec<f64> {
    let f = weighted_from_normalized(h, x);
    rate_vector(h, &f, tol)
        .iter()
        .zip(h.node_weights())
        .map(|(r, w)| -r * w.sqrt())
        .collect()
}

/// `||L̂x - γx||_2 / ||x||_2`.
pub fn eigen_residual(h: &Hypergraph, x: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), got: x.len() });
    }
    let nx = norm2(x);
    if nx <= 0.0 {
        return Err(Error::ZeroVector);
    }
    let lx = apply_normalized(h, x, DEFAULT_TOL);
    let res: f64 = lx
        .iter()
        .zip(x)
        .map(|(l, x)| (l - gamma * x).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(res / nx)
}

/// Removes the components along an orthonormal `basis`.
pub fn project_out(x: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(x, b);
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= c * bi;
            }
        }
    }
}

fn normalize(x: &mut [f64]) -> bool {
    let n = norm2(x);
    if !(n > 1e-300) || !n.is_finite() {
        return false;
    }
    for v in x.iter_mut() {
        *v /= n;
    }
    true
}

/// Projects out `basis` and normalizes; fails when almost nothing is left,
/// since the remainder would be rounding noise.
fn project_unit(x: &mut [f64], basis: &[Vec<f64>]) -> bool {
    let before = norm2(x);
    project_out(x, basis);
    norm2(x) >= 1e-6 * before && normalize(x)
}

/// Unit `W^{1/2} 1`.
pub fn first_vector(h: &Hypergraph) -> Vec<f64> {
    let mut x = trivial_normalized(h);
    normalize(&mut x);
    x
}

#[derive(Debug, Clone)]
struct Candidate {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
}

/// Diffusion descent with backtracking; `D̂` never increases.
fn descend(h: &Hypergraph, mut x: Vec<f64>, basis: &[Vec<f64>], max_iter: usize, tol: f64) -> Candidate {
    let mut value = dhat(h, &x);
    let mut step = 0.5;
    let mut stalled = 0;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let lx = apply_normalized(h, &x, tol);
        let mut accepted = None;
        while step > 1e-12 {
            let mut y: Vec<f64> = x.iter().zip(&lx).map(|(a, l)| a - step * l).collect();
            if project_unit(&mut y, basis) {
                let v = dhat(h, &y);
                if v <= value {
                    accepted = Some((y, v));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((y, v)) = accepted else { break };
        let gain = value - v;
        x = y;
        value = v;
        step = (step * 1.5).min(4.0);
        if gain <= 1e-14 * value.max(1e-12) {
            stalled += 1;
            if stalled >= 25 {
                break;
            }
        } else {
            stalled = 0;
        }
    }
    Candidate { x, value, iterations }
}

/// Exact minimization of `D̂` over vectors that are constant on the blocks
/// of nearly tied nodes of `x`, keep the block order of `x` for edge
/// extremes, and are orthogonal to `basis`. Returns the best candidate by
/// true `D̂`.
fn polish_with_ties(h: &Hypergraph, x: &[f64], basis: &[Vec<f64>], tie: f64) -> Option<(f64, Vec<f64>)> {
    let n = h.n();
    let f = weighted_from_normalized(h, x);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
    let mut blk = vec![0usize; n];
    let mut blocks = 0usize;
    for (i, &u) in order.iter().enumerate() {
        if i > 0 && f[u] - f[order[i - 1]] > tie {
            blocks += 1;
        }
        blk[u] = blocks;
    }
    let nb = blocks + 1;
    let mut a = DMatrix::zeros(nb, nb);
    for e in h.edges() {
        let hi = e.nodes.iter().copied().max_by(|&p, &q| f[p].total_cmp(&f[q])).unwrap();
        let lo = e.nodes.iter().copied().min_by(|&p, &q| f[p].total_cmp(&f[q])).unwrap();
        let (t, b) = (blk[hi], blk[lo]);
        if t != b {
            a[(t, t)] += e.weight;
            a[(b, b)] += e.weight;
            a[(t, b)] -= e.weight;
            a[(b, t)] -= e.weight;
        }
    }
    let mut d = DMatrix::zeros(nb, nb);
    for u in 0..n {
        d[(blk[u], blk[u])] += h.weight(u);
    }
    let rows: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| {
            let mut row = vec![0.0; nb];
            for u in 0..n {
                row[blk[u]] += h.weight(u).sqrt() * b[u];
            }
            row
        })
        .collect();
    let ns = null_space(&rows, nb);
    if ns.ncols() == 0 {
        return None;
    }
    let ma = ns.transpose() * &a * &ns;
    let md = ns.transpose() * &d * &ns;
    let (_, z) = generalized_eigen(&ma, &md)?;
    let g = &ns * z;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for c in 0..g.ncols() {
        let mut y: Vec<f64> = (0..n).map(|u| g[(blk[u], c)] * h.weight(u).sqrt()).collect();
        if !project_unit(&mut y, basis) {
            continue;
        }
        let v = dhat(h, &y);
        if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, y));
        }
    }
    best
}

fn polish(h: &Hypergraph, x: &[f64], basis: &[Vec<f64>]) -> Option<(f64, Vec<f64>)> {
    let f = weighted_from_normalized(h, x);
    let spread = f.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - f.iter().copied().fold(f64::INFINITY, f64::min);
    let mut best: Option<(f64, Vec<f64>)> = None;
    // Coarser merges come first and win unless a finer one is clearly better.
    for &t in &POLISH_TIES {
        if let Some((v, y)) = polish_with_ties(h, x, basis, t * spread) {
            if best.as_ref().is_none_or(|(bv, _)| v < *bv - VALUE_SLACK * (1.0 + bv.abs())) {
                best = Some((v, y));
            }
        }
    }
    best
}

fn restart_rng(seed: u64, k: usize, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((k as u64) << 40) ^ index as u64)
}

/// Random unit vector orthogonal to `basis`.
pub fn random_start(n: usize, basis: &[Vec<f64>], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut gauss = PolarGaussian::default();
    loop {
        let mut x: Vec<f64> = (0..n).map(|_| gauss.sample(rng)).collect();
        if project_unit(&mut x, basis) {
            return x;
        }
    }
}

fn run_restart(h: &Hypergraph, x0: Vec<f64>, basis: &[Vec<f64>], opts: &SpectralOptions) -> Candidate {
    let mut cand = descend(h, x0, basis, opts.max_iter, opts.tol);
    for _ in 0..4 {
        match polish(h, &cand.x, basis) {
            Some((v, y)) if v <= cand.value + VALUE_SLACK * (1.0 + cand.value.abs()) => {
                let iterations = cand.iterations;
                let again = descend(h, y.clone(), basis, opts.max_iter / 4, opts.tol);
                let improved = again.value < v - 1e-15;
                cand = if improved {
                    Candidate { iterations: iterations + again.iterations, ..again }
                } else {
                    Candidate { x: y, value: v, iterations: iterations + again.iterations }
                };
                if !improved {
                    break;
                }
            }
            _ => break,
        }
    }
    cand
}

/// Minimizes `D̂` over unit vectors orthogonal to `basis` (orthonormal,
/// normalized coordinates) using `opts.restarts` seeded restarts.
pub fn minimize_orthogonal(
    h: &Hypergraph,
    basis: &[Vec<f64>],
    k: usize,
    opts: &SpectralOptions,
) -> Result<GammaEntry> {
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be >= 1".into()));
    }
    if basis.len() >= h.n() {
        return Err(Error::InvalidArgument(format!(
            "no vector is orthogonal to {} vectors in dimension {}",
            basis.len(),
            h.n()
        )));
    }
    let n = h.n();
    let cands: Vec<Candidate> = (0..opts.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(opts.seed, k, i);
            let x0 = random_start(n, basis, &mut rng);
            run_restart(h, x0, basis, opts)
        })
        .collect();
    let best_value = cands.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    let chosen = cands
        .iter()
        .position(|c| c.value <= best_value + SELECTION_TOL)
        .expect("at least one restart");
    let agreeing = cands.iter().filter(|c| c.value <= best_value + AGREEMENT_TOL).count();
    let x = cands[chosen].x.clone();
    let gamma = dhat(h, &x);
    Ok(GammaEntry {
        k,
        gamma,
        residual: eigen_residual(h, &x, gamma)?,
        x,
        agreeing_restarts: agreeing,
        converged: agreeing >= 2,
        iterations: cands.iter().map(|c| c.iterations).sum(),
        verified: None,
    })
}

fn first_entry(h: &Hypergraph) -> GammaEntry {
    let x = first_vector(h);
    GammaEntry {
        k: 1,
        gamma: 0.0,
        residual: eigen_residual(h, &x, 0.0).unwrap_or(0.0),
        x,
        agreeing_restarts: 0,
        converged: true,
        iterations: 0,
        verified: Some(true),
    }
}

/// `γ_1, ..., γ_{k_max}` with their minimizers.
pub fn procedural_minimizers(h: &Hypergraph, k_max: usize, opts: &SpectralOptions) -> Result<SpectralResult> {
    if k_max == 0 || k_max > h.n() {
        return Err(Error::InvalidArgument(format!("k must be in 1..={}, got {k_max}", h.n())));
    }
    let mut gammas = vec![first_entry(h)];
    let mut basis = vec![gammas[0].x.clone()];
    for k in 2..=k_max {
        let mut entry = minimize_orthogonal(h, &basis, k, opts)?;
        if opts.verify && h.n() <= 5 {
            let priors: Vec<Vec<f64>> = basis.iter().map(|b| weighted_from_normalized(h, b)).collect();
            let cert = crate::verify::verify_gamma(
                h,
                &priors,
                entry.gamma,
                crate::verify::DEFAULT_TOL,
                crate::verify::VerifyMethod::FaceEnumeration,
            )?;
            entry.verified = Some(cert.verified);
        }
        basis.push(entry.x.clone());
        gammas.push(entry);
    }
    Ok(SpectralResult { gammas, restarts: opts.restarts, seed: opts.seed })
}

/// `γ_2` and a minimizer.
pub fn gamma2(h: &Hypergraph, restarts: usize, seed: u64) -> Result<(f64, Vec<f64>)> {
    if h.n() < 2 {
        return Err(Error::InvalidArgument("need at least two nodes".into()));
    }
    let opts = SpectralOptions { restarts, seed, ..Default::default() };
    let e = minimize_orthogonal(h, &[first_vector(h)], 2, &opts)?;
    Ok((e.gamma, e.x))
}

/// Gram–Schmidt on the rows; `None` if they are (nearly) dependent.
pub fn orthonormalize(frame: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(frame.len());
    for v in frame {
        let mut y = v.clone();
        project_out(&mut y, &out);
        if norm2(&y) < 1e-9 * norm2(v).max(1e-300) || !normalize(&mut y) {
            return None;
        }
        out.push(y);
    }
    Some(out)
}

/// `max_i D̂(x_i)` over a frame.
pub fn frame_max(h: &Hypergraph, frame: &[Vec<f64>]) -> f64 {
    frame.iter().map(|x| dhat(h, x)).fold(f64::NEG_INFINITY, f64::max)
}

/// `max D̂` over the unit sphere of `span(frame)` by projected ascent on the
/// coefficient sphere with `restarts` random starts (plus the frame axes).
pub fn span_max(h: &Hypergraph, frame: &[Vec<f64>], restarts: usize, rng: &mut ChaCha8Rng) -> f64 {
    let k = frame.len();
    let mut best = frame_max(h, frame);
    if k == 1 {
        return best;
    }
    let combine = |c: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; h.n()];
        for (ci, x) in c.iter().zip(frame) {
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi += ci * xi;
            }
        }
        y
    };
    let mut gauss = PolarGaussian::default();
    for _ in 0..restarts {
        let mut c: Vec<f64> = (0..k).map(|_| gauss.sample(rng)).collect();
        if !normalize(&mut c) {
            continue;
        }
        let mut y = combine(&c);
        let mut v = dhat(h, &y);
        let mut step = 0.5;
        for _ in 0..60 {
            let ly = apply_normalized(h, &y, DEFAULT_TOL);
            let grad: Vec<f64> = frame
                .iter()
                .map(|x| 2.0 * (dot(x, &ly) - v * dot(x, &y)))
                .collect();
            let mut moved = false;
            while step > 1e-10 {
                let mut c2: Vec<f64> = c.iter().zip(&grad).map(|(a, g)| a + step * g).collect();
                if normalize(&mut c2) {
                    let y2 = combine(&c2);
                    let v2 = dhat(h, &y2);
                    if v2 > v {
                        c = c2;
                        y = y2;
                        v = v2;
                        moved = true;
                        step *= 1.5;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        best = best.max(v);
    }
    best
}

/// (1+1) evolution strategy over orthonormal frames.
pub fn frame_search<F>(
    h: &Hypergraph,
    start: Vec<Vec<f64>>,
    iterations: usize,
    rng: &mut ChaCha8Rng,
    mut objective: F,
) -> (f64, Vec<Vec<f64>>)
where
    F: FnMut(&[Vec<f64>], &mut ChaCha8Rng) -> f64,
{
    let n = h.n();
    let mut frame = start;
    let mut best = objective(&frame, rng);
    let mut sigma = 0.2;
    let mut gauss = PolarGaussian::default();
    for _ in 0..iterations {
        let trial: Vec<Vec<f64>> = frame
            .iter()
            .map(|x| x.iter().map(|v| v + sigma * gauss.sample(rng) / (n as f64).sqrt()).collect())
            .collect();
        let Some(trial) = orthonormalize(&trial) else { continue };
        let v = objective(&trial, rng);
        if v <= best {
            best = v;
            frame = trial;
            sigma *= 1.5;
        } else {
            sigma *= 0.92;
        }
        sigma = sigma.clamp(1e-9, 1.0);
    }
    (best, frame)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaxEstimate {
    pub k: usize,
    /// Upper bound on `ξ_k`.
    pub xi: f64,
    /// Upper bound on `ζ_k`.
    pub zeta: f64,
    pub xi_frame: Vec<Vec<f64>>,
    pub zeta_frame: Vec<Vec<f64>>,
}

/// Estimates `ξ_k = min max_i D̂(x_i)` and `ζ_k = min max_{y ∈ span} D̂(y)`
/// over orthonormal `k`-frames. Both are upper bounds by construction: the
/// procedural frame `x_1..x_k` seeds the search, then evolution-strategy
/// refinement runs from it and from `restarts` random frames.
pub fn minimax_parameters(h: &Hypergraph, k: usize, restarts: usize, seed: u64) -> Result<MinimaxEstimate> {
    if k == 0 || k > h.n() {
        return Err(Error::InvalidArgument(format!("k must be in 1..={}, got {k}", h.n())));
    }
    let x1 = first_vector(h);
    if k == 1 {
        return Ok(MinimaxEstimate {
            k,
            xi: 0.0,
            zeta: 0.0,
            xi_frame: vec![x1.clone()],
            zeta_frame: vec![x1],
        });
    }
    let opts = SpectralOptions { restarts: restarts.clamp(1, 16), seed, ..Default::default() };
    let procedural = procedural_minimizers(h, k, &opts)?;
    let proc_frame: Vec<Vec<f64>> = procedural.gammas.iter().map(|g| g.x.clone()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d69_6e69_6d61_78);
    let mut starts = vec![proc_frame.clone()];
    for _ in 0..restarts {
        let mut frame = Vec::with_capacity(k);
        for _ in 0..k {
            let x = random_start(h.n(), &frame, &mut rng);
            frame.push(x);
        }
        starts.push(frame);
    }

    let mut xi = (frame_max(h, &proc_frame), proc_frame.clone());
    for s in &starts {
        let (v, f) = frame_search(h, s.clone(), 400, &mut rng, |fr, _| frame_max(h, fr));
        if v < xi.0 {
            xi = (v, f);
        }
    }
    let mut zeta = (span_max(h, &proc_frame, 32, &mut rng), proc_frame);
    for s in starts.iter().take(4) {
        let (v, f) = frame_search(h, s.clone(), 60, &mut rng, |fr, r| span_max(h, fr, 32, r));
        if v < zeta.0 {
            zeta = (v, f);
        }
    }
    Ok(MinimaxEstimate { k, xi: xi.0, zeta: zeta.0, xi_frame: xi.1, zeta_frame: zeta.1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::bundled;

    fn opts(seed: u64) -> SpectralOptions {
        SpectralOptions { seed, ..Default::default() }
    }

    #[test]
    fn louis_gamma2() {
        let h = bundled::louis4();
        let (g, x) = gamma2(&h, 16, 1).unwrap();
        assert!((g - 2.0 / 3.0).abs() < 1e-9, "{g}");
        let f = weighted_from_normalized(&h, &x);
        let s = f[0];
        for (v, want) in f.iter().zip([1.0, 1.0, -1.0, -1.0]) {
            assert!((v - s * want).abs() < 1e-9);
        }
        assert!(eigen_residual(&h, &x, g).unwrap() < 1e-9);
    }

    #[test]
    fn twoedge_gammas_and_third_not_eigen() {
        let h = bundled::twoedge4();
        let res = procedural_minimizers(&h, 3, &opts(7)).unwrap();
        let s5 = 5f64.sqrt();
        assert!((res.gamma(2).unwrap() - (5.0 - s5) / 4.0).abs() < 1e-9);
        assert!((res.gamma(3).unwrap() - (11.0 + s5) / 8.0).abs() < 1e-9);
        assert!(res.gammas[1].residual < 1e-9);
        // Scale-free residual of the paper's third minimizer, from its
        // printed L_w f_3: not an eigenvector.
        assert!((res.gammas[2].residual - 0.089205522443272).abs() < 1e-9, "{}", res.gammas[2].residual);
        assert!(res.converged());
    }

    #[test]
    fn first_entry_is_trivial() {
        let h = bundled::nested5();
        let res = procedural_minimizers(&h, 1, &opts(1)).unwrap();
        assert_eq!(res.gammas[0].gamma, 0.0);
        assert!(res.gammas[0].residual < 1e-12);
        assert!(procedural_minimizers(&h, 6, &opts(1)).is_err());
    }

    #[test]
    fn minimizers_are_orthonormal_and_self_consistent() {
        let h = bundled::nested5();
        let res = procedural_minimizers(&h, 3, &SpectralOptions { restarts: 16, ..opts(3) }).unwrap();
        for (i, a) in res.gammas.iter().enumerate() {
            assert!((norm2(&a.x) - 1.0).abs() < 1e-12);
            assert!((dhat(&h, &a.x) - a.gamma).abs() < 1e-10);
            for b in &res.gammas[..i] {
                assert!(dot(&a.x, &b.x).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn eigen_residual_errors() {
        let h = bundled::louis4();
        assert!(matches!(eigen_residual(&h, &[0.0; 4], 1.0), Err(Error::ZeroVector)));
        assert!(eigen_residual(&h, &[1.0; 3], 1.0).is_err());
    }

    #[test]
    fn louis_minimax_beats_gamma2() {
        let h = bundled::louis4();
        let est = minimax_parameters(&h, 2, 8, 5).unwrap();
        assert!(est.xi <= 1.0 / 3.0 + 1e-3, "{}", est.xi);
        assert!((est.zeta - 2.0 / 3.0).abs() < 1e-6, "{}", est.zeta);
        let one = minimax_parameters(&h, 1, 8, 5).unwrap();
        assert_eq!((one.xi, one.zeta), (0.0, 0.0));
    }
}
