//! Stochastic diffusion `dΦ = -LΦ dt + sqrt(η) W^{1/2} dB`.
//!
//! Paths are integrated by Euler–Maruyama on the same fixed grid as
//! [`crate::diffusion::simulate_fixed`], so with `η = 0` the two agree bit
//! for bit.
//!
//! # Randomness
//!
//! Trajectory `i` draws from `ChaCha8Rng::seed_from_u64(seed ^ i)`. Normal
//! variates use the Marsaglia polar method: draw `u, v` uniform on
//! `[-1, 1)` (as `2U - 1` with `U` a 53-bit uniform from `[0, 1)`) until
//! `0 < s = u² + v² < 1`, return `u·m` and cache `v·m` for the next call,
//! where `m = sqrt(-2 ln s / s)`. Within a step nodes consume variates in
//! node order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diffusion::{
    euler_update, fixed_grid_dt, fixed_grid_steps, l1_to_equilibrium, projected_norm, Trajectory,
};
use crate::error::{Error, Result};
use crate::hypergraph::{convert, Hypergraph, Space, StateVector};
use crate::operator::rate_vector;

/// Quantile levels reported by [`ensemble_stats`].
pub const QUANTILES: [f64; 3] = [0.1, 0.5, 0.9];
/// Monte Carlo sample count for the dominating law.
pub const DOMINATING_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdeConfig {
    pub eta: f64,
    pub dt: f64,
    pub t_end: f64,
    pub n_trajectories: usize,
    pub seed: u64,
}

impl SdeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(Error::InvalidArgument(format!("eta must be >= 0, got {}", self.eta)));
        }
        if !(self.dt > 0.0) || !(self.t_end > 0.0) || self.dt > self.t_end {
            return Err(Error::InvalidArgument(format!(
                "need 0 < dt <= t_end (dt = {}, t_end = {})",
                self.dt, self.t_end
            )));
        }
        if self.n_trajectories == 0 {
            return Err(Error::InvalidArgument("n_trajectories must be positive".into()));
        }
        Ok(())
    }
}

/// Standard normal sampler (Marsaglia polar method with one cached value).
#[derive(Debug, Default, Clone)]
pub struct PolarGaussian {
    cached: Option<f64>,
}

impl PolarGaussian {
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if let Some(v) = self.cached.take() {
            return v;
        }
        loop {
            let u = 2.0 * rng.random::<f64>() - 1.0;
            let v = 2.0 * rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.cached = Some(v * m);
                return u * m;
            }
        }
    }
}

/// Generator for trajectory `index`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index)
}

struct Path<'a> {
    h: &'a Hypergraph,
    phi: Vec<f64>,
    f: Vec<f64>,
    eta: f64,
    rng: ChaCha8Rng,
    gauss: PolarGaussian,
}

impl<'a> Path<'a> {
    fn new(h: &'a Hypergraph, phi: Vec<f64>, eta: f64, rng: ChaCha8Rng) -> Self {
        let f = vec![0.0; phi.len()];
        Self { h, phi, f, eta, rng, gauss: PolarGaussian::default() }
    }

    fn rates(&mut self, tol: f64) -> Vec<f64> {
        for ((f, p), w) in self.f.iter_mut().zip(&self.phi).zip(self.h.node_weights()) {
            *f = p / w;
        }
        rate_vector(self.h, &self.f, tol)
    }

    fn step(&mut self, r: &[f64], dt: f64) {
        euler_update(self.h, &mut self.phi, r, dt);
        if self.eta > 0.0 {
            for (p, w) in self.phi.iter_mut().zip(self.h.node_weights()) {
                *p += (self.eta * w * dt).sqrt() * self.gauss.sample(&mut self.rng);
            }
        }
    }
}

/// Trajectory 0 of the ensemble described by `cfg`.
pub fn simulate_sde(
    h: &Hypergraph,
    phi0: &StateVector,
    cfg: &SdeConfig,
    tol: f64,
) -> Result<Trajectory> {
    simulate_sde_path(h, phi0, cfg, 0, tol)
}

/// Trajectory `index` of the ensemble described by `cfg`.
pub fn simulate_sde_path(
    h: &Hypergraph,
    phi0: &StateVector,
    cfg: &SdeConfig,
    index: u64,
    tol: f64,
) -> Result<Trajectory> {
    cfg.validate()?;
    let phi = convert(h, phi0, Space::Measure)?.values;
    let mut path = Path::new(h, phi, cfg.eta, trajectory_rng(cfg.seed, index));
    let steps = fixed_grid_steps(cfg.t_end, cfg.dt);
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        times.push(if k == steps { cfg.t_end } else { cfg.dt * k as f64 });
        states.push(path.phi.clone());
        if k == steps {
            break;
        }
        let r = path.rates(tol);
        path.step(&r, fixed_grid_dt(k, steps, cfg.t_end, cfg.dt));
    }
    Ok(Trajectory::from_states(h, times, states, tol))
}

/// Mean, variance and quantiles of a sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// `(q, value)` pairs at [`QUANTILES`].
    pub quantiles: Vec<(f64, f64)>,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = if values.len() > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self {
            mean,
            variance,
            std_error: (variance / n).sqrt(),
            quantiles: QUANTILES.iter().map(|&q| (q, quantile_sorted(&sorted, q))).collect(),
        }
    }
}

/// One-sided quantile comparison of `||Π X_t||_2` against the dominating law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceCheck {
    pub q: f64,
    pub empirical: f64,
    /// Lower confidence end of the empirical quantile (order statistic
    /// `N q - 3 sqrt(N q (1 - q))`).
    pub empirical_lower: f64,
    pub dominating: f64,
    pub dominated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckpointStats {
    pub t: f64,
    /// `||Φ_t - Φ_t^*||_1`.
    pub l1: Summary,
    /// `||Π X_t||_2^2`.
    pub projected_sq: Summary,
    /// `<1, Φ_t> - <1, Φ_0>`.
    pub measure_increment: Summary,
    /// `η t w(V)`.
    pub expected_increment_variance: f64,
    /// Normal-theory standard error of the increment's sample variance.
    pub increment_variance_se: f64,
    /// `E ||X̂_t||^2` of the dominating law.
    pub dominating_mean_sq: f64,
    pub dominance: Vec<DominanceCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub config: SdeConfig,
    pub gamma2: f64,
    /// `η w(V) / (2 γ_2)`.
    pub reference_scale: f64,
    /// `sqrt(η n w(V) / (2 γ_2))`, the limit bound on `E ||Φ_t - Φ_t^*||_1`.
    pub l1_limit_bound: f64,
    pub checkpoints: Vec<CheckpointStats>,
}

impl EnsembleStats {
    /// Every dominance comparison held.
    pub fn dominated(&self) -> bool {
        self.checkpoints.iter().all(|c| c.dominance.iter().all(|d| d.dominated))
    }
}

/// Quantiles of `||e^{-γt} Π X_0 + s g||_2`, `g ~ N(0, I_n)`,
/// `s = sqrt(η (1 - e^{-2γt}) / (2γ))`, by Monte Carlo.
pub fn dominating_quantiles(
    x0_proj: &[f64],
    gamma2: f64,
    eta: f64,
    t: f64,
    qs: &[f64],
    samples: usize,
    seed: u64,
) -> Vec<f64> {
    let decay = (-gamma2 * t).exp();
    let s = (eta * (1.0 - (-2.0 * gamma2 * t).exp()) / (2.0 * gamma2)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = PolarGaussian::default();
    let mut norms: Vec<f64> = (0..samples)
        .map(|_| {
            x0_proj
                .iter()
                .map(|&x| {
                    let v = decay * x + s * gauss.sample(&mut rng);
                    v * v
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    norms.sort_by(f64::total_cmp);
    qs.iter().map(|&q| quantile_sorted(&norms, q)).collect()
}

fn projected_vector(h: &Hypergraph, phi: &[f64]) -> Vec<f64> {
    let scale = phi.iter().sum::<f64>() / h.total_weight();
    phi.iter()
        .zip(h.node_weights())
        .map(|(p, w)| (p - scale * w) / w.sqrt())
        .collect()
}

/// Runs `cfg.n_trajectories` paths in parallel and summarizes them at each
/// checkpoint time (rounded up to the integration grid).
pub fn ensemble_stats(
    h: &Hypergraph,
    phi0: &StateVector,
    cfg: &SdeConfig,
    checkpoints: &[f64],
    gamma2: f64,
    tol: f64,
) -> Result<EnsembleStats> {
    cfg.validate()?;
    if !(gamma2 > 0.0) {
        return Err(Error::InvalidArgument("gamma2 must be positive".into()));
    }
    let phi0 = convert(h, phi0, Space::Measure)?.values;
    let steps = fixed_grid_steps(cfg.t_end, cfg.dt);
    let mut marks: Vec<(usize, f64)> = Vec::with_capacity(checkpoints.len());
    for &c in checkpoints {
        if !(0.0..=cfg.t_end).contains(&c) {
            return Err(Error::InvalidArgument(format!(
                "checkpoint {c} outside [0, {}]",
                cfg.t_end
            )));
        }
        let k = ((c / cfg.dt) - 1e-9).ceil().max(0.0) as usize;
        let k = k.min(steps);
        let t = if k == steps { cfg.t_end } else { cfg.dt * k as f64 };
        marks.push((k, t));
    }
    let total0: f64 = phi0.iter().sum();

    // samples[i][j] = (l1, ||ΠX||^2, increment) of trajectory i at checkpoint j
    let samples: Vec<Vec<(f64, f64, f64)>> = (0..cfg.n_trajectories as u64)
        .into_par_iter()
        .map(|i| {
            let mut path = Path::new(h, phi0.clone(), cfg.eta, trajectory_rng(cfg.seed, i));
            let mut out = vec![(0.0, 0.0, 0.0); marks.len()];
            for k in 0..=steps {
                for (slot, &(mk, _)) in out.iter_mut().zip(&marks) {
                    if mk == k {
                        let pn = projected_norm(h, &path.phi);
                        let total: f64 = path.phi.iter().sum();
                        *slot = (l1_to_equilibrium(h, &path.phi), pn * pn, total - total0);
                    }
                }
                if k == steps {
                    break;
                }
                let r = path.rates(tol);
                path.step(&r, fixed_grid_dt(k, steps, cfg.t_end, cfg.dt));
            }
            out
        })
        .collect();

    let x0 = projected_vector(h, &phi0);
    let n_traj = cfg.n_trajectories as f64;
    let wv = h.total_weight();
    let stats = marks
        .iter()
        .enumerate()
        .map(|(j, &(_, t))| {
            let col = |pick: fn(&(f64, f64, f64)) -> f64| -> Vec<f64> {
                samples.iter().map(|s| pick(&s[j])).collect()
            };
            let l1 = col(|s| s.0);
            let proj_sq = col(|s| s.1);
            let incr = col(|s| s.2);
            let mut proj: Vec<f64> = proj_sq.iter().map(|v| v.sqrt()).collect();
            proj.sort_by(f64::total_cmp);

            let decay = (-2.0 * gamma2 * t).exp();
            let x0_sq: f64 = x0.iter().map(|v| v * v).sum();
            let dominating_mean_sq = decay * x0_sq
                + h.n() as f64 * cfg.eta * (1.0 - decay) / (2.0 * gamma2);
            let dom = dominating_quantiles(
                &x0,
                gamma2,
                cfg.eta,
                t,
                &[0.5, 0.9],
                DOMINATING_SAMPLES,
                cfg.seed ^ 0x5eed_d0c5 ^ (j as u64),
            );
            let dominance = [0.5, 0.9]
                .iter()
                .zip(dom)
                .map(|(&q, dominating)| {
                    let nq = n_traj * q;
                    let lower_idx = (nq - 3.0 * (nq * (1.0 - q)).sqrt()).floor().max(0.0) as usize;
                    let empirical_lower = proj[lower_idx.min(proj.len() - 1)];
                    DominanceCheck {
                        q,
                        empirical: quantile_sorted(&proj, q),
                        empirical_lower,
                        dominating,
                        dominated: empirical_lower <= dominating * (1.0 + 1e-12) + 1e-15,
                    }
                })
                .collect();
            let expected = cfg.eta * t * wv;
            CheckpointStats {
                t,
                l1: Summary::of(&l1),
                projected_sq: Summary::of(&proj_sq),
                measure_increment: Summary::of(&incr),
                expected_increment_variance: expected,
                increment_variance_se: expected * (2.0 / (n_traj - 1.0).max(1.0)).sqrt(),
                dominating_mean_sq,
                dominance,
            }
        })
        .collect();

    Ok(EnsembleStats {
        config: *cfg,
        gamma2,
        reference_scale: cfg.eta * wv / (2.0 * gamma2),
        l1_limit_bound: (cfg.eta * h.n() as f64 * wv / (2.0 * gamma2)).sqrt(),
        checkpoints: stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::simulate_fixed;
    use crate::hypergraph::bundled;

    fn cfg(eta: f64, dt: f64, t_end: f64, n: usize, seed: u64) -> SdeConfig {
        SdeConfig { eta, dt, t_end, n_trajectories: n, seed }
    }

    #[test]
    fn polar_gaussian_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut g = PolarGaussian::default();
        let xs: Vec<f64> = (0..200_000).map(|_| g.sample(&mut rng)).collect();
        let s = Summary::of(&xs);
        assert!(s.mean.abs() < 0.01);
        assert!((s.variance - 1.0).abs() < 0.01);
        assert!((s.quantiles[2].1 - 1.2816).abs() < 0.02);
    }

    #[test]
    fn zero_noise_matches_deterministic_bitwise() {
        let h = bundled::louis4();
        let phi0 = StateVector::measure(vec![1.0, 0.0, 0.0, 0.0]);
        let c = cfg(0.0, 1e-2, 1.234, 1, 9);
        let a = simulate_sde(&h, &phi0, &c, 1e-9).unwrap();
        let b = simulate_fixed(&h, &phi0, 1.234, 1e-2, 1e-9).unwrap();
        assert_eq!(a.times, b.times);
        assert_eq!(a.states, b.states);
    }

    #[test]
    fn same_seed_same_path() {
        let h = bundled::twoedge4();
        let phi0 = StateVector::measure(vec![1.0, 0.0, 0.0, 0.0]);
        let c = cfg(0.5, 1e-2, 1.0, 1, 42);
        let a = simulate_sde(&h, &phi0, &c, 1e-9).unwrap();
        let b = simulate_sde(&h, &phi0, &c, 1e-9).unwrap();
        assert_eq!(a.states, b.states);
        let d = simulate_sde(&h, &phi0, &SdeConfig { seed: 43, ..c }, 1e-9).unwrap();
        assert_ne!(a.states, d.states);
    }

    #[test]
    fn single_node_is_brownian() {
        let h = Hypergraph::new(vec!["a".into()], vec![(vec![0], 2.0)]).unwrap();
        let c = cfg(1.0, 1e-2, 1.0, 2000, 3);
        let phi0 = StateVector::measure(vec![0.0]);
        let finals: Vec<f64> = (0..c.n_trajectories as u64)
            .map(|i| *simulate_sde_path(&h, &phi0, &c, i, 1e-9).unwrap().states.last().unwrap().first().unwrap())
            .collect();
        let s = Summary::of(&finals);
        let want = 2.0; // η w t
        let se = want * (2.0 / (finals.len() as f64 - 1.0)).sqrt();
        assert!((s.variance - want).abs() <= 3.0 * se, "{} vs {want}", s.variance);
        assert!(s.mean.abs() <= 3.0 * s.std_error);
    }

    #[test]
    fn single_edge_odd_mode_is_ou() {
        // y = (φ_u - φ_v)/sqrt(2) solves dy = -2y dt + sqrt(η) dB.
        let h = Hypergraph::new(vec!["u".into(), "v".into()], vec![(vec![0, 1], 1.0)]).unwrap();
        let (eta, t) = (0.5, 0.5);
        let c = cfg(eta, 1e-3, t, 1000, 11);
        let phi0 = StateVector::measure(vec![1.0, 0.0]);
        let ys: Vec<f64> = (0..c.n_trajectories as u64)
            .map(|i| {
                let tr = simulate_sde_path(&h, &phi0, &c, i, 1e-9).unwrap();
                let p = tr.states.last().unwrap();
                (p[0] - p[1]) / 2f64.sqrt()
            })
            .collect();
        let s = Summary::of(&ys);
        let mean = (1.0 / 2f64.sqrt()) * (-2.0 * t).exp();
        let var = eta * (1.0 - (-4.0 * t).exp()) / 4.0;
        assert!((s.mean - mean).abs() <= 3.0 * s.std_error + 2e-3, "{} vs {mean}", s.mean);
        let se = var * (2.0 / (ys.len() as f64 - 1.0)).sqrt();
        assert!((s.variance - var).abs() <= 3.0 * se, "{} vs {var}", s.variance);
    }

    #[test]
    fn ensemble_is_deterministic_and_collapses_without_noise() {
        let h = bundled::louis4();
        let phi0 = StateVector::measure(vec![1.0, 0.0, 0.0, 0.0]);
        let c = cfg(0.0, 1e-2, 2.0, 8, 5);
        let a = ensemble_stats(&h, &phi0, &c, &[0.5, 2.0], 2.0 / 3.0, 1e-9).unwrap();
        let b = ensemble_stats(&h, &phi0, &c, &[0.5, 2.0], 2.0 / 3.0, 1e-9).unwrap();
        assert_eq!(a, b);
        let det = simulate_fixed(&h, &phi0, 2.0, 1e-2, 1e-9).unwrap();
        let last = det.diagnostics.last().unwrap().l1_to_equilibrium;
        let cp = &a.checkpoints[1];
        assert!(cp.l1.variance < 1e-28);
        assert!((cp.l1.mean - last).abs() <= 1e-14 * last);
        assert!(a.dominated());
    }

    #[test]
    fn bad_config() {
        let h = bundled::louis4();
        let phi0 = StateVector::measure(vec![1.0, 0.0, 0.0, 0.0]);
        assert!(simulate_sde(&h, &phi0, &cfg(-1.0, 1e-2, 1.0, 1, 0), 1e-9).is_err());
        assert!(simulate_sde(&h, &phi0, &cfg(0.1, 2.0, 1.0, 1, 0), 1e-9).is_err());
        assert!(ensemble_stats(&h, &phi0, &cfg(0.1, 1e-2, 1.0, 4, 0), &[2.0], 0.5, 1e-9).is_err());
    }
}
