//! The golden acceptance suite over the bundled instances and seeded random
//! families. Every criterion is deterministic and reports each quantity it
//! checks with the expected value, the measured value and the tolerance.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diffusion::{derivative_checks, mixing_time, projected_norm, simulate, simulate_fixed};
use crate::hypergraph::{bundled, discrepancy_ratio, random, weighted_from_normalized, Hypergraph, StateVector};
use crate::operator::{apply_even_split_operator, apply_operator, evaluate, rayleigh_quotient, OperatorOptions, PeelLayer, DEFAULT_TOL};
use crate::spectral::{minimax_parameters, procedural_minimizers, SpectralOptions};
use crate::stochastic::{ensemble_stats, simulate_sde_path, SdeConfig};
use crate::verify::{brute_force_operator, exact_minimum, oracle_xi_zeta, verify_gamma, VerifyMethod};

pub const CRITERIA: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|got - expected| <= tolerance`
    Equal,
    /// `got <= expected + tolerance`
    AtMost,
    /// `got >= expected - tolerance`
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub relation: Relation,
    pub expected: f64,
    pub got: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(quantity: impl Into<String>, relation: Relation, expected: f64, got: f64, tolerance: f64) -> Self {
        let passed = match relation {
            Relation::Equal => (got - expected).abs() <= tolerance,
            Relation::AtMost => got <= expected + tolerance,
            Relation::AtLeast => got >= expected - tolerance,
        };
        Self { quantity: quantity.into(), relation, expected, got, tolerance, passed }
    }

    pub fn equal(q: impl Into<String>, expected: f64, got: f64, tol: f64) -> Self {
        Self::new(q, Relation::Equal, expected, got, tol)
    }

    pub fn at_most(q: impl Into<String>, bound: f64, got: f64, tol: f64) -> Self {
        Self::new(q, Relation::AtMost, bound, got, tol)
    }

    pub fn at_least(q: impl Into<String>, bound: f64, got: f64, tol: f64) -> Self {
        Self::new(q, Relation::AtLeast, bound, got, tol)
    }

    /// A yes/no property, recorded as `1 == 1`.
    pub fn holds(q: impl Into<String>, ok: bool) -> Self {
        Self::new(q, Relation::Equal, 1.0, if ok { 1.0 } else { 0.0 }, 0.0)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Equal => "==",
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        write!(
            f,
            "{}: expected {rel} {:.12e}, got {:.12e}, tolerance {:.1e}",
            self.quantity, self.expected, self.got, self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Set when the criterion could not be evaluated at all.
    pub error: Option<String>,
}

impl CriterionReport {
    fn from_checks(id: usize, checks: Vec<Check>) -> Self {
        Self { id, name: NAMES[id - 1], passed: checks.iter().all(|c| c.passed), checks, error: None }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One summary line: id, verdict, name, and the first failing check.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("[{verdict}] {:>2} {} ({} checks)", self.id, self.name, self.checks.len());
        if let Some(e) = &self.error {
            s.push_str(&format!(" -- error: {e}"));
        } else if let Some(c) = self.failures().next() {
            s.push_str(&format!(" -- {c}"));
        }
        s
    }
}

pub const NAMES: [&str; CRITERIA] = [
    "operator golden values",
    "spectrum golden values",
    "minimizers and eigenvectors",
    "Rayleigh quotient equals discrepancy",
    "energy identity and conservation",
    "brute-force operator equivalence",
    "derivative identities and monotonicity",
    "mixing bound and deterministic decay",
    "stochastic convergence",
    "minimaximizer chain",
    "permutation verifier",
];

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize) -> CriterionReport {
    let result = match id {
        1 => operator_golden(),
        2 => spectrum_golden(),
        3 => minimizer_eigenvectors(),
        4 => rayleigh_identity(),
        5 => energy_identity(),
        6 => brute_force_equivalence(),
        7 => derivative_identities(),
        8 => mixing(),
        9 => stochastic(),
        10 => minimax_chain(),
        11 => permutation_verifier(),
        _ => panic!("criterion ids are 1..={CRITERIA}"),
    };
    match result {
        Ok(checks) => CriterionReport::from_checks(id, checks),
        Err(e) => CriterionReport { id, name: NAMES[id - 1], passed: false, checks: Vec::new(), error: Some(e.to_string()) },
    }
}

/// Runs all criteria in order.
pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERIA).map(run_criterion).collect()
}

type Checks = crate::Result<Vec<Check>>;

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn sqrt5() -> f64 {
    5f64.sqrt()
}

/// The third minimizer of `twoedge4` in weighted coordinates.
fn twoedge_f3() -> Vec<f64> {
    let s5 = sqrt5();
    vec![s5 - 1.0, -1.0, 4.0 - s5, -1.0]
}

/// The second minimizer of `twoedge4` in weighted coordinates.
fn twoedge_f2() -> Vec<f64> {
    let s5 = sqrt5();
    vec![s5 - 1.0, (3.0 - s5) / 2.0, -1.0, -1.0]
}

fn gamma_twoedge() -> (f64, f64) {
    ((5.0 - sqrt5()) / 4.0, (11.0 + sqrt5()) / 8.0)
}

fn operator_golden() -> Checks {
    let louis = bundled::louis4();
    let f = vec![1.0, 1.0, -1.0, -1.0];
    let v = StateVector::weighted(f.clone());
    let lw = apply_operator(&louis, &v, DEFAULT_TOL)?.laplacian_weighted();
    let want: Vec<f64> = f.iter().map(|x| 2.0 / 3.0 * x).collect();
    let even = apply_even_split_operator(&louis, &v, DEFAULT_TOL)?.laplacian_weighted();
    let want_even = [1.0 / 3.0, 1.0, -2.0 / 3.0, -2.0 / 3.0];
    let s5 = sqrt5();
    let two = bundled::twoedge4();
    let l3 = apply_operator(&two, &StateVector::weighted(twoedge_f3()), DEFAULT_TOL)?.laplacian_weighted();
    let want3 = [s5, -5.0 / 3.0, 5.0 - s5, -5.0 / 3.0];
    Ok(vec![
        Check::equal("louis4 L_w(1,1,-1,-1) max error", 0.0, max_abs_diff(&lw, &want), 1e-9),
        Check::equal("louis4 even-split max error", 0.0, max_abs_diff(&even, &want_even), 1e-9),
        Check::equal("twoedge4 L_w f3 max error", 0.0, max_abs_diff(&l3, &want3), 1e-9),
    ])
}

/// Which nested5 branch a second minimizer belongs to, by its sign pattern
/// in weighted coordinates: `(1,1,1,-4,-4)` or `(2,2,-3,-3,-3)`.
fn nested_branch(f2: &[f64]) -> Option<usize> {
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-6 * (a.abs() + b.abs());
    let s = f2[0];
    let r: Vec<f64> = f2.iter().map(|v| v / s).collect();
    if same(r[1], 1.0) && same(r[2], 1.0) && same(r[3], -4.0) && same(r[4], -4.0) {
        Some(0)
    } else if same(r[1], 1.0) && same(r[2], -1.5) && same(r[3], -1.5) && same(r[4], -1.5) {
        Some(1)
    } else {
        None
    }
}

/// Seeds scanned for the two nested5 branches.
const BRANCH_SEEDS: u64 = 16;

fn spectrum_golden() -> Checks {
    let mut checks = Vec::new();
    let opts = SpectralOptions::default();
    let (g2_two, g3_two) = gamma_twoedge();
    for (name, h, g2) in [
        ("louis4", bundled::louis4(), 2.0 / 3.0),
        ("nested5", bundled::nested5(), 5.0 / 6.0),
        ("twoedge4", bundled::twoedge4(), g2_two),
    ] {
        let r = procedural_minimizers(&h, 2, &opts)?;
        checks.push(Check::equal(format!("{name} gamma2"), g2, r.gamma(2).unwrap(), 1e-6));
    }
    let r = procedural_minimizers(&bundled::twoedge4(), 3, &opts)?;
    checks.push(Check::equal("twoedge4 gamma3", g3_two, r.gamma(3).unwrap(), 1e-6));

    let h = bundled::nested5();
    let gamma3 = [113.0 / 99.0, 181.0 / 165.0];
    let mut seen = [false; 2];
    for seed in 0..BRANCH_SEEDS {
        let r = procedural_minimizers(&h, 3, &SpectralOptions { seed, ..opts })?;
        let f2 = weighted_from_normalized(&h, r.vector(2).unwrap());
        match nested_branch(&f2) {
            Some(b) => {
                seen[b] = true;
                checks.push(Check::equal(
                    format!("nested5 seed {seed} gamma3 (branch {})", ["(1,1,1,-4,-4)", "(2,2,-3,-3,-3)"][b]),
                    gamma3[b],
                    r.gamma(3).unwrap(),
                    1e-6,
                ));
            }
            None => checks.push(Check::holds(format!("nested5 seed {seed} second minimizer is a known branch"), false)),
        }
    }
    checks.push(Check::holds("nested5 branch (1,1,1,-4,-4) reached by some seed", seen[0]));
    checks.push(Check::holds("nested5 branch (2,2,-3,-3,-3) reached by some seed", seen[1]));
    Ok(checks)
}

const RANDOM_SPECTRAL_INSTANCES: usize = 50;

fn minimizer_eigenvectors() -> Checks {
    let mut checks = Vec::new();
    let opts = SpectralOptions::default();
    for name in bundled::NAMES {
        let h = bundled::by_name(name).unwrap();
        let r = procedural_minimizers(&h, 2, &opts)?;
        let g = &r.gammas[1];
        checks.push(Check::at_most(format!("{name} residual(x2, gamma2)"), 0.0, g.residual, 1e-6));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e16);
    let mut worst = (0.0f64, 0usize);
    let mut confirm = (0.0f64, 0usize);
    for i in 0..RANDOM_SPECTRAL_INSTANCES {
        let n = rng.random_range(3..=6);
        let m = rng.random_range(2..=8);
        let h = random::hypergraph(&mut rng, n, m, 4);
        let r = procedural_minimizers(&h, 2, &SpectralOptions { seed: i as u64, ..opts })?;
        let (exact, _) = exact_minimum(&h, &[vec![1.0; n]])?;
        let gap = (r.gamma(2).unwrap() - exact).abs();
        if gap >= confirm.0 {
            confirm = (gap, i);
        }
        let res = r.gammas[1].residual;
        if res >= worst.0 {
            worst = (res, i);
        }
    }
    checks.push(Check::equal(
        format!("random: worst |gamma2 - exact minimum| (instance {})", confirm.1),
        0.0,
        confirm.0,
        1e-6,
    ));
    checks.push(Check::at_most(format!("random: worst residual(x2, gamma2) (instance {})", worst.1), 0.0, worst.0, 1e-6));

    let h = bundled::twoedge4();
    let r = procedural_minimizers(&h, 3, &opts)?;
    let g3 = &r.gammas[2];
    checks.push(Check::at_least("twoedge4 residual(x3, gamma3)", 0.1, g3.residual, 0.0));
    Ok(checks)
}

const IDENTITY_SAMPLES: usize = 1000;

/// A random small instance and a weighted vector with engineered ties.
fn random_pair(rng: &mut ChaCha8Rng, max_n: usize) -> (Hypergraph, Vec<f64>) {
    let n = rng.random_range(2..=max_n);
    let m = rng.random_range(1..=2 * n);
    let h = random::hypergraph(rng, n, m, n.min(5));
    let f = random::vector_with_ties(rng, n);
    (h, f)
}

fn rayleigh_identity() -> Checks {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4a11);
    let mut worst = 0.0f64;
    let mut skipped = 0usize;
    for _ in 0..IDENTITY_SAMPLES {
        let (h, f) = random_pair(&mut rng, 7);
        let v = StateVector::weighted(f);
        let (Ok(rq), Ok(d)) = (rayleigh_quotient(&h, &v), discrepancy_ratio(&h, &v)) else {
            skipped += 1;
            continue;
        };
        worst = worst.max((rq - d).abs() / d.abs().max(1.0));
    }
    Ok(vec![
        Check::at_most("worst |R(f) - D_w(f)| / max(1, D_w(f))", 0.0, worst, 1e-9),
        Check::equal("zero vectors drawn", 0.0, skipped as f64, 0.0),
    ])
}

fn energy_identity() -> Checks {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e11);
    let mut worst_energy = 0.0f64;
    let mut worst_flow = 0.0f64;
    for _ in 0..IDENTITY_SAMPLES {
        let (h, f) = random_pair(&mut rng, 7);
        let res = apply_operator(&h, &StateVector::weighted(f), DEFAULT_TOL)?;
        worst_energy = worst_energy.max(res.energy_residual(&h));
        worst_flow = worst_flow.max(res.net_flow().abs());
    }
    Ok(vec![
        Check::at_most("worst relative energy identity residual", 0.0, worst_energy, 1e-8),
        Check::at_most("worst |sum of rho|", 0.0, worst_flow, 1e-10),
    ])
}

fn layer_partition(layers: &[PeelLayer]) -> Vec<Vec<usize>> {
    let mut p: Vec<Vec<usize>> = layers
        .iter()
        .map(|l| {
            let mut n = l.nodes.clone();
            n.sort_unstable();
            n
        })
        .collect();
    p.sort();
    p
}

const BRUTE_SAMPLES: usize = 500;

fn brute_force_equivalence() -> Checks {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b7e);
    let mut worst = 0.0f64;
    let mut mismatched = 0usize;
    for _ in 0..BRUTE_SAMPLES {
        let (h, f) = random_pair(&mut rng, 7);
        let main = evaluate(&h, &f, OperatorOptions::default(), true);
        let brute = brute_force_operator(&h, &f, DEFAULT_TOL)?;
        worst = worst.max(max_abs_diff(&main.r, &brute.r));
        if layer_partition(&main.layers) != layer_partition(&brute.layers) {
            mismatched += 1;
        }
    }
    Ok(vec![
        Check::at_most("worst max |r_main - r_brute|", 0.0, worst, 1e-10),
        Check::equal("instances with different layer partitions", 0.0, mismatched as f64, 0.0),
    ])
}

const DERIVATIVE_SAMPLES: usize = 200;
const MONOTONE_TRAJECTORIES: usize = 20;
const MONOTONE_SLACK: f64 = 1e-7;

fn derivative_identities() -> Checks {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7d3e);
    let mut worst = [0.0f64; 3];
    let mut tolerance = 0.0f64;
    let mut done = 0usize;
    while done < DERIVATIVE_SAMPLES {
        let (h, f) = random_pair(&mut rng, 6);
        if f.iter().all(|&v| v == 0.0) {
            continue;
        }
        let rep = derivative_checks(&h, &f, 1e-6)?;
        tolerance = rep.tolerance;
        for (w, c) in worst.iter_mut().zip([rep.norm, rep.energy, rep.rayleigh]) {
            *w = w.max(c.relative_error);
        }
        done += 1;
    }
    let mut worst_rise = f64::NEG_INFINITY;
    for _ in 0..MONOTONE_TRAJECTORIES {
        let n = rng.random_range(3..=6);
        let m = rng.random_range(2..=2 * n);
        let h = random::hypergraph(&mut rng, n, m, 4);
        let phi: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let traj = simulate(&h, &StateVector::measure(phi), 2.0, 1e-3, DEFAULT_TOL)?;
        for w in traj.diagnostics.windows(2) {
            worst_rise = worst_rise.max(w[1].rayleigh - w[0].rayleigh);
        }
    }
    Ok(vec![
        Check::at_most("worst relative error d||f||^2/dt", 0.0, worst[0], tolerance),
        Check::at_most("worst relative error d<f,Lf>/dt", 0.0, worst[1], tolerance),
        Check::at_most("worst relative error dR/dt", 0.0, worst[2], tolerance),
        Check::at_most("largest Rayleigh increase per step", 0.0, worst_rise, MONOTONE_SLACK),
    ])
}

const MIXING_STARTS: usize = 5;
const MIXING_DELTA: f64 = 0.01;
const DECAY_SLACK: f64 = 1e-6;

fn bundled_gamma2(name: &str) -> f64 {
    match name {
        "louis4" => 2.0 / 3.0,
        "nested5" => 5.0 / 6.0,
        _ => gamma_twoedge().0,
    }
}

/// A random probability vector.
fn random_probability(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

fn mixing() -> Checks {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x81c5);
    for name in bundled::NAMES {
        let h = bundled::by_name(name).unwrap();
        let g2 = bundled_gamma2(name);
        let mut worst_ratio = f64::NEG_INFINITY;
        let mut worst_decay = f64::NEG_INFINITY;
        for _ in 0..MIXING_STARTS {
            let phi0 = StateVector::measure(random_probability(&mut rng, h.n()));
            let rep = mixing_time(&h, &phi0, MIXING_DELTA, g2, 1e-3)?;
            worst_ratio = worst_ratio.max(rep.t_mix / rep.bound);
            let traj = simulate(&h, &phi0, rep.bound, 1e-3, DEFAULT_TOL)?;
            let p0 = projected_norm(&h, &traj.states[0]);
            for (t, phi) in traj.times.iter().zip(&traj.states) {
                let ratio = projected_norm(&h, phi) / ((-g2 * t).exp() * p0);
                worst_decay = worst_decay.max(ratio);
            }
        }
        checks.push(Check::at_most(format!("{name} worst t_mix / bound"), 1.0, worst_ratio, 0.0));
        checks.push(Check::at_most(
            format!("{name} worst ||PiX_t|| / (e^(-gamma2 t) ||PiX_0||)"),
            1.0 + DECAY_SLACK,
            worst_decay,
            0.0,
        ));
    }
    Ok(checks)
}

pub const SDE_SEED: u64 = 42;

fn stochastic() -> Checks {
    let h = bundled::louis4();
    let g2 = 2.0 / 3.0;
    let phi0 = StateVector::measure(vec![1.0, 0.0, 0.0, 0.0]);
    let cfg = SdeConfig { eta: 0.1, dt: 1e-3, t_end: 20.0, n_trajectories: 200, seed: SDE_SEED };
    let stats = ensemble_stats(&h, &phi0, &cfg, &[1.0, 5.0, 20.0], g2, DEFAULT_TOL)?;
    let last = stats.checkpoints.last().unwrap();
    let mut checks = vec![
        Check::at_most(
            "mean ||Phi_t - Phi_t*||_1 at t=20 (bound + 3 SE)",
            stats.l1_limit_bound + 3.0 * last.l1.std_error,
            last.l1.mean,
            0.0,
        ),
        Check::equal(
            "variance of the total-measure increment at t=20",
            last.expected_increment_variance,
            last.measure_increment.variance,
            3.0 * last.increment_variance_se,
        ),
    ];
    for c in &stats.checkpoints {
        for d in c.dominance.iter().filter(|d| d.q >= 0.5) {
            checks.push(Check::at_most(
                format!("t={} q={} lower empirical quantile of ||PiX_t|| vs dominating law", c.t, d.q),
                d.dominating,
                d.empirical_lower,
                0.0,
            ));
        }
    }
    let quiet = SdeConfig { eta: 0.0, t_end: 2.0, n_trajectories: 1, ..cfg };
    let noisy_free = simulate_sde_path(&h, &phi0, &quiet, 0, DEFAULT_TOL)?;
    let det = simulate_fixed(&h, &phi0, quiet.t_end, quiet.dt, DEFAULT_TOL)?;
    let identical = noisy_free.times == det.times
        && noisy_free
            .states
            .iter()
            .zip(&det.states)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
    checks.push(Check::holds("eta=0 path equals the deterministic Euler path bitwise", identical));
    Ok(checks)
}

const CHAIN_INSTANCES: usize = 30;
const CHAIN_TOL: f64 = 1e-4;

fn minimax_chain() -> Checks {
    let mut checks = Vec::new();
    let louis = bundled::louis4();
    let o = oracle_xi_zeta(&louis, 2)?;
    checks.push(Check::at_most("louis4 oracle xi2", 1.0 / 3.0, o.xi, CHAIN_TOL));
    checks.push(Check::equal("louis4 oracle zeta2 vs gamma2", 2.0 / 3.0, o.zeta, CHAIN_TOL));
    checks.push(Check::holds("louis4 xi2 <= 1/3 < 2/3 = gamma2", o.xi < 2.0 / 3.0 - CHAIN_TOL));

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    // Worst slack of each inequality over the family (negative = violated).
    let mut slack = [f64::INFINITY; 8];
    let mut heuristic = f64::INFINITY;
    for i in 0..CHAIN_INSTANCES {
        let n = rng.random_range(3..=5);
        let m = rng.random_range(2..7);
        let h = random::hypergraph(&mut rng, n, m, 4);
        let ones = vec![1.0; n];
        let sp = procedural_minimizers(&h, 2, &SpectralOptions { seed: i as u64, ..Default::default() })?;
        let (g2, _) = exact_minimum(&h, &[ones.clone()])?;
        let f2 = weighted_from_normalized(&h, sp.vector(2).unwrap());
        let (g3, _) = exact_minimum(&h, &[ones, f2])?;
        let o2 = oracle_xi_zeta(&h, 2)?;
        let o3 = oracle_xi_zeta(&h, 3)?;
        let s = [
            g2 - o2.xi,
            CHAIN_TOL - (o2.zeta - g2).abs(),
            2.0 * o2.xi - g2,
            g3 - o3.xi,
            o3.zeta - g3,
            3.0 * o3.xi - o3.zeta,
            0.0,
            0.0,
        ];
        for (w, v) in slack.iter_mut().zip(s) {
            *w = w.min(v);
        }
        for (k, o) in [(2, &o2), (3, &o3)] {
            let est = minimax_parameters(&h, k, 64, 7)?;
            heuristic = heuristic.min(est.xi - o.xi).min(est.zeta - o.zeta);
        }
    }
    let labels = [
        "gamma2 - xi2",
        "1e-4 - |zeta2 - gamma2|",
        "2 xi2 - gamma2",
        "gamma3 - xi3",
        "zeta3 - gamma3",
        "3 xi3 - zeta3",
    ];
    for (label, s) in labels.iter().zip(slack) {
        if *label == "1e-4 - |zeta2 - gamma2|" {
            checks.push(Check::at_least(format!("random: worst {label}"), 0.0, s, 0.0));
        } else {
            checks.push(Check::at_least(format!("random: worst {label}"), 0.0, s, CHAIN_TOL));
        }
    }
    checks.push(Check::at_least("random: worst heuristic - oracle (xi and zeta, k=2,3)", 0.0, heuristic, CHAIN_TOL));
    Ok(checks)
}

const REJECT_GAP: f64 = 0.01;

fn permutation_verifier() -> Checks {
    let mut checks = Vec::new();
    let (g2t, g3t) = gamma_twoedge();
    let cases: Vec<(&str, Hypergraph, Vec<Vec<f64>>, f64)> = vec![
        ("louis4 gamma2", bundled::louis4(), vec![vec![1.0; 4]], 2.0 / 3.0),
        ("nested5 gamma2", bundled::nested5(), vec![vec![1.0; 5]], 5.0 / 6.0),
        (
            "nested5 gamma3 (1,1,1,-4,-4)",
            bundled::nested5(),
            vec![vec![1.0; 5], vec![1.0, 1.0, 1.0, -4.0, -4.0]],
            113.0 / 99.0,
        ),
        (
            "nested5 gamma3 (2,2,-3,-3,-3)",
            bundled::nested5(),
            vec![vec![1.0; 5], vec![2.0, 2.0, -3.0, -3.0, -3.0]],
            181.0 / 165.0,
        ),
        ("twoedge4 gamma2", bundled::twoedge4(), vec![vec![1.0; 4]], g2t),
        ("twoedge4 gamma3", bundled::twoedge4(), vec![vec![1.0; 4], twoedge_f2()], g3t),
    ];
    let tol = crate::verify::DEFAULT_TOL;
    for (label, h, priors, gamma) in cases {
        let ok = verify_gamma(&h, &priors, gamma, tol, VerifyMethod::ProjectedGradient)?;
        checks.push(Check::holds(format!("{label}: accepted"), ok.verified));
        checks.push(Check::at_least(format!("{label}: certified minimum"), 0.0, ok.minimum, tol));
        let bad = verify_gamma(&h, &priors, gamma + REJECT_GAP, tol, VerifyMethod::ProjectedGradient)?;
        checks.push(Check::holds(format!("{label}+0.01: rejected"), !bad.verified));
        let Some(c) = bad.counterexample else {
            checks.push(Check::holds(format!("{label}+0.01: counterexample present"), false));
            continue;
        };
        let d = discrepancy_ratio(&h, &StateVector::weighted(c.clone()))?;
        checks.push(Check::at_most(format!("{label}+0.01: D_w(counterexample)"), gamma + REJECT_GAP, d, -tol));
        let w = h.node_weights();
        let ortho = priors
            .iter()
            .map(|p| {
                let ip: f64 = p.iter().zip(&c).zip(w).map(|((a, b), w)| a * b * w).sum();
                let np: f64 = p.iter().zip(w).map(|(a, w)| a * a * w).sum::<f64>().sqrt();
                ip.abs() / np
            })
            .fold(0.0, f64::max);
        checks.push(Check::at_most(format!("{label}+0.01: counterexample orthogonality"), 0.0, ortho, 1e-9));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_relations() {
        assert!(Check::equal("x", 1.0, 1.0 + 1e-10, 1e-9).passed);
        assert!(!Check::equal("x", 1.0, 1.1, 1e-9).passed);
        assert!(Check::at_most("x", 1.0, 1.0, 0.0).passed);
        assert!(!Check::at_least("x", 1.0, 0.5, 0.1).passed);
        assert!(!Check::holds("x", false).passed);
    }

    #[test]
    fn branch_detection() {
        assert_eq!(nested_branch(&[-0.5, -0.5, -0.5, 2.0, 2.0]), Some(0));
        assert_eq!(nested_branch(&[2.0, 2.0, -3.0, -3.0, -3.0]), Some(1));
        assert_eq!(nested_branch(&[1.0, 0.0, 0.0, 0.0, -1.0]), None);
    }

    #[test]
    fn operator_criterion_passes() {
        let r = run_criterion(1);
        assert!(r.passed, "{}", r.line());
    }
}
