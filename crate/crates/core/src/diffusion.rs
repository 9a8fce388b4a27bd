//! Deterministic diffusion `dφ/dt = -L φ`.
//!
//! The rate vector is piecewise smooth: it only changes its combinatorial
//! form when two distinct values of `f` meet. [`simulate`] therefore takes
//! explicit Euler steps that never jump over such a meeting: inside a step
//! `f` moves linearly, so the first meeting time of two values is solved
//! exactly and the step is cut there.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{
    convert, discrepancy_numerator, inner_w, norm_sq_w, Hypergraph, Space, StateVector,
};
use crate::operator::{equivalence_classes, rate_vector};

/// Smallest step accepted before the integrator gives up.
pub const MIN_STEP: f64 = 1e-15;

/// Per-step scalar diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `D̂(x_t)`, zero for the zero vector.
    pub rayleigh: f64,
    /// `||f||_w^2`.
    pub norm_sq: f64,
    /// `<f, L_w f>_w`.
    pub energy: f64,
    /// `||L_w f||_w^2`.
    pub lap_norm_sq: f64,
    /// `||φ_t - φ_t^*||_1`.
    pub l1_to_equilibrium: f64,
    /// `||Π x_t||_2`.
    pub projected_norm: f64,
    /// `<1, φ_t>`.
    pub total_measure: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Measure vectors.
    pub states: Vec<Vec<f64>>,
    pub diagnostics: Vec<Diagnostics>,
}

impl Trajectory {
    fn with_capacity(cap: usize) -> Self {
        Self {
            times: Vec::with_capacity(cap),
            states: Vec::with_capacity(cap),
            diagnostics: Vec::with_capacity(cap),
        }
    }

    fn push(&mut self, h: &Hypergraph, t: f64, phi: &[f64], r: &[f64]) {
        self.times.push(t);
        self.states.push(phi.to_vec());
        self.diagnostics.push(diagnostics(h, phi, r));
    }

    /// Builds a trajectory from recorded measure states, evaluating the
    /// diagnostics afresh.
    pub fn from_states(h: &Hypergraph, times: Vec<f64>, states: Vec<Vec<f64>>, tol: f64) -> Self {
        let diagnostics = states
            .iter()
            .map(|phi| diagnostics(h, phi, &rate_vector(h, &weighted_of(h, phi), tol)))
            .collect();
        Self { times, states, diagnostics }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> StateVector {
        StateVector::measure(self.states.last().cloned().unwrap_or_default())
    }

    /// Writes `t, phi_<node>..., rayleigh, l1_to_equilibrium` rows.
    pub fn write_csv<W: std::io::Write>(&self, h: &Hypergraph, out: W) -> csv::Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        header.extend(h.nodes().iter().map(|n| format!("phi_{n}")));
        header.push("rayleigh".into());
        header.push("l1_to_equilibrium".into());
        wtr.write_record(&header)?;
        for ((t, phi), d) in self.times.iter().zip(&self.states).zip(&self.diagnostics) {
            let mut row = vec![t.to_string()];
            row.extend(phi.iter().map(|v| v.to_string()));
            row.push(d.rayleigh.to_string());
            row.push(d.l1_to_equilibrium.to_string());
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn weighted_of(h: &Hypergraph, phi: &[f64]) -> Vec<f64> {
    phi.iter().zip(h.node_weights()).map(|(p, w)| p / w).collect()
}

/// `||φ - φ*||_1` where `φ*` redistributes the total of `φ` by weight.
pub fn l1_to_equilibrium(h: &Hypergraph, phi: &[f64]) -> f64 {
    let scale = phi.iter().sum::<f64>() / h.total_weight();
    phi.iter()
        .zip(h.node_weights())
        .map(|(p, w)| (p - scale * w).abs())
        .sum()
}

/// `||Π x||_2` for the normalized image `x = W^{-1/2} φ`.
pub fn projected_norm(h: &Hypergraph, phi: &[f64]) -> f64 {
    let scale = phi.iter().sum::<f64>() / h.total_weight();
    phi.iter()
        .zip(h.node_weights())
        .map(|(p, w)| {
            let d = (p - scale * w) / w.sqrt();
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn diagnostics(h: &Hypergraph, phi: &[f64], r: &[f64]) -> Diagnostics {
    let f = weighted_of(h, phi);
    let norm_sq = norm_sq_w(h, &f);
    let rayleigh = if norm_sq > 0.0 {
        discrepancy_numerator(h, &f) / norm_sq
    } else {
        0.0
    };
    Diagnostics {
        rayleigh,
        norm_sq,
        energy: -inner_w(h, &f, r),
        lap_norm_sq: norm_sq_w(h, r),
        l1_to_equilibrium: l1_to_equilibrium(h, phi),
        projected_norm: projected_norm(h, phi),
        total_measure: phi.iter().sum(),
    }
}

/// Earliest time at which two currently distinct values of `f` meet when
/// every node moves linearly with rate `r`. Only neighbouring classes can
/// meet first.
pub fn next_meeting_time(f: &[f64], r: &[f64], tol: f64) -> f64 {
    let (_, classes) = equivalence_classes(f, tol);
    let mut best = f64::INFINITY;
    for pair in classes.windows(2) {
        for &a in &pair[0] {
            for &b in &pair[1] {
                let closing = r[a] - r[b];
                if closing > 0.0 {
                    best = best.min((f[b] - f[a]) / closing);
                }
            }
        }
    }
    best
}

/// One explicit Euler step `φ += dt W r` in place.
#[inline]
pub fn euler_update(h: &Hypergraph, phi: &mut [f64], r: &[f64], dt: f64) {
    for ((p, w), r) in phi.iter_mut().zip(h.node_weights()).zip(r) {
        *p += dt * (w * r);
    }
}

/// Step-by-step integrator shared by the simulation entry points.
pub struct Integrator<'a> {
    h: &'a Hypergraph,
    pub t: f64,
    pub phi: Vec<f64>,
    pub tol: f64,
}

impl<'a> Integrator<'a> {
    pub fn new(h: &'a Hypergraph, phi0: &StateVector, tol: f64) -> Result<Self> {
        let phi = convert(h, phi0, Space::Measure)?.values;
        Ok(Self { h, t: 0.0, phi, tol })
    }

    pub fn rates(&self) -> Vec<f64> {
        rate_vector(self.h, &weighted_of(self.h, &self.phi), self.tol)
    }

    /// Advances by at most `dt_max`, stopping early at the next meeting of
    /// two values or at `t_end`.
    pub fn guarded_step(&mut self, r: &[f64], dt_max: f64, t_end: f64) -> Result<()> {
        let f = weighted_of(self.h, &self.phi);
        let remaining = t_end - self.t;
        let mut dt = dt_max.min(remaining);
        dt = dt.min(next_meeting_time(&f, r, self.tol));
        if dt < MIN_STEP {
            return Err(Error::StepUnderflow { t: self.t, dt, state: self.phi.clone() });
        }
        euler_update(self.h, &mut self.phi, r, dt);
        self.t = if dt == remaining { t_end } else { self.t + dt };
        Ok(())
    }
}

fn check_horizon(t_end: f64, dt: f64) -> Result<()> {
    if !(t_end > 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_end and step must be positive (got t_end = {t_end}, dt = {dt})"
        )));
    }
    Ok(())
}

/// Event-guarded Euler integration up to `t_end`, recording every step.
pub fn simulate(
    h: &Hypergraph,
    phi0: &StateVector,
    t_end: f64,
    dt_max: f64,
    tol: f64,
) -> Result<Trajectory> {
    check_horizon(t_end, dt_max)?;
    let mut it = Integrator::new(h, phi0, tol)?;
    let mut traj = Trajectory::with_capacity((t_end / dt_max) as usize + 2);
    loop {
        let r = it.rates();
        traj.push(h, it.t, &it.phi, &r);
        if it.t >= t_end {
            break;
        }
        it.guarded_step(&r, dt_max, t_end)?;
    }
    Ok(traj)
}

/// Number of steps of the fixed grid `0, dt, 2dt, ..., t_end` (last step
/// possibly shorter).
pub fn fixed_grid_steps(t_end: f64, dt: f64) -> usize {
    ((t_end / dt) - 1e-9).ceil().max(1.0) as usize
}

/// Length of step `k` on the fixed grid.
pub fn fixed_grid_dt(k: usize, steps: usize, t_end: f64, dt: f64) -> f64 {
    if k + 1 == steps {
        t_end - dt * k as f64
    } else {
        dt
    }
}

/// Plain Euler on a fixed grid without event guarding. This is the
/// noiseless limit of the Euler–Maruyama scheme.
pub fn simulate_fixed(
    h: &Hypergraph,
    phi0: &StateVector,
    t_end: f64,
    dt: f64,
    tol: f64,
) -> Result<Trajectory> {
    check_horizon(t_end, dt)?;
    let mut phi = convert(h, phi0, Space::Measure)?.values;
    let steps = fixed_grid_steps(t_end, dt);
    let mut traj = Trajectory::with_capacity(steps + 1);
    for k in 0..=steps {
        let r = rate_vector(h, &weighted_of(h, &phi), tol);
        let t = if k == steps { t_end } else { dt * k as f64 };
        traj.push(h, t, &phi, &r);
        if k == steps {
            break;
        }
        euler_update(h, &mut phi, &r, fixed_grid_dt(k, steps, t_end, dt));
    }
    Ok(traj)
}

/// One first-order derivative identity, finite difference
/// against the analytic value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeCheck {
    pub analytic: f64,
    pub finite_difference: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeReport {
    /// `d||f||_w^2/dt = -2 <f, L_w f>_w`.
    pub norm: DerivativeCheck,
    /// `d<f, L_w f>_w/dt = -2 ||L_w f||_w^2`.
    pub energy: DerivativeCheck,
    /// `dR_w/dt = -2 (||f||^2 ||L_w f||^2 - <f, L_w f>^2) / ||f||^4 <= 0`.
    pub rayleigh: DerivativeCheck,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks the three first-order derivative identities with one Euler step
/// of size `step` from weighted vector `f`.
///
/// Errors are relative to `max(|analytic|, scale)` where `scale` is the
/// Cauchy–Schwarz bound on the analytic value, so that identities whose
/// true derivative vanishes (eigenvectors, constant vectors) are still
/// judged on a meaningful scale.
pub fn derivative_checks(h: &Hypergraph, f: &[f64], step: f64) -> Result<DerivativeReport> {
    if f.len() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), got: f.len() });
    }
    let nf = norm_sq_w(h, f);
    if nf <= 0.0 {
        return Err(Error::ZeroVector);
    }
    if !(step > 0.0) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let tol = crate::operator::DEFAULT_TOL;
    let r = rate_vector(h, f, tol);
    let fr = inner_w(h, f, &r);
    let rr = norm_sq_w(h, &r);

    let g: Vec<f64> = f.iter().zip(&r).map(|(a, b)| a + step * b).collect();
    let r_g = rate_vector(h, &g, tol);
    let ng = norm_sq_w(h, &g);
    let energy_f = -fr;
    let energy_g = -inner_w(h, &g, &r_g);

    let check = |analytic: f64, fd: f64, scale: f64| {
        let denom = analytic.abs().max(scale).max(1e-300);
        DerivativeCheck {
            analytic,
            finite_difference: fd,
            relative_error: (fd - analytic).abs() / denom,
        }
    };
    let norm = check(2.0 * fr, (ng - nf) / step, 2.0 * nf.sqrt() * rr.sqrt());
    let energy = check(-2.0 * rr, (energy_g - energy_f) / step, 2.0 * rr);
    let rayleigh = check(
        -2.0 * (nf * rr - fr * fr) / (nf * nf),
        (energy_g / ng - energy_f / nf) / step,
        2.0 * rr / nf,
    );
    let tolerance = 1e-4f64.max(10.0 * step);
    let passed = [norm, energy, rayleigh]
        .iter()
        .all(|c| c.relative_error <= tolerance);
    Ok(DerivativeReport { norm, energy, rayleigh, tolerance, passed })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingReport {
    /// First simulated time with `||φ_t - φ*||_1 <= δ`.
    pub t_mix: f64,
    /// `(1/γ_2) log(1 / (δ sqrt(φ*_min)))`.
    pub bound: f64,
    pub gamma2: f64,
    pub within_bound: bool,
}

/// Mixing-time bound for `η = 0` and a probability start.
pub fn mixing_bound(h: &Hypergraph, delta: f64, gamma2: f64) -> f64 {
    let wmin = h.node_weights().iter().copied().fold(f64::INFINITY, f64::min);
    let phi_min = wmin / h.total_weight();
    (1.0 / gamma2) * (1.0 / (delta * phi_min.sqrt())).ln()
}

/// Simulates from a probability measure until it is `δ`-close to
/// equilibrium in `ℓ1` and compares with the mixing bound.
pub fn mixing_time(
    h: &Hypergraph,
    phi0: &StateVector,
    delta: f64,
    gamma2: f64,
    dt_max: f64,
) -> Result<MixingReport> {
    let phi = convert(h, phi0, Space::Measure)?.values;
    if phi.iter().any(|&p| p < 0.0) {
        return Err(Error::NotProbability("negative entry".into()));
    }
    let total: f64 = phi.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotProbability(format!("total measure {total} != 1")));
    }
    if !(delta > 0.0) || !(gamma2 > 0.0) {
        return Err(Error::InvalidArgument("delta and gamma2 must be positive".into()));
    }
    let bound = mixing_bound(h, delta, gamma2);
    let horizon = 4.0 * bound + 10.0;
    let mut it = Integrator::new(h, &StateVector::measure(phi), crate::operator::DEFAULT_TOL)?;
    loop {
        if l1_to_equilibrium(h, &it.phi) <= delta {
            let t_mix = it.t;
            return Ok(MixingReport { t_mix, bound, gamma2, within_bound: t_mix <= bound });
        }
        if it.t >= horizon {
            return Err(Error::NotMixed { horizon });
        }
        let r = it.rates();
        it.guarded_step(&r, dt_max, horizon)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::bundled;

    fn single_edge() -> Hypergraph {
        Hypergraph::new(vec!["u".into(), "v".into()], vec![(vec![0, 1], 1.0)]).unwrap()
    }

    #[test]
    fn single_edge_decays_at_rate_two() {
        let h = single_edge();
        let traj = simulate(&h, &StateVector::measure(vec![1.0, 0.0]), 2.0, 1e-4, 1e-9).unwrap();
        for (t, d) in traj.times.iter().zip(&traj.diagnostics) {
            // (1 - 2dt)^{t/dt} = e^{-2t} (1 - 2 t dt + ...)
            let exact = (-2.0 * t).exp();
            assert!((d.l1_to_equilibrium - exact).abs() <= 3.0 * t * 1e-4 * exact + 1e-12);
            assert!((d.total_measure - 1.0).abs() < 1e-12);
        }
        let last = traj.final_state();
        assert!((last.values[0] - 0.5 - 0.5 * (-4.0f64).exp()).abs() < 1e-3);
    }

    #[test]
    fn equilibrium_start_is_constant() {
        let h = bundled::nested5();
        let phi = StateVector::measure(h.node_weights().to_vec());
        let traj = simulate(&h, &phi, 1.0, 1e-2, 1e-9).unwrap();
        for s in &traj.states {
            assert_eq!(s, &phi.values);
        }
    }

    #[test]
    fn louis_eigenvector_stays_in_span() {
        let h = bundled::louis4();
        let phi0: Vec<f64> = [1.0, 1.0, -1.0, -1.0].iter().map(|f| 3.0 * f).collect();
        let traj = simulate(&h, &StateVector::measure(phi0), 1.0, 1e-3, 1e-9).unwrap();
        let last = traj.states.last().unwrap();
        let f: Vec<f64> = last.iter().map(|p| p / 3.0).collect();
        assert!((f[0] - f[1]).abs() < 1e-12 && (f[2] - f[3]).abs() < 1e-12);
        assert!((f[0] + f[2]).abs() < 1e-12);
        // (1 - γ dt)^k with γ = 2/3.
        let want = (1.0f64 - 2.0 / 3.0 * 1e-3).powi(1000);
        assert!((f[0] - want).abs() < 1e-9, "{} vs {}", f[0], want);
    }

    #[test]
    fn meeting_time_is_exact() {
        let f = [0.0, 1.0];
        let r = [1.0, -1.0];
        assert_eq!(next_meeting_time(&f, &r, 1e-9), 0.5);
        assert_eq!(next_meeting_time(&f, &[-1.0, 1.0], 1e-9), f64::INFINITY);
    }

    #[test]
    fn guarded_steps_land_on_meetings() {
        // a and c approach; the step must stop exactly where they meet.
        let h = bundled::twoedge4();
        let phi0 = StateVector::measure(vec![0.9, 0.0, 0.5, 0.1]);
        let traj = simulate(&h, &phi0, 0.5, 0.05, 1e-9).unwrap();
        assert!(traj.times.windows(2).any(|w| (w[1] - w[0] - 0.05).abs() > 1e-12));
        for d in &traj.diagnostics {
            assert!((d.total_measure - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_horizon() {
        let h = single_edge();
        let phi = StateVector::measure(vec![1.0, 0.0]);
        assert!(simulate(&h, &phi, 0.0, 1e-3, 1e-9).is_err());
        assert!(simulate(&h, &phi, 1.0, -1.0, 1e-9).is_err());
    }

    #[test]
    fn derivative_identities_at_eigenvector_and_constant() {
        let h = bundled::louis4();
        let rep = derivative_checks(&h, &[1.0, 1.0, -1.0, -1.0], 1e-6).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.rayleigh.analytic.abs() < 1e-15);
        let rep = derivative_checks(&h, &[2.0; 4], 1e-6).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.norm.analytic, 0.0);
        assert_eq!(rep.energy.analytic, 0.0);
        assert!(derivative_checks(&h, &[0.0; 4], 1e-6).is_err());
    }

    #[test]
    fn mixing_single_edge_matches_closed_form() {
        let h = single_edge();
        let rep = mixing_time(&h, &StateVector::measure(vec![1.0, 0.0]), 0.1, 2.0, 1e-3).unwrap();
        let exact = 10f64.ln() / 2.0;
        assert!((rep.t_mix - exact).abs() <= 0.02 * exact, "{} vs {exact}", rep.t_mix);
        assert!(rep.within_bound);
    }

    #[test]
    fn mixing_from_equilibrium_is_immediate() {
        let h = bundled::twoedge4();
        let phi = StateVector::measure(vec![0.2, 0.4, 0.2, 0.2]);
        assert_eq!(mixing_time(&h, &phi, 0.01, 0.5, 1e-3).unwrap().t_mix, 0.0);
        let bad = StateVector::measure(vec![0.5, 0.5, 0.5, -0.5]);
        assert!(matches!(
            mixing_time(&h, &bad, 0.01, 0.5, 1e-3),
            Err(Error::NotProbability(_))
        ));
    }
}
