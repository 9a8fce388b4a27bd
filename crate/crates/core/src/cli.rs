//! The `hyperlap` command line.
//!
//! Every subcommand prints JSON carrying a reproducibility header (instance
//! hash, tool version, seed, tolerance). Exit codes: 0 ok, 1 a verification
//! or acceptance check failed, 2 bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::diffusion::simulate;
use crate::golden::{self, CriterionReport};
use crate::hypergraph::{load_instance, Hypergraph, Space, StateVector};
use crate::operator::{apply_even_split_operator, apply_operator, DEFAULT_TOL};
use crate::spectral::{procedural_minimizers, SpectralOptions, DEFAULT_RESTARTS};
use crate::stochastic::{ensemble_stats, SdeConfig};
use crate::verify::{verify_gamma, VerifyMethod};
use crate::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "hyperlap", version, about = "Diffusion-based hypergraph Laplacian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the operator at one vector.
    Apply(ApplyArgs),
    /// Integrate the deterministic diffusion and write the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Run an ensemble of stochastic diffusions and summarize it.
    Sde(SdeArgs),
    /// Compute procedural minimizers gamma_2..gamma_k.
    Spectrum(SpectrumArgs),
    /// Certify a lower bound on the constrained discrepancy minimum.
    Verify(VerifyArgs),
    /// Run the golden acceptance suite.
    Examples(ExamplesArgs),
}

#[derive(Debug, Args)]
struct InstanceArg {
    /// Bundled instance name (louis4, nested5, twoedge4) or a JSON file.
    #[arg(long)]
    instance: String,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    #[command(flatten)]
    instance: InstanceArg,
    /// Comma-separated values, one per node.
    #[arg(long, allow_hyphen_values = true)]
    vector: String,
    #[arg(long, default_value = "weighted", value_parser = parse_space)]
    space: Space,
    /// Split each edge's flow evenly instead of by peeling.
    #[arg(long)]
    even_split: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    instance: InstanceArg,
    /// Initial measure, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    phi0: String,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt_max: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SdeArgs {
    #[command(flatten)]
    instance: InstanceArg,
    /// Initial measure; defaults to unit mass on the first node.
    #[arg(long, allow_hyphen_values = true)]
    phi0: Option<String>,
    #[arg(long)]
    eta: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long)]
    t_end: f64,
    /// Number of trajectories.
    #[arg(long)]
    traj: usize,
    #[arg(long)]
    seed: u64,
    /// Comma-separated checkpoint times.
    #[arg(long)]
    checkpoints: String,
    /// Spectral gap; computed from the instance when omitted.
    #[arg(long)]
    gamma2: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    instance: InstanceArg,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = crate::spectral::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Pg,
    Face,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArg,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    gamma: f64,
    /// JSON array of the k-1 prior weighted vectors. Defaults to the
    /// all-ones vector, which is only enough for k = 2.
    #[arg(long)]
    priors: Option<PathBuf>,
    #[arg(long, default_value_t = crate::verify::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "pg")]
    method: Method,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct ExamplesArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Run only these criteria (comma-separated ids).
    #[arg(long, value_delimiter = ',')]
    only: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct Header {
    instance: String,
    instance_hash: String,
    version: &'static str,
    seed: Option<u64>,
    tol: f64,
}

#[derive(Debug, Serialize)]
struct Output<T: Serialize> {
    header: Header,
    result: T,
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::FlowInfeasible { .. } | Error::StepUnderflow { .. } | Error::NotMixed { .. } => 1,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Apply(a) => apply(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Sde(a) => sde(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Verify(a) => verify(a),
        Command::Examples(a) => examples(a),
    }
}

fn parse_space(s: &str) -> Result<Space, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| input_error(format!("--{flag}: {t:?} is not a finite number")))
        })
        .collect()
}

fn parse_vector(h: &Hypergraph, flag: &str, s: &str) -> Result<Vec<f64>, Failure> {
    let v = parse_list(flag, s)?;
    if v.len() != h.n() {
        return Err(input_error(format!("--{flag}: expected {} values, got {}", h.n(), v.len())));
    }
    Ok(v)
}

fn positive(flag: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(input_error(format!("--{flag} must be positive, got {v}")))
    }
}

fn header(name: &str, h: &Hypergraph, seed: Option<u64>, tol: f64) -> Header {
    Header { instance: name.to_string(), instance_hash: h.content_hash(), version: VERSION, seed, tol }
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

/// Prints `value` as JSON, also to `out` when given.
fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    if let Some(p) = out {
        write_text(p, &text)?;
    }
    std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure { code: 2, message: e.to_string() })
}

#[derive(Serialize)]
struct ApplyOutput {
    space: Space,
    input: Vec<f64>,
    even_split: bool,
    r: Vec<f64>,
    laplacian_weighted: Vec<f64>,
    rho: Vec<f64>,
    layers: Vec<crate::operator::PeelLayer>,
    energy_residual: f64,
    net_flow: f64,
}

fn apply(a: ApplyArgs) -> CmdResult {
    positive("tol", a.tol)?;
    let h = load_instance(&a.instance.instance)?;
    let input = parse_vector(&h, "vector", &a.vector)?;
    let v = StateVector::new(a.space, input.clone());
    let res = if a.even_split {
        apply_even_split_operator(&h, &v, a.tol)?
    } else {
        apply_operator(&h, &v, a.tol)?
    };
    let result = ApplyOutput {
        space: a.space,
        input,
        even_split: a.even_split,
        laplacian_weighted: res.laplacian_weighted(),
        energy_residual: res.energy_residual(&h),
        net_flow: res.net_flow(),
        r: res.r,
        rho: res.rho,
        layers: res.layers,
    };
    emit(&Output { header: header(&a.instance.instance, &h, None, a.tol), result }, None)?;
    Ok(0)
}

#[derive(Serialize)]
struct SimulateOutput {
    out: String,
    rows: usize,
    final_phi: Vec<f64>,
    final_l1_to_equilibrium: f64,
}

fn simulate_cmd(a: SimulateArgs) -> CmdResult {
    positive("t-end", a.t_end)?;
    positive("dt-max", a.dt_max)?;
    positive("tol", a.tol)?;
    let h = load_instance(&a.instance.instance)?;
    let phi0 = StateVector::measure(parse_vector(&h, "phi0", &a.phi0)?);
    let traj = simulate(&h, &phi0, a.t_end, a.dt_max, a.tol)?;
    let mut buf = Vec::new();
    traj.write_csv(&h, &mut buf).map_err(|e| input_error(e.to_string()))?;
    std::fs::write(&a.out, &buf).map_err(|e| input_error(format!("cannot write {}: {e}", a.out.display())))?;
    let result = SimulateOutput {
        out: a.out.display().to_string(),
        rows: traj.len(),
        final_phi: traj.final_state().values,
        final_l1_to_equilibrium: traj.diagnostics.last().map_or(0.0, |d| d.l1_to_equilibrium),
    };
    emit(&Output { header: header(&a.instance.instance, &h, None, a.tol), result }, None)?;
    Ok(0)
}

fn sde(a: SdeArgs) -> CmdResult {
    let h = load_instance(&a.instance.instance)?;
    let phi0 = match &a.phi0 {
        Some(s) => parse_vector(&h, "phi0", s)?,
        None => {
            let mut v = vec![0.0; h.n()];
            v[0] = 1.0;
            v
        }
    };
    let checkpoints = parse_list("checkpoints", &a.checkpoints)?;
    let cfg = SdeConfig { eta: a.eta, dt: a.dt, t_end: a.t_end, n_trajectories: a.traj, seed: a.seed };
    cfg.validate()?;
    let gamma2 = match a.gamma2 {
        Some(g) => {
            positive("gamma2", g)?;
            g
        }
        None => {
            let opts = SpectralOptions { seed: a.seed, tol: a.tol, ..Default::default() };
            procedural_minimizers(&h, 2, &opts)?.gamma(2).expect("k = 2 requested")
        }
    };
    let stats = ensemble_stats(&h, &StateVector::measure(phi0), &cfg, &checkpoints, gamma2, a.tol)?;
    let out = Output { header: header(&a.instance.instance, &h, Some(a.seed), a.tol), result: stats };
    emit(&out, a.out.as_deref())?;
    Ok(0)
}

fn spectrum(a: SpectrumArgs) -> CmdResult {
    if a.k < 2 || a.restarts == 0 {
        return Err(input_error("--k must be at least 2 and --restarts positive"));
    }
    positive("tol", a.tol)?;
    let h = load_instance(&a.instance.instance)?;
    if a.k > h.n() {
        return Err(input_error(format!("--k {} exceeds the node count {}", a.k, h.n())));
    }
    let opts = SpectralOptions { restarts: a.restarts, seed: a.seed, tol: a.tol, ..Default::default() };
    let res = procedural_minimizers(&h, a.k, &opts)?;
    let out = Output { header: header(&a.instance.instance, &h, Some(a.seed), a.tol), result: res };
    emit(&out, a.out.as_deref())?;
    Ok(0)
}

fn verify(a: VerifyArgs) -> CmdResult {
    positive("tol", a.tol)?;
    if !a.gamma.is_finite() {
        return Err(input_error("--gamma must be finite"));
    }
    let h = load_instance(&a.instance.instance)?;
    let priors: Vec<Vec<f64>> = match &a.priors {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| Error::Io { path: p.display().to_string(), source })?;
            serde_json::from_str(&text).map_err(Error::from)?
        }
        None => vec![vec![1.0; h.n()]],
    };
    if priors.len() + 1 != a.k {
        return Err(input_error(format!("--k {} needs {} prior vectors, got {}", a.k, a.k - 1, priors.len())));
    }
    let method = match a.method {
        Method::Pg => VerifyMethod::ProjectedGradient,
        Method::Face => VerifyMethod::FaceEnumeration,
    };
    let cert = verify_gamma(&h, &priors, a.gamma, a.tol, method)?;
    let code = if cert.verified { 0 } else { 1 };
    let out = Output { header: header(&a.instance.instance, &h, None, a.tol), result: cert };
    emit(&out, a.out.as_deref())?;
    Ok(code)
}

#[derive(Serialize)]
struct ExamplesOutput {
    version: &'static str,
    passed: bool,
    criteria: Vec<CriterionReport>,
}

fn examples(a: ExamplesArgs) -> CmdResult {
    if let Some(bad) = a.only.iter().find(|&&i| i == 0 || i > golden::CRITERIA) {
        return Err(input_error(format!("--only: no criterion {bad} (ids are 1..={})", golden::CRITERIA)));
    }
    let ids: Vec<usize> = if a.only.is_empty() { (1..=golden::CRITERIA).collect() } else { a.only };
    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        let r = golden::run_criterion(id);
        if a.format == Format::Text {
            println!("{}", r.line());
            for c in r.failures().skip(1) {
                println!("       -- {c}");
            }
        }
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    match a.format {
        Format::Json => emit(&ExamplesOutput { version: VERSION, passed, criteria: reports }, None)?,
        Format::Text => {
            let n = reports.iter().filter(|r| r.passed).count();
            println!("{n}/{} criteria passed", reports.len());
        }
    }
    Ok(if passed { 0 } else { 1 })
}
