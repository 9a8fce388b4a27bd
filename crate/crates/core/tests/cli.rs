use std::process::{Command, Output};

use serde_json::Value;

fn hyperlap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlap")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn close(v: &Value, want: &[f64], tol: f64) {
    let got: Vec<f64> = v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
    }
}

#[test]
fn apply_louis4() {
    let out = hyperlap(&["apply", "--instance", "louis4", "--vector", "1,1,-1,-1", "--space", "weighted"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let t = 2.0 / 3.0;
    close(&v["result"]["laplacian_weighted"], &[t, t, -t, -t], 1e-12);
    assert!(v["result"]["energy_residual"].as_f64().unwrap() < 1e-12);
    let header = &v["header"];
    assert_eq!(header["instance_hash"].as_str().unwrap().len(), 64);
    assert_eq!(header["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(header["tol"].as_f64(), Some(1e-9));
}

#[test]
fn apply_even_split_and_negative_first_value() {
    let out = hyperlap(&["apply", "--instance", "louis4", "--vector", "1,1,-1,-1", "--even-split"]);
    close(&json(&out)["result"]["laplacian_weighted"], &[1.0 / 3.0, 1.0, -2.0 / 3.0, -2.0 / 3.0], 1e-12);
    let out = hyperlap(&["apply", "--instance", "louis4", "--vector", "-1,-1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn spectrum_twoedge4() {
    let out = hyperlap(&["spectrum", "--instance", "twoedge4", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let gammas = v["result"]["gammas"].as_array().unwrap();
    let g = |k: usize| gammas.iter().find(|g| g["k"] == k).unwrap()["gamma"].as_f64().unwrap();
    assert!((g(2) - (5.0 - 5f64.sqrt()) / 4.0).abs() < 1e-6);
    assert!((g(3) - (11.0 + 5f64.sqrt()) / 8.0).abs() < 1e-6);
    assert_eq!(v["header"]["seed"], 7);
}

#[test]
fn output_is_deterministic() {
    let args = ["spectrum", "--instance", "nested5", "--k", "3", "--restarts", "16", "--seed", "3"];
    assert_eq!(hyperlap(&args).stdout, hyperlap(&args).stdout);
}

#[test]
fn verify_exit_codes_and_priors_file() {
    let ok = hyperlap(&["verify", "--instance", "louis4", "--k", "2", "--gamma", "0.666666667"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = hyperlap(&["verify", "--instance", "louis4", "--k", "2", "--gamma", "0.68"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(json(&bad)["result"]["counterexample"].is_array());

    let dir = tempfile::tempdir().unwrap();
    let priors = dir.path().join("priors.json");
    std::fs::write(&priors, "[[1,1,1,1,1],[1,1,1,-4,-4]]").unwrap();
    let p = priors.to_str().unwrap();
    let out = hyperlap(&["verify", "--instance", "nested5", "--k", "3", "--gamma", "1.1414141", "--priors", p]);
    assert_eq!(out.status.code(), Some(0));
    let wrong_k = hyperlap(&["verify", "--instance", "nested5", "--k", "2", "--gamma", "0.8", "--priors", p]);
    assert_eq!(wrong_k.status.code(), Some(2));
}

#[test]
fn simulate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let p = path.to_str().unwrap();
    let out = hyperlap(&["simulate", "--instance", "louis4", "--phi0", "1,0,0,0", "--t-end", "1", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,phi_a,phi_b,phi_c,phi_d,rayleigh,l1_to_equilibrium");
    assert!(lines.count() > 100);
}

#[test]
fn sde_requires_seed_and_writes_stats() {
    let base = ["sde", "--instance", "louis4", "--eta", "0.1", "--t-end", "1", "--traj", "8", "--checkpoints", "0.5,1"];
    let missing = hyperlap(&base);
    assert_eq!(missing.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stats.json");
    let mut args = base.to_vec();
    args.extend(["--seed", "42", "--out", path.to_str().unwrap()]);
    let out = hyperlap(&args);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["header"]["seed"], 42);
    assert_eq!(v["result"]["checkpoints"].as_array().unwrap().len(), 2);
    assert_eq!(out.stdout, hyperlap(&args).stdout);
}

#[test]
fn input_errors_exit_2() {
    let missing = hyperlap(&["apply", "--instance", "/no/such/instance.json", "--vector", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/no/such/instance.json"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    std::fs::write(&path, r#"{"nodes":["a","b"],"edges":[{"nodes":["a","b"],"weight":0}]}"#).unwrap();
    let zero = hyperlap(&["apply", "--instance", path.to_str().unwrap(), "--vector", "1,0"]);
    assert_eq!(zero.status.code(), Some(2));

    let unknown = hyperlap(&["apply", "--instance", "louis4", "--vector", "1,1,1,1", "--frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    let short = hyperlap(&["apply", "--instance", "louis4", "--vector", "1,1"]);
    assert_eq!(short.status.code(), Some(2));
    let nan = hyperlap(&["apply", "--instance", "louis4", "--vector", "1,nan,1,1"]);
    assert_eq!(nan.status.code(), Some(2));
}

#[test]
fn examples_subset_json() {
    let out = hyperlap(&["examples", "--only", "1,4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let crit = v["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 2);
    assert!(crit.iter().all(|c| c["passed"] == true));
    let bad = hyperlap(&["examples", "--only", "12"]);
    assert_eq!(bad.status.code(), Some(2));
}
