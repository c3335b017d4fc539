use std::process::{Command, Output};

use qcloseness::qlin::{read_state_file, StateVector};

fn qcloseness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcloseness"))
        .args(args)
        .env_remove("QCLOSENESS_SEED")
        .env_remove("QCLOSENESS_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exact_report_for_zero_and_plus() {
    let o = qcloseness(&["exact", "--state-a", "family:basis(k=1)", "--state-b", "family:hadamard(k=1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "T=0.707107, F=0.707107, F²=0.500000, p_err=0.146447\n");
}

#[test]
fn exit_codes() {
    let o = qcloseness(&["estimate", "--eps", "1.5", "--state-a", "family:basis(k=1)", "--state-b", "family:basis(k=1)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());

    let o = qcloseness(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));

    let o = qcloseness(&["exact", "--state-a", "/definitely/not/here.json", "--state-b", "family:basis(k=1)"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = qcloseness(&["exact", "--state-a", bad.to_str().unwrap(), "--state-b", "family:basis(k=1)"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());

    // a phase register beyond the simulator limit is a runtime failure
    let o = qcloseness(&["estimate", "--eps", "1e-9", "--state-a", "family:basis(k=1)", "--state-b", "family:hadamard(k=1)"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(o.stdout.is_empty());
}

#[test]
fn saved_states_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcloseness(&[
        "exact",
        "--state-a",
        "family:haar(k=3,seed=11)",
        "--state-b",
        "family:pminus(eps=0.1,n=8)",
        "--save-states",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let a = read_state_file(dir.path().join("state_a.json")).unwrap();
    let b = read_state_file(dir.path().join("state_b.json")).unwrap();
    assert!(!a.renormalized && !b.renormalized);
    let want_a: StateVector = "family:haar(k=3,seed=11)".parse::<qcloseness::cli::StateFamily>().unwrap().state().unwrap();
    let want_b: StateVector = "pminus(eps=0.1,n=8)".parse::<qcloseness::cli::StateFamily>().unwrap().state().unwrap();
    assert!(a.state.max_distance(&want_a) < 1e-12);
    assert!(b.state.max_distance(&want_b) < 1e-12);

    // the files feed back into the CLI and give the same report
    let again = qcloseness(&[
        "exact",
        "--state-a",
        dir.path().join("state_a.json").to_str().unwrap(),
        "--state-b",
        dir.path().join("state_b.json").to_str().unwrap(),
    ]);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn unnormalized_files_are_renormalized_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    std::fs::write(&path, "[[2.0, 0.0], [0.0, 0.0]]").unwrap();
    let o = qcloseness(&["exact", "--state-a", path.to_str().unwrap(), "--state-b", "family:basis(k=1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("renormalized"));
    assert!(stdout(&o).starts_with("T=0.000000"));
}

#[test]
fn estimate_json_report() {
    let o = qcloseness(&[
        "estimate", "--method", "td", "--eps", "0.05", "--state-a", "family:basis(k=1)", "--state-b",
        "family:hadamard(k=1)", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["method"], "optimal_td");
    assert_eq!(v["queries_or_samples"], 511);
    assert!((v["estimate"].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert!(v["abs_error"].as_f64().unwrap() < 1e-12);
    assert!((v["helstrom_error"].as_f64().unwrap() - 0.1464466094).abs() < 1e-9);
}

#[test]
fn sample_method_reports_samples() {
    let o = qcloseness(&[
        "estimate", "--method", "folklore_sample_f2", "--eps", "0.1", "--state-a", "family:basis(k=1)", "--state-b",
        "family:hadamard(k=1)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("samples=359"), "{}", stdout(&o));
}

#[test]
fn sweep_writes_csv_with_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = qcloseness(&["sweep", "--method", "optimal_td", "--qubits", "2", "--seed", "4", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "schema,method,eps,trials,success_rate,mean_queries,exact_value,seed");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("1,optimal_td,0.1,100,"));
    let exponent: f64 = lines[5].trim_start_matches("# exponent=").parse().unwrap();
    assert!((0.8..=1.2).contains(&exponent));
}

#[test]
fn env_overrides_seed() {
    let run = |seed: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qcloseness"));
        c.args(["swap-test", "--state-a", "family:haar(k=1,seed=1)", "--state-b", "family:haar(k=1,seed=2)", "--shots", "500"]);
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        c.env_remove("QCLOSENESS_SEED");
        if let Some(s) = seed {
            c.env("QCLOSENESS_SEED", s);
        }
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    assert_eq!(run(Some("9"), None), run(None, Some("9")));
    assert_ne!(run(Some("9"), None), run(Some("10"), None));
}

#[test]
fn distinguish_prints_success_rate() {
    let o = qcloseness(&["distinguish", "--which", "td", "--eps", "0.1", "--n", "8", "--trials", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rate: f64 = out.split("success_rate=").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    let floor: f64 = out.split("floor=").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(rate >= floor, "{out}");
}
