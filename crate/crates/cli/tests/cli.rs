//! End-to-end checks of the command-line surface.

use std::path::Path;
use std::process::{Command, Output};

fn omdsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omdsc"))
        .args(args)
        .env_remove("OMDSC_BACKEND")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_reports_the_three_regimes() {
    let out = omdsc(&["classify", "case1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("Case (i): 2-competitive"));

    let out = omdsc(&["classify", "case2:5"]);
    assert!(stdout(&out).contains("Case (ii), k=5: Theta(log k / log log k)"));

    let out = omdsc(&["classify", "case2:1"]);
    assert!(stdout(&out).contains("1-competitive"));

    let out = omdsc(&["classify", "case2:2"]);
    assert!(stdout(&out).contains("3-competitive"));

    let out = omdsc(&["classify", "zeros:2,3"]);
    assert!(stdout(&out).contains("Case (iii): unbounded"));

    // General-mode penalties are not classifiable.
    let out = omdsc(&["classify", "ceil_div:3"]);
    assert!(!out.status.success());
}

#[test]
fn run_export_then_opt_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let instance_path = dir.path().join("instance.json");
    let transcript_path = dir.path().join("transcript.json");

    let out = omdsc(&[
        "run",
        "--alg",
        "tcp_ack",
        "--source",
        "poisson:2,10,5",
        "--penalty",
        "case1",
        "--export-instance",
        instance_path.to_str().unwrap(),
        "--out",
        transcript_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(instance_path.exists());

    let transcript: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&transcript_path).unwrap()).unwrap();
    assert_eq!(transcript["backend"], "exact");
    assert_eq!(transcript["termination"], "normal");

    let out = omdsc(&["opt", instance_path.to_str().unwrap()]);
    assert!(out.status.success());
    let solution: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(solution["method"], "dp");
    assert!(solution["groups"].as_array().unwrap().len() >= 1);
}

#[test]
fn duel_reports_round_adversary_bounds() {
    let out = omdsc(&[
        "duel",
        "--alg",
        "recurring:256",
        "--source",
        "lb:256",
        "--penalty",
        "case2:256",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["final_round"], 2);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
    // alpha/2 - 1 = 1 <= cost, offline optimum <= 4.
    let opt: f64 = parse_ratio(report["opt_cost"].as_str().unwrap());
    assert!(opt <= 4.0 + 1e-9);
    let alg: f64 = parse_ratio(report["alg_cost"].as_str().unwrap());
    assert!(alg >= 1.0);
}

fn parse_ratio(text: &str) -> f64 {
    match text.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => text.parse().unwrap(),
    }
}

#[test]
fn duel_is_deterministic_per_seed() {
    let run = || {
        let out = omdsc(&[
            "duel",
            "--alg",
            "tcp_ack",
            "--source",
            "poisson:1,30,seed=auto",
            "--penalty",
            "case1",
            "--seed",
            "9",
        ]);
        assert!(out.status.success());
        stdout(&out)
    };
    assert_eq!(run(), run());
}

#[test]
fn sweep_emits_stable_csv_with_bounded_norm() {
    let out = omdsc(&[
        "sweep",
        "--k",
        "16,81",
        "--trials",
        "2",
        "--backend",
        "float",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,trial,algorithm,source,backend,requests,alg_cost,opt_cost,opt_method,ratio,alpha_used,ratio_norm"
    );
    // Per source family (with a common optimum method), the normalized
    // ratio stays within a x3 band across k.
    let mut by_source: std::collections::BTreeMap<(String, String), Vec<f64>> = Default::default();
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 12, "row {line}");
        let family = cols[3].split(':').next().unwrap().to_string();
        let opt_method = cols[8].to_string();
        let norm: f64 = cols[11].parse().unwrap();
        assert!(norm.is_finite());
        by_source.entry((family, opt_method)).or_default().push(norm);
    }
    for ((family, method), norms) in &by_source {
        let max = norms.iter().cloned().fold(f64::MIN, f64::max);
        let min = norms.iter().cloned().fold(f64::MAX, f64::min);
        assert!(
            max <= 3.0 * min,
            "{family}/{method}: normalized ratios spread beyond x3: {norms:?}"
        );
    }
}

#[test]
fn config_file_defaults_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.toml");
    std::fs::write(&config, "backend = \"float\"\nseed = 3\n").unwrap();
    let out = omdsc(&[
        "run",
        "--alg",
        "immediate",
        "--source",
        "poisson:1,3,seed=auto",
        "--penalty",
        "linear",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["backend"], "float");

    // The flag wins over the file.
    let out = omdsc(&[
        "run",
        "--alg",
        "immediate",
        "--source",
        "poisson:1,3,seed=auto",
        "--penalty",
        "linear",
        "--config",
        config.to_str().unwrap(),
        "--backend",
        "exact",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["backend"], "exact");
}

#[test]
fn fixed_source_replays_written_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.json");
    std::fs::write(
        &path,
        r#"{"penalty":{"table":[1,0],"tail":"constant_one"},"arrivals":[{"t":"0/1","count":1},{"t":"1/2","count":1}]}"#,
    )
    .unwrap();
    let out = omdsc(&[
        "duel",
        "--alg",
        "tcp_ack",
        "--source",
        &format!("fixed:{}", path.display()),
        "--penalty",
        "case2:2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["requests"], 2);
}

#[test]
fn validate_passes_and_prints_criterion_lines() {
    let out = omdsc(&["validate"]);
    let text = stdout(&out);
    assert!(
        out.status.success(),
        "validate failed:\n{text}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for id in 1..=12 {
        assert!(
            text.contains(&format!("criterion {id:02}")),
            "missing criterion {id} in:\n{text}"
        );
    }
    assert!(!text.contains("FAIL"));
}

#[test]
fn env_var_sets_backend() {
    let out = Command::new(env!("CARGO_BIN_EXE_omdsc"))
        .args(["run", "--alg", "immediate", "--source", "poisson:1,2,1", "--penalty", "linear"])
        .env("OMDSC_BACKEND", "float")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["backend"], "float");
}

#[test]
fn missing_files_fail_cleanly() {
    let out = omdsc(&["opt", Path::new("/nonexistent/instance.json").to_str().unwrap()]);
    assert!(!out.status.success());
    let out = omdsc(&["classify", "zeros:not-a-number"]);
    assert!(!out.status.success());
}
