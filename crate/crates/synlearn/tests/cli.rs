//! Black-box tests of the command-line binary: exit codes, emitted
//! files, and reproducibility of experiment outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_synlearn"))
}

fn asset(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("assets").join(rel)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn build_code_reports_dimensions_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["build-code", "--circuit"])
        .arg(asset("circuits/repetition_d3_r3.json"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("gauge rank      32"), "{text}");
    assert!(text.contains("measured gens   8"), "{text}");
    assert!(text.contains("logical qubits  1"), "{text}");
    let code: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("code.json")).unwrap())
            .unwrap();
    assert_eq!(code["gauge_rank"], 32);
    assert_eq!(code["logical_gens"].as_array().unwrap().len(), 2);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert!(manifest["command"].as_str().unwrap().starts_with("build-code"));
}

#[test]
fn build_code_names_the_malformed_token() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"n":3,"T":2,"checks":[{"t":0,"generators":["Q1"]}],"base_stabilizers":["Z1Z2"]}"#,
    )
    .unwrap();
    let out = bin().args(["build-code", "--circuit"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("\"Q1\""), "error must name the token: {err}");
}

#[test]
fn check_learnability_exit_codes() {
    // learnable single-site X model
    let out = bin()
        .args(["check-learnability", "--circuit"])
        .arg(asset("circuits/repetition_d3_r1.json"))
        .arg("--faults")
        .arg(asset("faults/repetition_d3_r1_x.json"))
        .args(["--p", "0.02"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("logical_learnable:  true"));

    // a generator pair differing by a logical shares a syndrome class
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("pair.json");
    std::fs::write(
        &pair,
        r#"[
            {"pauli": "X1@t1", "q": 0.03},
            {"pauli": "X1X2X3@t0X2X3@t1X1X2X3@t2", "q": 0.01}
        ]"#,
    )
    .unwrap();
    let out = bin()
        .args(["check-learnability", "--circuit"])
        .arg(asset("circuits/repetition_d3_r1.json"))
        .arg("--faults")
        .arg(&pair)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("logical_learnable:  false"));

    // missing file is an ordinary error
    let out = bin()
        .args(["check-learnability", "--circuit", "/nonexistent.json", "--faults"])
        .arg(&pair)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn estimate_refuses_unlearnable_models_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("pair.json");
    std::fs::write(
        &pair,
        r#"[
            {"pauli": "X1@t1", "q": 0.03},
            {"pauli": "X1X2X3@t0X2X3@t1X1X2X3@t2", "q": 0.01}
        ]"#,
    )
    .unwrap();
    let mut base = bin();
    base.args(["estimate", "--circuit"])
        .arg(asset("circuits/repetition_d3_r1.json"))
        .arg("--faults")
        .arg(&pair)
        .args(["--shots", "2000", "--seed", "3"]);
    let out = base.output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not logically learnable"), "{}", stderr(&out));

    let out = bin()
        .args(["estimate", "--circuit"])
        .arg(asset("circuits/repetition_d3_r1.json"))
        .arg("--faults")
        .arg(&pair)
        .args(["--shots", "2000", "--seed", "3", "--force"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn estimate_then_predict_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["estimate", "--circuit"])
        .arg(asset("circuits/repetition_d3_r1.json"))
        .arg("--faults")
        .arg(asset("faults/repetition_d3_r1_x.json"))
        .args(["--p", "0.02", "--shots", "300000", "--seed", "11", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let est_path = dir.path().join("estimate.json");
    let est: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&est_path).unwrap()).unwrap();
    assert_eq!(est["shots"], 300_000);
    assert!(!est["classes"].as_array().unwrap().is_empty());

    let out = bin()
        .args(["predict-lep", "--estimate"])
        .arg(&est_path)
        .args(["--logical", "0", "--max-order", "5", "--exact", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let predicted = report["p_l_predicted"].as_f64().unwrap();
    let exact = report["p_l_true"].as_f64().unwrap();
    assert!(
        (predicted - exact).abs() / exact < 0.25,
        "predicted {predicted} vs exact {exact}"
    );
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn estimate_surfaces_sampler_refusal_for_negative_rates() {
    let dir = tempfile::tempdir().unwrap();
    let signed = dir.path().join("signed.json");
    std::fs::write(
        &signed,
        r#"[
            {"pauli": "X1@t0", "q": 0.02},
            {"pauli": "X2@t0", "q": -0.005}
        ]"#,
    )
    .unwrap();
    let out = bin()
        .args(["estimate", "--circuit"])
        .arg(asset("circuits/repetition_d3_r1.json"))
        .arg("--faults")
        .arg(&signed)
        .args(["--shots", "1000", "--force"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot be sampled"), "{}", stderr(&out));
}

#[test]
fn estimate_reports_nonpositive_eigenvalue_rows_and_clamps() {
    let dir = tempfile::tempdir().unwrap();
    let hot = dir.path().join("hot.json");
    // rates near 1/2 make eigenvalues tiny, so 2 shots cannot resolve them
    let entries: Vec<serde_json::Value> = (1..=3)
        .flat_map(|q| {
            (0..=2).map(move |t| {
                serde_json::json!({"pauli": format!("X{q}@t{t}"), "q": 0.45})
            })
        })
        .collect();
    std::fs::write(&hot, serde_json::to_string(&entries).unwrap()).unwrap();
    let out = bin()
        .args(["estimate", "--circuit"])
        .arg(asset("circuits/repetition_d3_r1.json"))
        .arg("--faults")
        .arg(&hot)
        .args(["--shots", "2", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nonpositive"), "{}", stderr(&out));

    let out = bin()
        .args(["estimate", "--circuit"])
        .arg(asset("circuits/repetition_d3_r1.json"))
        .arg("--faults")
        .arg(&hot)
        .args(["--shots", "2", "--seed", "1", "--clamp", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("floored at 1/shots"), "{}", stdout(&out));
    let est: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("estimate.json")).unwrap())
            .unwrap();
    assert_eq!(est["tainted"], true);
}

#[test]
fn experiment_outputs_are_reproducible_and_plottable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mini.json");
    std::fs::write(
        &cfg,
        serde_json::to_string(&serde_json::json!({
            "circuit": asset("circuits/repetition_d3_r3.json"),
            "faults": asset("faults/repetition_d3_r3_x.json"),
            "p_grid": [2e-3],
            "shot_grid": [3000, 10000, 30000],
            "trials": 4,
            "seed": 5
        }))
        .unwrap(),
    )
    .unwrap();
    let run = |out_dir: &Path| {
        let out = bin()
            .args(["experiment", "accuracy-vs-shots", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out_dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&a);
    run(&b);
    for name in ["manifest.json", "result.json", "points.csv", "chart.svg"] {
        assert!(a.join(name).exists(), "{name} missing");
    }
    // identical seeds must reproduce the data bytes exactly
    assert_eq!(
        std::fs::read(a.join("points.csv")).unwrap(),
        std::fs::read(b.join("points.csv")).unwrap()
    );
    let svg = std::fs::read_to_string(a.join("chart.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<circle"));

    let out = bin()
        .args(["plot", "--result"])
        .arg(a.join("result.json"))
        .arg("--out")
        .arg(a.join("replot.svg"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let replot = std::fs::read_to_string(a.join("replot.svg")).unwrap();
    assert!(replot.contains("</svg>"));
}

#[test]
fn thread_override_env_is_accepted() {
    let out = bin()
        .env("SYNLEARN_THREADS", "1")
        .args(["build-code", "--circuit"])
        .arg(asset("circuits/repetition_d3_r1.json"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let out = bin().args(["estimate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["--help"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("build-code"));
}
