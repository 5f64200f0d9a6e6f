use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stationarity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).expect("valid JSON")
}

#[test]
fn eval_hedged_act() {
    let m = fixture("cdeu_04.json");
    let text = stdout(&["eval", "--model", &m, "--act", &fixture("f_hat.json")]);
    assert!(text.contains("V(act) = 5.92"), "{text}");

    let out = json(&[
        "eval",
        "--model",
        &m,
        "--act",
        &fixture("f_hat.json"),
        "--act2",
        &fixture("g_hat.json"),
    ]);
    let v = &out["verdict"];
    assert!((v["left"].as_f64().unwrap() - 5.92).abs() < 1e-12);
    assert!((v["right"].as_f64().unwrap() - 4.8).abs() < 1e-12);
    assert_eq!(v["relation"], "strictly-prefers-left");
}

#[test]
fn eval_constant_act_under_every_model() {
    for m in [
        "cdeu_04.json",
        "cdeu_06.json",
        "deu_even.json",
        "maxmin.json",
    ] {
        let out = json(&[
            "eval",
            "--model",
            &fixture(m),
            "--act",
            &fixture("constant.json"),
        ]);
        assert!((out["value"].as_f64().unwrap() - 15.0).abs() < 1e-12, "{m}");
    }
}

#[test]
fn malformed_inputs_exit_2() {
    let (bad_model, bad_cap, cap, missing, deu, act, constant) = (
        fixture("cdeu_not_monotone.json"),
        fixture("capacity_not_monotone.json"),
        fixture("capacity_core.json"),
        fixture("missing.json"),
        fixture("deu_even.json"),
        fixture("f_hat.json"),
        fixture("constant.json"),
    );
    let bad: [&[&str]; 9] = [
        &["eval", "--model", &bad_model, "--act", &constant],
        &["core", "--capacity", &bad_cap],
        &["core", "--capacity", &cap, "--objective", "1,2,3"],
        &["eval", "--model", &missing, "--act", &constant],
        &["axiom", "--model", &deu, "--axiom", "nope"],
        &["--eps", "0", "repro", "example1"],
        &["--eps", "-1e-9", "repro", "example1"],
        &["repro", "nope"],
        &["eval", "--model", &act, "--act", &constant],
    ];
    for args in bad {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn non_monotone_capacity_is_reported_with_labels() {
    let out = run(&["core", "--capacity", &fixture("capacity_not_monotone.json")]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("v({A}) = 0.5 exceeds v({A,B}) = 0.4"), "{err}");
}

#[test]
fn core_minimum() {
    let text = stdout(&[
        "core",
        "--capacity",
        &fixture("capacity_core.json"),
        "--objective",
        "5,1",
    ]);
    assert!(text.contains("min over core: 2.2"), "{text}");
    assert!(text.contains("minimizer: 1=0.3, 2=0.7"), "{text}");
    assert!(text.contains("choquet: 2.2 (delta 0)"), "{text}");

    let out = json(&[
        "core",
        "--capacity",
        &fixture("capacity_core.json"),
        "--objective",
        "5,1",
    ]);
    assert_eq!(out["convex"], true);
    assert!((out["value"].as_f64().unwrap() - 2.2).abs() < 1e-12);
    assert!(out["value_delta"].as_f64().unwrap() < 1e-9);
}

#[test]
fn empty_core() {
    let text = stdout(&[
        "core",
        "--capacity",
        &fixture("capacity_empty_core.json"),
        "--objective",
        "5,1",
    ]);
    assert!(text.contains("core: empty"), "{text}");
    assert!(text.contains("convex: no"), "{text}");
    let out = json(&[
        "core",
        "--capacity",
        &fixture("capacity_empty_core.json"),
        "--objective",
        "5,1",
    ]);
    assert_eq!(out["core_empty"], true);
    assert_eq!(out["status"], "empty_core");
    assert!(out["value"].is_null());
}

#[test]
fn additive_core_is_a_singleton() {
    let out = json(&["core", "--capacity", &fixture("capacity_additive.json")]);
    assert_eq!(out["additive"], true);
    assert_eq!(
        out["core_singleton"],
        serde_json::json!({"x": 0.2, "y": 0.3, "z": 0.5})
    );
}

#[test]
fn axiom_search_outcomes() {
    let out = json(&[
        "axiom",
        "--model",
        &fixture("cdeu_04.json"),
        "--axiom",
        "SS",
        "--trials",
        "100",
    ]);
    let v = &out["violation"];
    assert_eq!(v["verdict"]["status"], "violated");
    assert_eq!(
        v["verdict"]["instance"]["payload"]["inserted"],
        serde_json::json!([0.0, 7.0])
    );
    assert_eq!(out["states"], serde_json::json!(["A", "Ac"]));

    let out = json(&[
        "axiom",
        "--model",
        &fixture("cdeu_06.json"),
        "--axiom",
        "PS",
        "--trials",
        "100",
    ]);
    assert_eq!(out["violation"]["verdict"]["status"], "violated");

    let text = stdout(&[
        "axiom",
        "--model",
        &fixture("deu_even.json"),
        "--axiom",
        "SS",
        "--trials",
        "500",
    ]);
    assert!(
        text.starts_with("no violation of SS found in 500 trials"),
        "{text}"
    );
}

#[test]
fn repro_tables() {
    let text = stdout(&["repro", "example1"]);
    assert!(
        text.contains("f vs g      3.2   3.2    indifferent"),
        "{text}"
    );
    assert!(
        text.contains("f^ vs g^    5.92  4.8    strictly-prefers-left"),
        "{text}"
    );

    let out = json(&["repro", "solar-carbon"]);
    let rows = out["rows"].as_array().unwrap();
    assert_eq!(rows[0][2], 4.0);
    assert_eq!(rows[0][3], 4.0);
    assert_eq!(rows[0][4], "indifferent");
    assert!((rows[3][2].as_f64().unwrap() - 5.92).abs() < 1e-12);
    assert!((rows[3][3].as_f64().unwrap() - 4.8).abs() < 1e-12);

    for name in ["exchange", "core-identity"] {
        let out = json(&["repro", name]);
        let row = out["rows"][0].as_array().unwrap();
        assert_eq!(row.last().unwrap(), "yes", "{name}");
    }
}

#[test]
fn json_output_is_byte_identical() {
    let runs: [Vec<String>; 4] = [
        vec![
            "axiom".into(),
            "--model".into(),
            fixture("maxmin.json"),
            "--axiom".into(),
            "IH".into(),
            "--trials".into(),
            "200".into(),
            "--seed".into(),
            "7".into(),
        ],
        vec![
            "axiom".into(),
            "--model".into(),
            fixture("cdeu_04.json"),
            "--axiom".into(),
            "SS".into(),
        ],
        vec![
            "repro".into(),
            "core-identity".into(),
            "--seed".into(),
            "3".into(),
        ],
        vec![
            "core".into(),
            "--capacity".into(),
            fixture("capacity_core.json"),
            "--objective".into(),
            "5,1".into(),
        ],
    ];
    for args in runs {
        let mut full = vec!["--format", "json"];
        full.extend(args.iter().map(String::as_str));
        let a = run(&full);
        let b = run(&full);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
