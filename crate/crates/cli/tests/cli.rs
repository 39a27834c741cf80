use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcrit"))
        .args(args)
        .env_remove("QCRIT_FORMAT")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("one JSON document")
}

fn text(args: &[&str]) -> String {
    String::from_utf8(run(args).stdout).unwrap()
}

#[test]
fn digital_comparison_text() {
    assert_eq!(text(&["cmp", "3", "6", "--p", "2"]).trim(), "3 <_2 6");
    assert_eq!(json(&["cmp", "6", "3", "--p", "2"])["order"], "greater");
}

#[test]
fn criticals_with_39() {
    let set = json(&["criticals", "--p", "2", "--lambda", "10", "--base"]);
    assert_eq!(set["q"], 1024);
    assert!(set["set"].as_array().unwrap().contains(&Value::from(39)));
    let full = json(&[
        "criticals",
        "--p",
        "2",
        "--lambda",
        "10",
        "--bound",
        "50000",
    ]);
    assert!(full["set"]
        .as_array()
        .unwrap()
        .contains(&Value::from(40959)));
    // Text mode lists the same set.
    let t = text(&["criticals", "--p", "2", "--lambda", "2", "--base"]);
    assert!(t.trim().ends_with(": 1 3"), "{t}");
    assert_eq!(
        json(&["criticals", "--p", "2", "--lambda", "2", "--base"])["set"],
        serde_json::json!([1, 3])
    );
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let bad = run(&["core", "5", "--p", "4"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage"));
    assert!(bad.stdout.is_empty());
    assert_eq!(
        run(&["witness", "1", "3", "1", "4", "--p", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["core", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn witness_and_admissibility() {
    let w = json(&["witness", "1", "2", "1", "3", "--p", "2"]);
    assert_eq!(w["quad"], serde_json::json!([1, 2, 1, 3]));
    assert_eq!(
        w["witness"],
        serde_json::json!({"e": 2, "f": 1, "g": 1, "r": 1})
    );
    assert_eq!(
        json(&["admissible", "1", "2", "1", "3"])["admissible"],
        true
    );
    let all = json(&["admissible", "--m-bound", "3"]);
    assert_eq!(all["quadruples"], serde_json::json!([[1, 2, 1, 3]]));
    assert_eq!(json(&["lucas", "5", "2", "--p", "2"])["value"], 0);
}

#[test]
fn verify_json_is_deterministic_without_timing() {
    let args = [
        "verify",
        "main",
        "--p",
        "2",
        "--lambda",
        "2",
        "--n",
        "2",
        "--trials",
        "5",
        "--prec",
        "40",
        "--seed",
        "3",
        "--no-timing",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["statement"], "main");
    assert_eq!(v["pass"], true);
    assert_eq!(v["elapsed_ms"], 0);
    let t = text(&["verify", "main", "--trials", "3", "--prec", "20"]);
    assert!(t.starts_with("PASS main"), "{t}");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("qcrit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mu.json");
    let out = run(&[
        "mu",
        "5",
        "--p",
        "2",
        "--lambda",
        "2",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["mu"], 1);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn series_pipeline() {
    let dir = std::env::temp_dir().join(format!("qcrit-series-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, v: &Value| {
        let p = dir.join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p.to_str().unwrap().to_string()
    };
    let common = ["--p", "2", "--lambda", "2", "--n", "2", "--prec", "40"];
    let with = |args: &[&str]| {
        let mut v: Vec<&str> = args.to_vec();
        v.extend(common);
        json(&v)
    };
    let u = with(&["series", "eval", "random-unit", "--seed", "5"]);
    assert_eq!(
        u["field"],
        serde_json::json!({"p": 2, "n": 2, "modulus": [1, 1, 1]})
    );
    let g = with(&[
        "series",
        "eval",
        "random-gamma",
        "--seed",
        "6",
        "--factors",
        "2",
    ]);
    assert!(g.get("terms").is_some());
    let (uf, gf) = (write("u.json", &u), write("g.json", &g));

    // psi_q(D(F o gamma)) = gamma^{-1} . psi_q(D F), assembled from subcommands.
    let composed = with(&["series", "compose", &uf, &gf]);
    let lhs = with(&[
        "series",
        "psi",
        &write(
            "d1.json",
            &with(&["series", "logderiv", &write("c.json", &composed)]),
        ),
    ]);
    let inv = with(&["series", "invert", &gf]);
    let psi = with(&[
        "series",
        "psi",
        &write("d2.json", &with(&["series", "logderiv", &uf])),
    ]);
    let dense_inv = {
        let parsed: qcrit::AdditiveSeries = serde_json::from_value(inv).unwrap();
        parsed.to_series()
    };
    let rhs = with(&[
        "series",
        "compose",
        &write("ginv.json", &serde_json::to_value(&dense_inv).unwrap()),
        &write("psi.json", &psi),
    ]);
    assert_eq!(
        lhs["coeffs"].as_array().unwrap()[..41],
        rhs["coeffs"].as_array().unwrap()[..41]
    );

    // Multiplicative and compositional inverses.
    let uinv = with(&["series", "invert", &uf]);
    let prod: qcrit::TruncSeries = serde_json::from_value(u.clone()).unwrap();
    let inv: qcrit::TruncSeries = serde_json::from_value(uinv).unwrap();
    assert!(prod.mul(&inv).unwrap().coeffs()[1..]
        .iter()
        .all(|c| c.is_zero()));
    let rev = with(&["series", "invert", "--reversion", &gf]);
    assert_eq!(
        rev["coeffs"],
        serde_json::to_value(&dense_inv).unwrap()["coeffs"]
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn named_constructions() {
    let ah = json(&["series", "eval", "artin-hasse", "--prec", "4"]);
    assert_eq!(ah["coeffs"], serde_json::json!([[1], [1], [1], [0], [0]]));
    let m = json(&[
        "series", "eval", "m", "--k", "3", "--lambda", "2", "--n", "2", "--alpha", "0,1", "--prec",
        "64",
    ]);
    let md = json(&[
        "series",
        "eval",
        "m-definitional",
        "--k",
        "3",
        "--lambda",
        "2",
        "--n",
        "2",
        "--alpha",
        "0,1",
        "--prec",
        "64",
    ]);
    assert_eq!(m, md);
    let t = text(&[
        "series", "eval", "nuff", "--k", "5", "--lambda", "2", "--prec", "30",
    ]);
    assert_eq!(t.trim(), "0 + O(X^31)");
    let rows = json(&["explore", "--k-bound", "63", "--prec", "128"]);
    assert_eq!(rows["rows"].as_array().unwrap().len(), 32);
}
