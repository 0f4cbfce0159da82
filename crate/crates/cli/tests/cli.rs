use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/scenarios").join(name)
}

fn bidisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bidisc")).args(args).output().expect("binary runs")
}

fn with_scenario(command: &str, name: &str, extra: &[&str]) -> Output {
    let path = scenario(name);
    let mut args = vec![command, "--scenario", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    bidisc(&args)
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn json_records(output: &Output) -> Vec<serde_json::Value> {
    stdout(output).lines().map(|l| serde_json::from_str(l).expect("one JSON record per line")).collect()
}

fn record<'a>(records: &'a [serde_json::Value], kind: &str) -> &'a serde_json::Value {
    records.iter().find(|r| r["record"] == kind).unwrap_or_else(|| panic!("no {kind} record"))
}

#[test]
fn distances() {
    let half_log_three = format!("{:.15}", 0.5 * 3f64.ln());
    assert_eq!(half_log_three, "0.549306144334055");
    for args in [&["distance", "--disc", "0", "0.5"][..], &["distance", "--bidisc", "0,0", "0.5,0"]] {
        let out = bidisc(args);
        assert!(out.status.success());
        assert_eq!(stdout(&out).lines().nth(2), Some(half_log_three.as_str()));
    }
    assert!(bidisc(&["distance", "--disc", "-0.5", "0.5-0.1j"]).status.success());
    let out = bidisc(&["distance", "--disc", "0", "0", "--json"]);
    assert_eq!(record(&json_records(&out), "distance")["value"], 0);
}

#[test]
fn malformed_input_exits_with_2() {
    assert_eq!(bidisc(&["distance", "--disc", "0", "1.5"]).status.code(), Some(2));
    assert_eq!(bidisc(&["distance", "--disc", "0", "zero"]).status.code(), Some(2));
    assert_eq!(bidisc(&["distance"]).status.code(), Some(2));
    assert_eq!(bidisc(&["julia", "--scenario", "/no/such/file.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"map": "z1; compose(mobius(2, 0), z2)"}"#).unwrap();
    assert_eq!(bidisc(&["julia", "--scenario", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(bidisc(&["distance", "--disc", "0", "0.5", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn julia_examples() {
    let out = with_scenario("julia", "identity.json", &["--json"]);
    assert_eq!(out.status.code(), Some(0));
    let records = json_records(&out);
    assert_eq!(record(&records, "julia")["y"], serde_json::json!(["1", "1"]));
    assert_eq!(records.iter().filter(|r| r["record"] == "radius").count(), 3);

    let out = with_scenario("julia", "squares.json", &["--json"]);
    assert_eq!(out.status.code(), Some(0));
    let records = json_records(&out);
    let lambda = record(&records, "julia")["lambda"].as_array().unwrap().clone();
    for l in lambda {
        assert!((l.as_f64().unwrap() - 2.0).abs() < 1e-6);
    }
    assert!(records.iter().filter(|r| r["record"] == "radius").all(|r| r["violations"] == 0));

    assert_eq!(with_scenario("julia", "constant.json", &[]).status.code(), Some(3));
}

#[test]
fn jwc_headline() {
    let out = with_scenario("jwc", "squares.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("ratios 2, 2 vs expected 2, 2"), "{}", stdout(&out));
}

#[test]
fn dynamics_headlines() {
    for (name, headline) in [
        ("first_type.json", "first type; W(f)={(1,1)}; W_G(f)={(1,1)}"),
        ("second_type.json", "second type; W(f)={1}×Δ; W_G(f)={1}×Δ"),
        ("third_type.json", "third type; W(f)={1}×Δ ∪ {(1,1)} ∪ Δ×{1}; W_G(f)={1}×Δ ∪ {(1,1)} ∪ Δ×{1}"),
    ] {
        let out = with_scenario("dynamics", name, &[]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(stdout(&out).lines().nth(2), Some(headline));
    }
}

#[test]
fn busemann_and_lindelof() {
    let out = with_scenario("busemann", "identity.json", &["--point", "0.5,0.2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let records = json_records(&out);
    let b = record(&records, "busemann");
    // on the diagonal at (1, 1) the Busemann function is the larger of the
    // two horocycle logarithms
    let horocycle = |z: f64| 0.5 * ((1.0 - z).powi(2) / (1.0 - z * z)).ln();
    let oracle = horocycle(0.5).max(horocycle(0.2));
    assert!((b["closed_form"].as_f64().unwrap() - oracle).abs() < 1e-12);
    assert!((b["limit"].as_f64().unwrap() - oracle).abs() < 1e-6);

    let out = with_scenario("lindelof", "lindelof.json", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn dilation_of_disc_maps() {
    let out = bidisc(&["dilation", "--map", "power(3)", "--at", "-1", "--json"]);
    assert!(out.status.success());
    let records = json_records(&out);
    assert!((record(&records, "dilation")["lambda"].as_f64().unwrap() - 3.0).abs() < 1e-6);
    let csv = stdout(&bidisc(&["dilation", "--map", "power(2)", "--csv"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,value"));
    for line in lines {
        let (t, v) = line.split_once(',').unwrap();
        let t: f64 = t.parse().unwrap();
        // 1 - t^2 is rounded, so the quotient carries an error of order eps / (1 - t)
        assert!((v.parse::<f64>().unwrap() - (1.0 + t)).abs() < 1e-14 / (1.0 - t), "{line}");
    }
}

#[test]
fn json_output_is_deterministic_and_seeded() {
    let a = with_scenario("julia", "squares.json", &["--json"]);
    let b = with_scenario("julia", "squares.json", &["--json"]);
    assert_eq!(a.stdout, b.stdout);
    let c = with_scenario("julia", "squares.json", &["--json", "--seed", "99"]);
    let header = &json_records(&c)[0];
    assert_eq!(header["record"], "header");
    assert_eq!(header["seed"], 99);
    assert_ne!(a.stdout, c.stdout);
    let records = json_records(&a);
    assert_eq!(records.last().unwrap()["record"], "status");
}

#[test]
fn tol_overrides_the_limit_tolerance() {
    let out = with_scenario("julia", "identity.json", &["--json", "--tol", "1e-7"]);
    let tolerances = &json_records(&out)[0]["tolerances"];
    assert_eq!(tolerances[0], serde_json::json!(["limit", 1e-7]));
}
