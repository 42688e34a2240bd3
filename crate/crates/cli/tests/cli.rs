use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn heckesum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heckesum"))
        .args(args)
        .env_remove("HECKESUM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn delta_reports_both_ranges() {
    let v = stdout_json(&heckesum(&["delta"]));
    assert_eq!(v["spec_version"], "1.0");
    let r = v["results"].as_array().unwrap();
    assert!((r[0]["value"].as_f64().unwrap() - 0.0669873).abs() < 1e-7);
    assert_eq!(r[0]["argmin"].as_f64().unwrap(), 2.0);
    assert!((r[1]["value"].as_f64().unwrap() - 0.0555556).abs() < 1e-7);
    assert_eq!(r[1]["range"], serde_json::json!([-1.0, 3.0]));
}

#[test]
fn rho_csv() {
    let out = heckesum(&["rho", "--poly", "x^3-2", "--pmax", "100"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p,rho\n"));
    assert!(text.lines().any(|l| l == "5,1"));
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn corr_sum_is_deterministic_and_writes_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let path = dir.path().join(name);
        let out = heckesum(&[
            "corr-sum",
            "--form",
            "cm-gaussian",
            "--poly",
            "x^2+1",
            "--xmax",
            "100000",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        path
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "1");
    let c = run("c.csv", "2");
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(bytes, std::fs::read(&c).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.starts_with("x,sum,sum_over_x\n"));
    assert!(text.lines().last().unwrap().starts_with("100000,"));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["workers"], 1);
    assert!(meta["elapsed_secs"].as_f64().unwrap() >= 0.0);
}

#[test]
fn factorization_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("dump.csv");
    let out = heckesum(&[
        "corr-sum",
        "--form",
        "isobaric:1,1",
        "--poly",
        "x^2+1",
        "--xmax",
        "10",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dump).unwrap();
    assert!(text.starts_with("n,value,factors,cofactor\n"));
    assert!(text.lines().any(|l| l == "7,50,2:1;5:2,1"));
}

#[test]
fn cached_table_round_trip_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = Command::new(env!("CARGO_BIN_EXE_heckesum"))
        .args(["eigen-gen", "--form", "delta", "--nmax", "100000"])
        .env("HECKESUM_CACHE_DIR", &cache)
        .output()
        .unwrap();
    let v = stdout_json(&out);
    let path = v["path"].as_str().unwrap();
    assert!(Path::new(path).exists());
    assert!(path.ends_with("level1_12-100000.heig"));

    let series = dir.path().join("s.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_heckesum"))
        .args(["prime-sum", "--form", "level1:12", "--xmax", "100000", "--out", series.to_str().unwrap()])
        .env("HECKESUM_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let fit = stdout_json(&heckesum(&["fit", "--input", series.to_str().unwrap(), "--lo", "1000", "--hi", "100000"]));
    // the window reports the checkpoints actually used
    assert_eq!(fit["window"], serde_json::json!([1024, 100000]));
    let slope = fit["slope"].as_f64().unwrap();
    assert!(slope < 0.0 && slope > -0.5, "{slope}");
}

#[test]
fn chebotarev_outputs() {
    let out = heckesum(&["chebotarev", "--poly", "x^2+1", "--xmax", "100000"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("pattern,frequency,count\n"));
    assert!(text.lines().any(|l| l.starts_with("1;1,0.49")));

    let dir = tempfile::tempdir().unwrap();
    let exp = dir.path().join("expected.json");
    std::fs::write(&exp, r#"{"1;1;1": 0.16667, "1;2": 0.5, "3": 0.33333}"#).unwrap();
    let v = stdout_json(&heckesum(&[
        "chebotarev",
        "--poly",
        "x^3-2",
        "--xmax",
        "100000",
        "--expected",
        exp.to_str().unwrap(),
    ]));
    assert!(v["max_abs_deviation"].as_f64().unwrap() < 0.02);
    assert_eq!(v["patterns"].as_array().unwrap().len(), 3);
}

#[test]
fn small_reports() {
    let v = stdout_json(&heckesum(&["noncuspidal-lb", "--poly", "x^2+1", "--d", "-4", "--xmax", "10", "--bound", "7"]));
    assert_eq!(v["total"], 19);
    let v = stdout_json(&heckesum(&["counterexample", "--xmax", "1000"]));
    assert_eq!(v["sum"], 0.0);
    let v = stdout_json(&heckesum(&["dihedral", "--n", "3"]));
    assert_eq!(v["representations"][0]["l1_exact"], "2/3");
    let v = stdout_json(&heckesum(&["sieve-bound", "--poly", "x", "--f", "const:2", "--xmax", "100000", "--mode", "condition"]));
    assert_eq!(v["satisfied"], true);
    let out = heckesum(&["sieve-bound", "--poly", "x", "--f", "const:0", "--xmax", "100", "--start", "100"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,kind,exponent_sum,bound"));
    assert!(text.lines().any(|l| l.starts_with("100,nair,")));
}

#[test]
fn exit_codes() {
    let out = heckesum(&["rho", "--poly", "x^^2", "--pmax", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "usage");

    let out = heckesum(&["noncuspidal-lb", "--poly", "x", "--d", "12", "--xmax", "10", "--bound", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "domain");

    let out = heckesum(&["corr-sum", "--form", "cm-gaussian", "--poly", "x^8+1", "--xmax", "100000000"]);
    assert_eq!(out.status.code(), Some(2));
    let e = stderr_json(&out);
    assert_eq!(e["error"], "capacity_exceeded");
    assert_eq!(e["spec_version"], "1.0");

    let out = heckesum(&["prime-sum", "--form", "cm-gaussian", "--xmax", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn repro_exit_status() {
    let out = heckesum(&["repro", "--only", "1,11"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS]  1") && text.contains("2 of 2 criteria passed"));

    // the CM correlation ratio rises instead of falling, so this criterion
    // fails and the run reports an acceptance failure
    let out = heckesum(&["repro", "--only", "12"]);
    assert_eq!(out.status.code(), Some(3));
}
