use std::path::Path;
use std::process::{Command, Output};

use cubelab_core::distance::dist_monotone;
use cubelab_core::instances::{HardFunction, InstanceRecord, Kind};
use cubelab_core::TruthTable;
use serde_json::Value;

fn cubelab(args: &[&str], dir: &Path, threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cubelab"));
    cmd.args(args).current_dir(dir).env_remove("LAB_THREADS");
    if let Some(t) = threads {
        cmd.env("LAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn ok(out: Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn error_of(out: Output) -> Value {
    assert!(!out.status.success());
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON object")
}

/// CSV text with the wall-clock column removed.
fn without_wall_ms(csv: &str) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let wall = headers.iter().position(|h| h == "wall_ms").unwrap();
    reader
        .records()
        .map(|r| r.unwrap().iter().enumerate().filter(|(i, _)| *i != wall).map(|(_, v)| v.to_string()).collect())
        .collect()
}

fn statistic<'a>(rows: &'a [Vec<String>], name: &str) -> &'a Vec<String> {
    rows.iter().find(|r| r[4] == name).unwrap_or_else(|| panic!("no {name} row"))
}

#[test]
fn sample_materialize_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(cubelab(&["sample", "--family", "mono", "--n", "10", "--eps", "0.8", "--seed", "4", "--out", "m.json"], d, None));
    let record: InstanceRecord = serde_json::from_str(&std::fs::read_to_string(d.join("m.json")).unwrap()).unwrap();
    assert_eq!((record.seed, record.kind), (4, Kind::Yes));

    ok(cubelab(&["materialize", "--instance", "m.json", "--kind", "no", "--out", "no.hcub"], d, None));
    let table = TruthTable::read_hcub(d.join("no.hcub")).unwrap();
    assert_eq!(table, record.instance.materialize(Kind::No).unwrap());

    for point in ["0000000000", "1111100000", "1010101011"] {
        let from_table: Value = serde_json::from_str(&ok(cubelab(&["eval", "--table", "no.hcub", "--point", point], d, None))).unwrap();
        let from_instance: Value =
            serde_json::from_str(&ok(cubelab(&["eval", "--instance", "m.json", "--kind", "no", "--point", point], d, None)))
                .unwrap();
        assert_eq!(from_table, from_instance);
        assert_eq!(from_table["point"], point);
    }

    let report: Value = serde_json::from_str(&ok(cubelab(&["dist", "--metric", "monotone", "--table", "no.hcub"], d, None))).unwrap();
    let expected = dist_monotone(&table).unwrap().exact.unwrap();
    assert_eq!(report["exact"], format!("{}/{}", expected.numer(), expected.denom()));
}

#[test]
fn sampling_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--family", "uc", "--kind", "no", "--n", "8", "--eps", "0.25", "--seed", "11"];
    assert_eq!(ok(cubelab(&args, dir.path(), None)), ok(cubelab(&args, dir.path(), None)));
}

#[test]
fn dist_modes_and_tester() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // Two singletons without their union: far from union-closed.
    TruthTable::from_indices(2, [1, 2]).unwrap().write_hcub(d.join("t.hcub")).unwrap();
    let exact: Value = serde_json::from_str(&ok(cubelab(&["dist", "--metric", "union-closed", "--table", "t.hcub", "--exact"], d, None))).unwrap();
    assert_eq!(exact["exact"], "1/4");
    let junta: Value = serde_json::from_str(&ok(cubelab(&["dist", "--metric", "junta:1", "--table", "t.hcub"], d, None))).unwrap();
    assert_eq!(junta["exact"], "1/2");

    let verdict: Value =
        serde_json::from_str(&ok(cubelab(&["tester", "--alg", "uc", "--eps", "0.2", "--seed", "1", "--table", "t.hcub"], d, None))).unwrap();
    assert_eq!(verdict["decision"], "reject");
    assert!(verdict["witness"].is_object());

    TruthTable::zeros(9).unwrap().write_hcub(d.join("big.hcub")).unwrap();
    let err = error_of(cubelab(&["dist", "--metric", "union-closed", "--table", "big.hcub", "--exact"], d, None));
    assert_eq!(err["error"], "precondition");
    let bounds: Value =
        serde_json::from_str(&ok(cubelab(&["dist", "--metric", "union-closed", "--table", "big.hcub", "--bounds"], d, None))).unwrap();
    assert_eq!(bounds["upper"], "0/1");
}

#[test]
fn experiment_output_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["experiment", "--name", "junta-far", "--n", "8", "--trials", "40", "--seed", "5"];
    let one = ok(cubelab(&args, d, Some("1")));
    let four = ok(cubelab(&args, d, Some("4")));
    assert_eq!(without_wall_ms(&one), without_wall_ms(&four));
    let rows = without_wall_ms(&one);
    assert_eq!(rows.len(), 2 * 40 + 5);
    assert!(rows.iter().all(|r| r[0] == "junta-far" && r[3] == "5" && r[9] == "0.1.0" && r[10] == "round-half-away/v1"));
}

#[test]
fn report_header_matches_columns() {
    let dir = tempfile::tempdir().unwrap();
    let csv = ok(cubelab(&["experiment", "--name", "sensitivity", "--n", "8", "--trials", "20"], dir.path(), None));
    let header = csv.lines().next().unwrap();
    assert_eq!(header, cubelab_cli::report::COLUMNS.join(","));
    let rows = without_wall_ms(&csv);
    assert_eq!(statistic(&rows, "violations")[5], "0.0");
    assert_eq!(statistic(&rows, "parity_avg_sensitivity")[5], "8.0");
}

#[test]
fn dnf_profile_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(cubelab(&["experiment", "--name", "prop32", "--m", "64", "--eps", "1", "--trials", "10000", "--seed", "7", "--out", "r.csv"], d, None));
    let rows = without_wall_ms(&std::fs::read_to_string(d.join("r.csv")).unwrap());
    for name in ["p0", "p1", "p2plus"] {
        let row = statistic(&rows, name);
        let (v, lo, hi): (f64, f64, f64) = (row[5].parse().unwrap(), row[6].parse().unwrap(), row[7].parse().unwrap());
        assert!(lo <= v && v <= hi);
        assert_eq!(row[8], "10000");
    }
    let p1: f64 = statistic(&rows, "p1")[5].parse().unwrap();
    assert!(p1 > 0.03);
}

#[test]
fn erased_region_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = ok(cubelab(&["experiment", "--name", "lemma41", "--n", "12", "--eps", "0.7", "--samples", "10"], dir.path(), None));
    let rows = without_wall_ms(&csv);
    for i in 0..10 {
        let d: f64 = statistic(&rows, &format!("dist_monotone/{i}"))[5].parse().unwrap();
        let e: f64 = statistic(&rows, &format!("erased_measure/{i}"))[5].parse().unwrap();
        assert!(d <= e);
    }
    assert_eq!(statistic(&rows, "holds_rate")[5], "1.0");
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("c.json"),
        r#"{"name": "bad-event", "n": 12, "eps": 1.0, "seed": 3, "trials": 200, "plan": {"strategy": "antipodal", "pairs": 4}}"#,
    )
    .unwrap();
    let rows = without_wall_ms(&ok(cubelab(&["experiment", "--config", "c.json", "--seed", "9"], d, None)));
    assert!(rows.iter().all(|r| r[1] == "12" && r[3] == "9"));
    assert_eq!(statistic(&rows, "plan_size")[5], "8.0");

    let rows = without_wall_ms(&ok(cubelab(
        &["experiment", "--config", "c.json", "--name", "indist", "--family", "hand-built", "--plan", r#"{"strategy":"uniform","q":3}"#],
        d,
        None,
    )));
    assert_eq!(statistic(&rows, "plan_size")[5], "3.0");
}

#[test]
fn errors_are_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(error_of(cubelab(&["experiment", "--name", "prop99"], d, None))["error"], "invalid_parameter");
    std::fs::write(d.join("bad.json"), r#"{"name": "prop32", "trails": 5}"#).unwrap();
    let err = error_of(cubelab(&["experiment", "--config", "bad.json"], d, None));
    assert_eq!(err["error"], "format");
    assert!(err["message"].as_str().unwrap().contains("trails"));
    assert_eq!(error_of(cubelab(&["dist", "--metric", "convex", "--table", "missing.hcub"], d, None))["error"], "io");
    assert_eq!(error_of(cubelab(&["experiment", "--name", "prop32"], d, Some("zero")))["error"], "invalid_parameter");
    let usage = cubelab(&["tester", "--alg", "uc"], d, None);
    assert_eq!(usage.status.code(), Some(2));
    assert_eq!(error_of(usage)["error"], "usage");
}
