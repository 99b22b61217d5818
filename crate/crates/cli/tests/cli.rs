use std::path::{Path, PathBuf};
use std::process::Command;

use reflect_cli::io::{entry_to_json, parse_document};
use reflect_core::fixtures::fixture;
use serde_json::Value;

fn reflect(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_reflect")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf8");
    let code = out.status.code().expect("exit code");
    let json = serde_json::from_str(&text).unwrap_or(Value::Null);
    (json, code, text)
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a stored file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

fn labels(v: &Value) -> Vec<String> {
    v["payload"]["components"].as_array().unwrap().iter().map(|c| c["label"].as_str().unwrap().to_string()).collect()
}

fn sets(v: &Value) -> Vec<Vec<u64>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_array().unwrap().iter().map(|i| i.as_u64().unwrap()).collect())
        .collect()
}

#[test]
fn envelope_fields() {
    let (v, code, _) = reflect(&["fixtures", "list"]);
    assert_eq!(code, 0);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["schema_version", "command", "status", "payload", "diagnostics"]);
    assert_eq!(v["status"], "ok");
}

#[test]
fn analyze_examples() {
    let (v, code, _) = reflect(&["analyze", "fixture:example_6_8_3"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["isometric_sign_changes"], 4);
    let (v, code, _) = reflect(&["analyze", "fixture:remark_4_7(4)"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["isometric_sign_changes"], 0);
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"variant\": ").unwrap();
    let (v, code, _) = reflect(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "input-error");
    let (_, code, _) = reflect(&["analyze", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    let (v, code, _) = reflect(&["verify", "no_such_fixture"]);
    assert_eq!((code, v["status"].as_str()), (2, Some("input-error")));
}

#[test]
fn coxeter_examples() {
    let (v, code, _) = reflect(&["coxeter", "fixture:simple_A(3)"]);
    assert_eq!(code, 0);
    assert_eq!(labels(&v), ["A(3)"]);
    assert_eq!(v["payload"]["components"][0]["group_order"], 24);
    let (v, _, _) = reflect(&["coxeter", "fixture:infinite_pair"]);
    assert_eq!(labels(&v), ["Infinite"]);
    let (v, _, _) = reflect(&["coxeter", "fixture:sign_changes(3)"]);
    assert_eq!(labels(&v), ["B(1)", "B(1)", "B(1)"]);
    let (v, _, _) = reflect(&["coxeter", "fixture:remark_4_7(4)"]);
    assert_eq!(labels(&v), ["D(4)"]);
}

#[test]
fn coxeter_reads_reflection_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b2.json");
    let doc = r#"{"dim": 2, "reflections": [
        {"e": ["1", "0"], "e_star": ["1", "0"]},
        {"e": ["1", "-1"], "e_star": ["1/2", "-1/2"]}
    ]}"#;
    std::fs::write(&path, doc).unwrap();
    let (v, code, _) = reflect(&["coxeter", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(labels(&v), ["B(2)"]);
    assert_eq!(v["payload"]["edges"][0]["weight"], 4);

    std::fs::write(&path, r#"{"dim": 2, "reflections": [{"e": [1, 0], "e_star": [0.5, 0]}]}"#).unwrap();
    let (_, code, _) = reflect(&["coxeter", path.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn order_cap_marks_long_edges_infinite() {
    let (v, code, _) = reflect(&["coxeter", "fixture:I2(7)", "--order-cap", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["edges"][0]["weight"], "inf");
}

#[test]
fn dot_export_golden() {
    let dir = tempfile::tempdir().unwrap();
    for (fx, file) in [("simple_B(3)", "simple_b3.dot"), ("infinite_pair", "infinite_pair.dot")] {
        let path = dir.path().join(file);
        let (_, code, _) = reflect(&["coxeter", &format!("fixture:{fx}"), "--dot", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_golden(file, &std::fs::read_to_string(&path).unwrap());
    }
}

#[test]
fn decompose_examples() {
    let (v, code, _) = reflect(&["decompose", "fixture:orlicz_nakano(2,2,3)"]);
    assert_eq!(code, 0);
    assert_eq!(sets(&v["payload"]["hilbert"]), [vec![1, 2]]);
    assert_eq!(sets(&v["payload"]["coxeter"]), [vec![3]]);
    let (v, _, _) = reflect(&["decompose", "fixture:lp(2,3)"]);
    assert_eq!(sets(&v["payload"]["hilbert"]), [vec![1, 2, 3]]);
    let (v, _, _) = reflect(&["decompose", "fixture:example_6_8_4"]);
    assert_eq!(sets(&v["payload"]["hilbert"]), [vec![1, 2], vec![3, 4]]);
    assert_eq!(sets(&v["payload"]["coxeter"]), [vec![5], vec![6]]);
    let (_, code, _) = reflect(&["decompose", "fixture:lp(2,3)", "--tolerance", "-1"]);
    assert_eq!(code, 2);
}

#[test]
fn decompose_golden() {
    let (_, _, text) = reflect(&["decompose", "fixture:example_6_8_3", "--seed", "3"]);
    assert_golden("decompose_example_6_8_3.json", &text);
}

#[test]
fn constant_sweep_csv_golden_and_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = |p: &Path| {
        ["constant", "--lp-sweep", "1.25,1.5,2,3,4", "--dim", "2", "--restarts", "4", "--seed", "5", "--csv"]
            .iter()
            .map(|s| s.to_string())
            .chain([p.to_str().unwrap().to_string()])
            .collect::<Vec<_>>()
    };
    let run = |p: &Path| {
        let a = args(p);
        reflect(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let (v, code, _) = run(&a);
    assert_eq!(code, 0);
    run(&b);
    let csv = std::fs::read_to_string(&a).unwrap();
    assert_eq!(csv, std::fs::read_to_string(&b).unwrap());
    assert!(csv.starts_with("p,c,restarts,seed\n"));
    assert_golden("sweep_dim2.csv", &csv);
    let row2 = v["payload"]["rows"].as_array().unwrap().iter().find(|r| r["p"] == 2.0).unwrap();
    assert!((row2["c"].as_f64().unwrap() - 1.0).abs() <= 1e-3);
}

#[test]
fn constant_input_errors() {
    assert_eq!(reflect(&["constant"]).1, 2);
    assert_eq!(reflect(&["constant", "--lp-sweep", "2,1"]).1, 2);
    assert_eq!(reflect(&["constant", "--lp-sweep", "0.5,2", "--dim", "2"]).1, 2);
    assert_eq!(reflect(&["constant", "fixture:lp(2,2)", "--csv", "x.csv"]).1, 2);
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_reflect"))
            .args(["constant", "fixture:lp(3,2)", "--restarts", "6", "--seed", "11"])
            .env("REFLECT_THREADS", threads)
            .output()
            .unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn verify_examples() {
    let (v, code, _) = reflect(&["verify", "remark_4_7(4)"]);
    assert_eq!(code, 0);
    let details: Vec<&str> =
        v["payload"]["checks"].as_array().unwrap().iter().map(|c| c["detail"].as_str().unwrap()).collect();
    assert!(details.iter().any(|d| d.contains("10 > 8")));
    let (v, code, _) = reflect(&["verify", "example_6_8_3"]);
    assert_eq!(code, 0);
    let names: Vec<&str> =
        v["payload"]["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"strip {3,4} is not a Hilbert strip"));
}

#[test]
fn fixture_documents_round_trip_byte_identically() {
    let names = [
        "remark_4_7(3)",
        "remark_4_7(4)",
        "example_6_8_3",
        "example_6_8_4",
        "orlicz_nakano(2,2,2,3,3,4)",
        "lp(1.5,3)",
        "lp(inf,2)",
        "roots_D(5)",
        "simple_B(3)",
        "I2(5)",
        "H3",
        "close_axes_triple",
    ];
    for name in names {
        let (_, code, text) = reflect(&["fixtures", "show", name, "--raw"]);
        assert_eq!(code, 0, "{name}");
        let parsed = parse_document(&text).unwrap();
        let again = match parsed {
            reflect_cli::io::Input::Spec(s) => reflect_cli::io::spec_to_json(&s),
            reflect_cli::io::Input::Reflections(r) => reflect_cli::io::reflections_to_json(r[0].dim(), &r),
            reflect_cli::io::Input::Roots(r) => reflect_cli::io::roots_to_json(&r),
        };
        let again = serde_json::to_string_pretty(&again).unwrap() + "\n";
        assert_eq!(again, text, "{name}");
        assert_eq!(again, serde_json::to_string_pretty(&entry_to_json(&fixture(name).unwrap())).unwrap() + "\n");
    }
}

#[test]
fn fixture_files_are_valid_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    let (_, _, text) = reflect(&["fixtures", "show", "example_6_8_4", "--raw"]);
    std::fs::write(&path, text).unwrap();
    let (from_file, _, _) = reflect(&["decompose", path.to_str().unwrap()]);
    let (from_name, _, _) = reflect(&["decompose", "fixture:example_6_8_4"]);
    assert_eq!(from_file["payload"], from_name["payload"]);
}
