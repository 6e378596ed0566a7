use serde_json::Value;
use std::collections::BTreeSet;
use std::process::Command;

const SCHEMA: &str = include_str!("../schema/report.schema.json");

fn k3n(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_k3n")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, _) = k3n(&full);
    (code, serde_json::from_str(&out).expect("valid json"))
}

fn assert_valid(report: &Value) {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(report).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn assert_no_floats(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "float {n}"),
        Value::Array(a) => a.iter().for_each(assert_no_floats),
        Value::Object(m) => m.values().for_each(assert_no_floats),
        _ => {}
    }
}

#[test]
fn json_reports_validate_against_schema() {
    let cases: &[&[&str]] = &[
        &["classify", "--n", "3", "--p", "3", "--golden"],
        &["classify", "--n", "4", "--p", "3", "--golden", "--k3-data", concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/k3_order3.json")],
        &["classify", "--n", "3", "--p", "23"],
        &["classify", "--n", "10", "--p", "3"],
        &["triple", "--n", "3", "--p", "5", "--m", "5", "--a", "3"],
        &["triple", "--n", "2", "--p", "13", "--m", "1", "--a", "0"],
        &["genus", "Omega"],
        &["genus", "[[2,1],[1,-2]]"],
        &["glue", "--n", "4", "--p", "3", "--m", "10", "--a", "1"],
        &["verify-isometry", "A2", "rho0"],
        &["verify-isometry", "U", "[[1,0],[0,2]]"],
        &["verify-isometry", "U + A2", "-id"],
        &["induced", "--ambient", "2*U + 2*A2", "--square", "6", "--target", "<2> + E6"],
        &["genus", "U + Foo"],
    ];
    for args in cases {
        let (_, report) = json(args);
        assert_valid(&report);
        assert_no_floats(&report);
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let (_, mut report) = json(&["genus", "H5"]);
    report["rows"][0]["determinant"] = serde_json::json!(-5.5);
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    assert!(!validator.is_valid(&report));
    let (_, mut report) = json(&["classify", "--n", "3", "--p", "23"]);
    report["rows"][0]["marker"] = serde_json::json!("spade");
    assert!(!validator.is_valid(&report));
}

#[test]
fn formats_encode_the_same_rows() {
    let (_, report) = json(&["classify", "--n", "4", "--p", "3"]);
    let from_json: BTreeSet<(i64, i64, i64)> = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["p"].as_i64().unwrap(), r["m"].as_i64().unwrap(), r["a"].as_i64().unwrap()))
        .collect();
    assert_eq!(from_json.len(), 46);
    let (_, text, _) = k3n(&["classify", "--n", "4", "--p", "3"]);
    let from_text: BTreeSet<(i64, i64, i64)> = text
        .lines()
        .skip(1)
        .take_while(|l| !l.contains(':'))
        .map(|l| {
            let f: Vec<i64> = l.split_whitespace().take(3).map(|x| x.parse().unwrap()).collect();
            (f[0], f[1], f[2])
        })
        .collect();
    assert_eq!(from_text, from_json);
    let (_, csv, _) = k3n(&["classify", "--n", "4", "--p", "3", "--format", "csv"]);
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let from_csv: BTreeSet<(i64, i64, i64)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap())
        })
        .collect();
    assert_eq!(from_csv, from_json);
}

#[test]
fn json_output_is_stable() {
    let a = k3n(&["classify", "--n", "3", "--format", "json"]).1;
    let b = k3n(&["classify", "--n", "3", "--format", "json"]).1;
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    assert_eq!(k3n(&["classify", "--n", "3", "--p", "3", "--golden"]).0, 0);
    assert_eq!(k3n(&["classify", "--n", "4", "--p", "3", "--golden"]).0, 0);
    let (code, _, err) = k3n(&["classify", "--n", "10", "--p", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("alpha = 2"), "{err}");
    assert_eq!(k3n(&["classify", "--n", "3", "--p", "2"]).0, 2);
    assert_eq!(k3n(&["classify", "--n", "5", "--p", "3", "--golden"]).0, 2);
    assert_eq!(k3n(&["genus", "U + Foo"]).0, 2);
    assert_eq!(k3n(&["genus", "<3>"]).0, 2);
    assert_eq!(k3n(&["glue", "--n", "3", "--p", "3", "--m", "3", "--a", "0"]).0, 2);
    assert_eq!(k3n(&["frobnicate"]).0, 2);
    let (code, _, err) = k3n(&["verify-isometry", "U", "[[1,0],[0,2]]"]);
    assert_eq!(code, 1);
    assert!(err.contains("[0][1]"), "{err}");
    assert_eq!(k3n(&["verify-isometry", "A2", "rho0"]).0, 0);
    assert_eq!(k3n(&["induced", "--ambient", "U", "--square", "6", "--target", "<-6>", "--bound", "2"]).0, 1);
}

#[test]
fn golden_mismatches_exit_with_one() {
    let bundled = include_str!("../../core/data/golden/n3_p3.json");
    let mut table: Value = serde_json::from_str(bundled).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let mut dropped = table.clone();
    dropped["rows"].as_array_mut().unwrap().pop();
    let path = dir.path().join("dropped.json");
    std::fs::write(&path, dropped.to_string()).unwrap();
    let (code, report) = json(&["classify", "--n", "3", "--p", "3", "--golden-file", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report["summary"]["golden"]["extra"].as_array().unwrap().len(), 1);
    assert_valid(&report);

    table["rows"][0]["T"] = Value::String("U + 2*E8 + <-4>".into());
    let path = dir.path().join("wrong_t.json");
    std::fs::write(&path, table.to_string()).unwrap();
    let (code, report) = json(&["classify", "--n", "3", "--p", "3", "--golden-file", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report["summary"]["golden"]["representative_failures"].as_array().unwrap().len(), 1);

    let path = dir.path().join("same.json");
    std::fs::write(&path, bundled).unwrap();
    assert_eq!(k3n(&["classify", "--n", "3", "--p", "3", "--golden-file", path.to_str().unwrap()]).0, 0);
}

#[test]
fn command_examples() {
    let (_, r) = json(&["classify", "--n", "3", "--p", "23"]);
    assert_eq!(r["rows"].as_array().unwrap().len(), 1);
    assert_eq!((r["rows"][0]["m"].as_i64(), r["rows"][0]["a"].as_i64()), (Some(1), Some(1)));

    let (_, r) = json(&["genus", "Omega"]);
    assert_eq!(r["rows"][0]["determinant"], -108);
    assert_eq!(r["rows"][0]["discriminant_form"], "3:4/3 + 3:4/3 + 3:2/3 + 4:-1/4");
    let (_, r) = json(&["genus", "U"]);
    assert_eq!(r["rows"][0]["unimodular"], true);
    assert_eq!(r["rows"][0]["signature"], serde_json::json!({"plus": 1, "minus": 1}));
    let (_, r) = json(&["genus", "H5"]);
    assert_eq!(r["rows"][0]["determinant"], -5);
    let (_, r) = json(&["genus", "U ⊕ E6^∨(3)"]);
    assert_eq!(r["rows"][0]["canonical"], "U + E6dual3");

    let (_, r) = json(&["glue", "--n", "4", "--p", "3", "--m", "10", "--a", "1"]);
    let tags: Vec<&str> = r["rows"].as_array().unwrap().iter().map(|c| c["tag"].as_str().unwrap()).collect();
    assert_eq!(tags, ["trivial-glue", "cyclic-glue"]);
    assert!(r["rows"].as_array().unwrap().iter().all(|c| c["agree"] == true));

    let (_, r) = json(&["verify-isometry", "A2", "rho0"]);
    let row = &r["rows"][0];
    assert_eq!((row["order"].as_i64(), row["invariant_rank"].as_i64()), (Some(3), Some(0)));
    assert_eq!((row["discriminant_action"].as_str(), row["spinor_norm"].as_i64()), (Some("identity"), Some(1)));

    let (_, r) = json(&["classify", "--n", "3", "--p", "3", "--k3-data", concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/k3_order3.json")]);
    for row in r["rows"].as_array().unwrap() {
        assert_eq!(row["natural_split"] == true, row["marker"] == "club", "{}", row["m"]);
    }
}
