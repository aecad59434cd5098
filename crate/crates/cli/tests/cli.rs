use std::path::PathBuf;
use std::process::Command as Process;

use cosan_cli::{build_plan, run, CheckKind, CliError, Command};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn exec(args: &[&str]) -> (i32, Value) {
    let plan = build_plan(args.iter().copied()).expect("valid arguments");
    let e = run(&plan);
    (e.code, e.document)
}

#[test]
fn plans_parse() {
    let plan = build_plan(["eval", "--coeff", "builtin:powerset", "--size", "3"]).unwrap();
    assert_eq!(plan.command, Command::Eval);
    assert_eq!(plan.size, Some(3));
    let plan = build_plan(["check", "cocone", "--tab", "builtin:powerset", "--at", "3"]).unwrap();
    assert_eq!(plan.command, Command::Check(CheckKind::Cocone));
    assert_eq!(plan.at, Some(3));
}

#[test]
fn usage_errors() {
    for argv in [
        vec!["eval", "--size"],
        vec!["eval", "--size", "3", "--bogus"],
        vec!["frobnicate"],
        vec!["check", "everything"],
        vec!["map", "--fun", "2>1:3"],
    ] {
        assert!(matches!(build_plan(argv.clone()), Err(CliError::Usage(_))), "{argv:?}");
    }
    // files are parsed while planning
    assert!(matches!(
        build_plan(["extract", "--tab", "/nonexistent/F.json"]),
        Err(CliError::File { .. })
    ));
    assert!(build_plan(["eval", "--coeff", "builtin:nope", "--size", "1"]).is_err());
    // a missing required input is reported at execution, with exit 2
    let (code, doc) = exec(&["eval", "--coeff", "builtin:powerset"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "usage");
}

#[test]
fn schema_errors_are_input_errors() {
    let dir = std::env::temp_dir().join(format!("cosan-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"kind":"inj-coeff","window":1,"sets":[["x"]],"maps":[],"extra":1}"#).unwrap();
    let err = build_plan(["tabulate", "--coeff", bad.to_str().unwrap()]).unwrap_err();
    assert_eq!(err.to_json()["error"]["kind"], "input");
    std::fs::write(&bad, "not json").unwrap();
    assert!(build_plan(["check", "functor", "--tab", bad.to_str().unwrap()]).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn eval_powerset_lists_eight_elements() {
    let (code, doc) = exec(&["eval", "--coeff", "builtin:powerset", "--size", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["count"], 8);
    assert_eq!(doc["elements"].as_array().unwrap().len(), 1 << 3);
}

#[test]
fn collapse_fixture_is_rejected() {
    let nat = fixture("collapse.json");
    let (code, doc) = exec(&["check", "semicartesian", "--nat", &nat]);
    assert_eq!(code, 1);
    assert_eq!(doc["result"], "fail");
    assert_eq!(doc["witness"]["g"], "2>1:1,1");
    let (code, doc) = exec(&["extract-nat", "--nat", &nat]);
    assert_eq!(code, 1);
    assert_eq!(doc["witness"]["p"], "2>1:1,1");
    // the fixture on disk is what the builtin prints
    let (_, builtin) = exec(&["builtin", "collapse", "--window", "3"]);
    let on_disk: Value = serde_json::from_str(&std::fs::read_to_string(&nat).unwrap()).unwrap();
    assert_eq!(builtin, on_disk);
}

#[test]
fn compose_pplus_powerset() {
    let (code, doc) = exec(&["compose", "--san", "builtin:pplus", "--coeff", "builtin:powerset", "--window", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["sizes"], serde_json::json!([1, 3, 12, 216]));
    assert_eq!(doc["coefficients"]["kind"], "inj-coeff");
    let (code, doc) = exec(&["compose", "--san", "builtin:pplus", "--coeff", "builtin:powerset", "--window", "3", "--cap", "100"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "resource");
}

#[test]
fn identity_transformations_extract() {
    let dir = std::env::temp_dir().join(format!("cosan-cli-nat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("id.json");
    std::fs::write(
        &path,
        r#"{"kind":"tab-nat","source":"builtin:partition","target":"builtin:partition","levels":[[1],[1],[1,2],[1,2,3,4,5]]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (code, doc) = exec(&["extract-nat", "--nat", p]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["transformation"]["levels"], serde_json::json!([[1], [1], [1], [1]]));
    let (code, _) = exec(&["check", "semicartesian", "--nat", p]);
    assert_eq!(code, 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn checks_on_builtins() {
    for argv in [
        vec!["check", "functor", "--tab", "builtin:partition"],
        vec!["check", "pullbacks", "--tab", "builtin:exp:3"],
        vec!["check", "cocone", "--tab", "builtin:powerset"],
        vec!["check", "all", "--tab", "builtin:powerset", "--coeff", "builtin:exp:2"],
        vec!["check", "strength", "--san", "builtin:pplus", "--window", "2"],
        vec!["check", "boolean-hom", "--window", "2"],
        vec!["check", "algebra", "--san", "builtin:pplus", "--size", "2"],
        vec!["roundtrip", "--coeff", "builtin:constant", "--window", "3"],
        vec!["roundtrip", "--coeff", "builtin:exp:2", "--coeff", "builtin:powerset"],
    ] {
        let (code, doc) = exec(&argv);
        assert_eq!((code, &doc["result"]), (0, &Value::from("pass")), "{argv:?}: {doc}");
    }
}

#[test]
fn negative_controls_fail() {
    let (code, doc) = exec(&["check", "pullbacks", "--tab", "builtin:neighbourhood"]);
    assert_eq!(code, 1);
    assert_eq!(doc["witness"]["f"], "2>1:1,1");
    let (code, _) = exec(&["check", "functor", "--tab", "builtin:phantom"]);
    assert_eq!(code, 1);
    let (code, doc) = exec(&["check", "all", "--tab", "builtin:powerset", "--coeff", "builtin:partition"]);
    assert_eq!(code, 1);
    assert_eq!(doc["witness"]["given"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn map_and_tabulate() {
    let (code, doc) = exec(&["map", "--tab", "builtin:powerset", "--fun", "3>2:1,1,2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["entries"].as_array().unwrap().len(), 4);
    let (_, doc) = exec(&["map", "--san", "builtin:pplus", "--fun", "3>2:1,1,2"]);
    assert_eq!(doc["entries"].as_array().unwrap().len(), 7);
    let (code, doc) = exec(&["tabulate", "--coeff", "builtin:partition", "--window", "4"]);
    assert_eq!(code, 0);
    let sizes: Vec<usize> = doc["sets"].as_array().unwrap().iter().map(|l| l.as_array().unwrap().len()).collect();
    assert_eq!(sizes, vec![1, 1, 2, 5, 15]);
}

#[test]
fn builtin_documents_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("cosan-cli-builtin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let coeff = dir.join("p.json");
    let (code, _) = exec(&["builtin", "powerset", "--window", "3", "--out", coeff.to_str().unwrap()]);
    assert_eq!(code, 0);
    let tab = dir.join("t.json");
    exec(&["tabulate", "--coeff", coeff.to_str().unwrap(), "--out", tab.to_str().unwrap()]);
    let (code, doc) = exec(&["check", "all", "--tab", tab.to_str().unwrap(), "--coeff", coeff.to_str().unwrap()]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["sizes"], serde_json::json!([1, 2, 2, 0]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cosan");
    let status = |args: &[&str]| Process::new(bin).args(args).output().unwrap();
    let ok = status(&["eval", "--coeff", "builtin:powerset", "--size", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["count"], 4);
    assert_eq!(status(&["check", "semicartesian", "--nat", &fixture("collapse.json")]).status.code(), Some(1));
    let bad = status(&["eval", "--size"]);
    assert_eq!(bad.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(doc["error"]["kind"], "usage");
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}
