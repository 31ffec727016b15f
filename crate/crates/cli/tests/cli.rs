use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use excomp_cli::instance::{parse_instance, serialize_instance};

fn instances() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("instances")
}

fn excomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_excomp"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("excomp-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn bundled_documents_round_trip() {
    for entry in std::fs::read_dir(instances()).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let first = parse_instance(&text).unwrap();
        let again = parse_instance(&serialize_instance(&first.doc)).unwrap();
        assert_eq!(first.doc, again.doc);
        assert_eq!(first.sets, again.sets);
        assert_eq!(first.maps, again.maps);
    }
}

#[test]
fn missing_element_is_reported_with_its_position() {
    let text = r#"{
  "sets": {"X": ["x"], "I": ["i"]},
  "maps": {"f": {"dom": "X", "cod": "I", "table": {"x": "j"}}}
}"#;
    let err = parse_instance(text).unwrap_err();
    let loc = err.location.expect("located");
    assert_eq!(loc.line, 3);
    assert!(err.message.contains("`j` is not an element of `I`"), "{}", err.message);
}

#[test]
fn non_total_map_is_rejected() {
    let text = r#"{"sets": {"X": ["x", "y"], "I": ["i"]},
 "maps": {"f": {"dom": "X", "cod": "I", "table": {"x": "i"}}}}"#;
    let err = parse_instance(text).unwrap_err();
    assert!(err.message.contains("not total"), "{}", err.message);
}

#[test]
fn unknown_fields_are_syntax_errors() {
    let err = parse_instance(r#"{"sets": {}, "colours": {}}"#).unwrap_err();
    assert_eq!(err.location.map(|l| l.line), Some(1));
}

#[test]
fn depprod_agrees_with_sections() {
    let path = instances().join("two_sections.json");
    for strategy in ["minimal", "padded:2"] {
        let out = excomp(&["--strategy", strategy, "depprod", path.to_str().unwrap(), "--f", "f", "--g", "g", "--oracle"]);
        assert!(out.status.success(), "{}", stdout(&out));
        assert!(stdout(&out).contains("iso: yes, classes per index: [2]"), "{}", stdout(&out));
    }
}

#[test]
fn depprod_accepts_named_pairs() {
    let path = instances().join("finite_sets.json");
    let out = excomp(&["depprod", path.to_str().unwrap(), "--pair", "two_sections", "--oracle"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("PASS\n"));
}

#[test]
fn cetcs_passes_with_the_number_axiom_skipped() {
    let out = excomp(&["--report", "json", "cetcs"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "excomp-report");
    assert_eq!(v["passed"], true);
    let axioms = v["result"]["audit"]["axioms"].as_array().unwrap();
    assert_eq!(axioms.len(), 10);
    for a in axioms {
        let expected = if a["id"] == "C3" { "skipped" } else { "pass" };
        assert_eq!(a["verdict"]["verdict"], expected, "{}", a["id"]);
    }
}

#[test]
fn same_seed_same_report() {
    let run = || excomp(&["--report", "json", "--seed", "7", "cetcs"]).stdout;
    assert_eq!(run(), run());
}

#[test]
fn bhk_finds_witnesses() {
    let path = instances().join("finite_sets.json");
    let out = excomp(&["bhk", path.to_str().unwrap(), "--formula", "forall x:X. exists y:Y. g(y) = x"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("holds at 1 of 1 points"), "{}", stdout(&out));
}

#[test]
fn exit_codes() {
    let path = instances().join("finite_sets.json");
    let ok = excomp(&["complete", path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));

    let capped = excomp(&["--max-size", "1", "depprod", path.to_str().unwrap(), "--pair", "two_sections"]);
    assert_eq!(capped.status.code(), Some(1));

    let bad = temp_file("bad.json", r#"{"sets": {"X": ["x", "x"]}}"#);
    let invalid = excomp(&["check-base", bad.to_str().unwrap()]);
    assert_eq!(invalid.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&invalid.stderr).contains("1:"));
    std::fs::remove_file(bad).ok();

    assert_eq!(excomp(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(excomp(&["bhk", path.to_str().unwrap(), "--formula", "exists"]).status.code(), Some(2));
}
