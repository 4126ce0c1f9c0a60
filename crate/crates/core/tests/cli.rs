use std::path::Path;
use std::process::{Command, Output};

use cdga::catalog::{fixture, registry};
use cdga::dsl;
use serde_json::Value;

const BASES: &str = "\
max_degree 20

algebra P
  gen y:2 b:3 c:3 u:4 n:5
  d n = b*c + u*y

algebra Q
  gen b:3 c:4 n:6
  d n = b*c

fibration E
  base Q
  fiber odd 3 z
  u = c
";

fn cdga(args: &[&str], env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cdga"));
    cmd.args(args).env_remove("CDGA_MAX_DEGREE");
    if let Some(v) = env {
        cmd.env("CDGA_MAX_DEGREE", v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Checks the fixed report envelope and returns it.
fn check_schema(v: &Value, command: &str) {
    let obj = v.as_object().expect("report is an object");
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "command",
            "input",
            "max_degree",
            "result",
            "version",
            "witnesses"
        ]
    );
    assert_eq!(v["command"], command);
    assert!(v["input"].is_string());
    assert!(v["max_degree"].is_u64() || v["max_degree"].is_null());
    assert!(v["result"].is_object());
    assert!(v["witnesses"].is_array());
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    for w in v["witnesses"].as_array().unwrap() {
        assert!(w["degree"].is_u64());
        assert!(w["label"].is_string());
        match w["kind"].as_str() {
            Some("massey") => {
                assert_eq!(w["triple"].as_array().map(Vec::len), Some(3));
                assert!(w["indeterminacy_dim"].is_u64());
            }
            Some("ideal") => {
                assert!(w["element"].is_string());
                assert!(w["complement_independent"].is_boolean());
            }
            other => panic!("unknown witness kind {other:?}"),
        }
    }
}

#[test]
fn exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.cdga", BASES);
    let cases = [
        ("P", 0, "formal"),
        ("Q", 2, "non-formal"),
        ("E", 0, "formal"),
    ];
    for (block, code, verdict) in cases {
        let out = cdga(&["--json", "formality", &f, "--block", block], None);
        assert_eq!(out.status.code(), Some(code), "block {block}");
        let v = json(&out);
        check_schema(&v, "formality");
        assert_eq!(v["result"]["verdict"], verdict);
        assert_eq!(v["witnesses"].as_array().unwrap().is_empty(), code == 0);
    }
    let v = json(&cdga(&["--json", "formality", &f, "--block", "Q"], None));
    assert_eq!(v["witnesses"][0]["label"], "n*b");
}

#[test]
fn inconclusive_exits_with_three() {
    // The obstruction is the Massey product <a + b, c, c>, which is not a
    // triple of basis classes.
    let dir = tempfile::tempdir().unwrap();
    let text = "algebra A\n  gen a:2 b:2 c:3 e:3 w:4\n  d w = a*c + b*c\n";
    let f = write(dir.path(), "a.cdga", text);
    let out = cdga(&["--json", "--max-degree", "12", "formality", &f], None);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    check_schema(&v, "formality");
    assert_eq!(v["result"]["verdict"], "inconclusive");
    assert!(v["result"]["reason"].is_string());
}

#[test]
fn closable_generators_are_closed_before_checking() {
    let dir = tempfile::tempdir().unwrap();
    let text = "algebra A\n  gen a:2 x:3 y:5\n  d x = a^2\n  d y = a^3\n";
    let f = write(dir.path(), "c.cdga", text);
    let out = cdga(&["--json", "formality", &f, "--max-degree", "14"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["model"], "Λ(a:2, x:3, y:5; dx = a^2)");
}

#[test]
fn every_command_emits_the_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.cdga", BASES);
    let runs: [(&[&str], &str); 6] = [
        (&["validate", &f], "validate"),
        (&["cohomology", &f, "--block", "Q"], "cohomology"),
        (&["minimal-model", &f, "--block", "E"], "minimal-model"),
        (&["fibration", &f], "fibration"),
        (&["massey", &f, "b", "c", "b", "--block", "Q"], "massey"),
        (&["fixture", "hpn:2", "--check"], "fixture"),
    ];
    for (args, command) in runs {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let out = cdga(&full, None);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{command}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        check_schema(&json(&out), command);
    }
}

#[test]
fn flag_beats_environment() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.cdga", BASES);
    let v = json(&cdga(
        &["--json", "cohomology", &f, "--block", "Q"],
        Some("9"),
    ));
    assert_eq!(v["max_degree"], 9);
    assert_eq!(v["result"]["betti"].as_array().unwrap().len(), 10);
    let v = json(&cdga(
        &[
            "--json",
            "--max-degree",
            "11",
            "cohomology",
            &f,
            "--block",
            "Q",
        ],
        Some("9"),
    ));
    assert_eq!(v["max_degree"], 11);
    let v = json(&cdga(&["--json", "cohomology", &f, "--block", "Q"], None));
    assert_eq!(v["max_degree"], 20);
    let out = cdga(&["cohomology", &f], Some("nine"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn syntax_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "bad.cdga",
        "algebra A\n  gen x:2\n  d x = x^^2\n",
    );
    let out = cdga(&["validate", &f], None);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.cdga: line 3, column 11"), "{err}");
    let out = cdga(&["validate", "/nonexistent/x.cdga"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fixtures_round_trip_through_the_dsl() {
    for name in registry() {
        let f = fixture(&name).unwrap();
        let doc = f.document();
        let text = doc.to_string();
        let again = dsl::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        assert_eq!(again, doc, "{name}");
        assert_eq!(again.to_string(), text, "{name}");
    }
}

#[test]
fn printed_fixture_is_accepted_by_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "twistor:hpn:1",
        "sec6-nonprimitive",
        "projective:3:sphere:6",
    ] {
        let out = cdga(&["fixture", name], None);
        assert_eq!(out.status.code(), Some(0));
        let f = write(dir.path(), "fx.cdga", &String::from_utf8_lossy(&out.stdout));
        let out = cdga(&["--json", "validate", &f], None);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let doc = dsl::parse(&std::fs::read_to_string(&f).unwrap()).unwrap();
        assert_eq!(doc, fixture(name).unwrap().document());
    }
}
