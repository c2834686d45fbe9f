use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddjacobi"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn superline_json_matches_golden_file() {
    let o = bin(&["verify", "tests/golden/superline.dsl", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let expected = std::fs::read_to_string(golden("superline.json")).unwrap();
    assert_eq!(stdout(&o), expected);
}

#[test]
fn golden_source_is_the_catalog_entry() {
    let o = bin(&["examples", "run", "superline", "--source"]);
    assert_eq!(stdout(&o), std::fs::read_to_string(golden("superline.dsl")).unwrap());
}

#[test]
fn negative_examples_exit_one() {
    for name in oddjacobi_cli::catalog::NEGATIVE {
        let o = bin(&["examples", "run", name]);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert!(stdout(&o).contains("FAIL"));
    }
}

#[test]
fn malformed_source_exits_two() {
    let dir = std::env::temp_dir().join(format!("oddjacobi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.dsl");
    std::fs::write(&bad, "chart c { coord x : even }\n").unwrap();
    let o = bin(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:26: syntax error"));
    let o = bin(&["verify", dir.join("missing.dsl").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["examples", "run", "unknown"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("superline"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bracket_command() {
    let o = bin(&["bracket", "tests/golden/superline.dsl", "superline", "t", "xi"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/1 - 1/1*t\n");
    let o = bin(&["bracket", "tests/golden/superline.dsl", "superline", "xi", "xi"]);
    // [[xi,xi]] = (-1)^(1+1)({{S,xi},xi} - {Q,xi^2}) = 0 for S = -pi p
    assert_eq!(stdout(&o), "0\n");
    let o = bin(&["bracket", "tests/golden/superline.dsl", "superline", "t", "P[t]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn examples_list_and_text_format() {
    let o = bin(&["examples", "list"]);
    let listed = stdout(&o);
    for name in oddjacobi_cli::catalog::NAMES {
        assert!(listed.contains(name));
    }
    let o = bin(&["examples", "run", "odd_contact(2)", "--seed", "5", "--max-degree", "2", "--parallel"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("structure: odd_contact\n"));
}

#[test]
fn algebroid_data_file() {
    let o = bin(&["algebroid", "tests/golden/action.alg", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["verdict"], true);
}
