use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect()
}

fn latticerect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latticerect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("latticerect-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_ex2_passes() {
    let out = latticerect(&["verify", "--input", fixture("ex2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("segment_oracle"));
    assert!(text.contains("brute_force"));
}

#[test]
fn graph_writes_dot_and_stable_json() {
    let dot = scratch("ex1.dot");
    let j1 = scratch("ex1-a.json");
    let j2 = scratch("ex1-b.json");
    for json in [&j1, &j2] {
        let out = latticerect(&[
            "graph",
            "--input",
            fixture("ex1.json").to_str().unwrap(),
            "--dot",
            dot.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let dot = std::fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("graph lattices {"));
    assert_eq!(dot.matches(" -- ").count(), 4);
    assert_eq!(std::fs::read(&j1).unwrap(), std::fs::read(&j2).unwrap());
}

#[test]
fn iwasawa_needs_its_section() {
    let out = latticerect(&["iwasawa", "--input", fixture("iwasawa.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = latticerect(&["iwasawa", "--input", fixture("ex2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_hypotheses_exit_one() {
    // all generators diagonal: no reducibility ideal to speak of
    let path = scratch("diag.json");
    std::fs::write(
        &path,
        r#"{"field": {"type": "Fp", "p": 5}, "variables": ["t"],
            "generators": [{"label": "g0", "matrix": [["2", "0"], ["0", "1"]]}]}"#,
    )
    .unwrap();
    let out = latticerect(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn input_errors_exit_two() {
    let out = latticerect(&["analyze", "--input", fixture("invalid_caret.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("generators[1].matrix[0][1]: column 2"), "{err}");
    let out = latticerect(&["analyze", "--input", fixture("invalid_char2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("characteristic two"));
    let out = latticerect(&["analyze", "--input", "/nonexistent/input.json"]);
    assert_eq!(out.status.code(), Some(2));
}
