use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn permgf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permgf")).args(args).env("RUST_LOG", "error").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn spec(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name).display().to_string()
}

#[test]
fn decompose() {
    for (perm, expect) in [("479832156", "2413[1,132,321,12]"), ("1", "1[1]"), ("123", "12[1,12]")] {
        let out = permgf(&["decompose", perm]);
        assert!(out.status.success());
        assert_eq!(stdout(&out).trim(), expect);
    }
    assert!(!permgf(&["decompose", "1224"]).status.success());
}

#[test]
fn simples_table() {
    let out = permgf(&["simples", &spec("av1324_2143_4231.toml")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("counts: 1, 2, 0, 2, 4, 0, 0"), "{text}");
    assert!(text.trim_end().ends_with("complete"));
}

#[test]
fn wreath_basis() {
    let out = permgf(&["wreath-basis", "--simples", "1,12,21,2413"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3142, 25314, 246135, 362514");
}

#[test]
fn count_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = permgf(&[
        "count",
        &spec("av132.toml"),
        "--n",
        "8",
        "--eliminate",
        "--oracle-check",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("x*f^2 + (2*x - 1)*f + x"), "{text}");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let seq: Vec<&str> = report["sequence"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(seq, ["1", "2", "5", "14", "42", "132", "429", "1430"]);
    assert!(report["oracle"].as_array().unwrap().iter().all(|r| r["status"] == "MATCH"));
}

#[test]
fn infinitely_many_simples_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("av321.toml");
    fs::write(&path, "basis = [\"321\"]\n[caps]\nmax_simple_length = 7\n").unwrap();
    let out = permgf(&["count", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infinitely many simple permutations"));
}
