//! End-to-end runs on the shipped spec files.

use std::fs;
use std::path::PathBuf;

use permgf::class::ClassSpec;
use permgf::pipeline::{run, RunOptions, SpecFile, Verdict};

fn spec_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn load(text: &str) -> ClassSpec {
    text.parse::<SpecFile>().unwrap().class_spec().unwrap()
}

fn opts(order: usize, eliminate: bool, oracle: Option<usize>) -> RunOptions {
    RunOptions { order, involutions: false, eliminate, oracle_check: oracle }
}

#[test]
fn shipped_specs_parse() {
    let mut seen = 0;
    for entry in fs::read_dir(spec_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let text = fs::read_to_string(&path).unwrap();
            let file: SpecFile = text.parse().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            file.class_spec().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 6);
}

#[test]
fn increasing_only() {
    let report = run(&load("basis = [\"21\"]"), &opts(6, true, Some(6))).unwrap();
    assert_eq!(report.sequence, ["1"; 6]);
    assert_eq!(report.annihilator.as_ref().unwrap().polynomial, "(x - 1)*f + x");
    assert!(report.all_match());
}

#[test]
fn separables_against_brute_force() {
    let text = fs::read_to_string(spec_dir().join("separables.toml")).unwrap();
    let report = run(&load(&text), &opts(8, true, Some(8))).unwrap();
    assert_eq!(report.sequence, ["1", "2", "6", "22", "90", "394", "1806", "8558"]);
    assert!(report.oracle.iter().all(|r| r.status == Verdict::Match));
    assert_eq!(report.oracle.len(), 8);
}

#[test]
fn fine_sums_at_eight() {
    let text = fs::read_to_string(spec_dir().join("av2413_3142_2143.toml")).unwrap();
    let report = run(&load(&text), &opts(8, false, Some(8))).unwrap();
    // sum_k C(n, k) F_{n-k} with F the Fine numbers.
    let fine = [1u64, 0, 1, 2, 6, 18, 57, 186, 622];
    let choose = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    for n in 1..=8usize {
        let expect: u64 = (0..=n).map(|k| choose(n as u64, k as u64) * fine[n - k]).sum();
        assert_eq!(report.sequence[n - 1], expect.to_string(), "n = {n}");
    }
    assert!(report.all_match());
}

#[test]
fn timing_is_the_only_nondeterminism() {
    let spec = load("basis = [\"2413\", \"3142\"]\nproperties = [\"alternating\"]");
    let a = run(&spec, &opts(12, true, None)).unwrap();
    let b = run(&spec, &opts(12, true, None)).unwrap();
    assert_eq!(
        serde_json::to_string(&a.without_timing()).unwrap(),
        serde_json::to_string(&b.without_timing()).unwrap()
    );
}
