//! Machine files and reports checked in as golden files. Run with `UPDATE_GOLDEN=1` to
//! regenerate them after an intentional change.

use std::fs;
use std::path::{Path, PathBuf};

use qtm_cli::{run, Machine, Output};
use qtm_core::{gallery, DataSlot, Transition};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn machine_path(name: &str) -> PathBuf {
    root().join("machines").join(format!("{name}.json"))
}

fn updating() -> bool {
    std::env::var_os("UPDATE_GOLDEN").is_some()
}

fn check_or_write(path: &Path, actual: &str) {
    if updating() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{} is stale; rerun with UPDATE_GOLDEN=1", path.display());
}

fn machines() -> Vec<(&'static str, Transition)> {
    let mut all = gallery::all::<f64>();
    all.push(("never-halting", gallery::never_halting()));
    all
}

#[test]
fn machine_files_match_the_gallery() {
    for (name, d_fn) in machines() {
        let canonical = Machine::new(Some(name.to_string()), d_fn.clone(), DataSlot::IDENTITY).to_canonical_json();
        let path = machine_path(name);
        check_or_write(&path, &canonical);
        let parsed = Machine::parse(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed.transition, d_fn, "{name}");
        assert_eq!(parsed.name.as_deref(), Some(name));
    }
}

fn report(args: &[&str]) -> Output {
    let mut argv = vec!["qtm".to_string(), args[0].to_string(), machine_path(args[1]).display().to_string()];
    argv.extend(args[2..].iter().map(|s| s.to_string()));
    run(argv)
}

/// `(golden file stem, arguments with the machine name in second place, expected exit code)`.
const REPORTS: &[(&str, &[&str], i32)] = &[
    ("validate-identity", &["validate", "identity"], 0),
    ("validate-not-machine", &["validate", "not-machine"], 0),
    ("validate-head-splitter", &["validate", "head-splitter"], 2),
    ("validate-stay-right-splitter", &["validate", "stay-right-splitter"], 2),
    ("validate-coin-json", &["validate", "coin", "--json"], 0),
    ("run-write-one", &["run", "write-one-and-halt", "--steps", "5"], 0),
    ("run-coin", &["run", "coin", "--steps", "3"], 0),
    ("run-coin-seed-7", &["run", "coin", "--seed", "7"], 0),
    ("run-coin-seed-7-json", &["run", "coin", "--seed", "7", "--json"], 0),
    ("run-never-halting-seed", &["run", "never-halting", "--steps", "5", "--seed", "3"], 0),
    ("run-head-splitter", &["run", "head-splitter"], 2),
    ("compare-coin", &["compare-halting", "coin"], 0),
    ("compare-write-one", &["compare-halting", "write-one-and-halt", "--steps", "5"], 0),
    ("compare-processor-hadamard", &["compare-halting", "processor-hadamard", "--steps", "2"], 3),
    ("compare-processor-hadamard-json", &["compare-halting", "processor-hadamard", "--steps", "2", "--json"], 3),
    ("oracle-identity", &["oracle", "identity", "--cells", "3"], 0),
    ("oracle-head-splitter", &["oracle", "head-splitter", "--cells", "4"], 0),
    ("oracle-coin", &["oracle", "coin"], 0),
];

#[test]
fn reports_match_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for &(stem, args, code) in REPORTS {
        let out = report(args);
        assert_eq!(out.code, code, "{stem}: {}", out.stderr);
        assert!(out.stderr.is_empty(), "{stem}: {}", out.stderr);
        check_or_write(&dir.join(format!("{stem}.txt")), &out.stdout);
        assert_eq!(report(args), out, "{stem} is not reproducible");
    }
}
