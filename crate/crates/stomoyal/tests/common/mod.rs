#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.txt")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once(':').unwrap();
            Case { name: name.trim().to_string(), args: args.split_whitespace().map(str::to_string).collect() }
        })
        .collect()
}

/// Exit status and both streams in the golden file layout.
pub fn run(case: &Case) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_stomoyal")).args(&case.args).current_dir(golden_dir()).output().unwrap();
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

pub fn expected_path(case: &Case) -> PathBuf {
    golden_dir().join("expected").join(format!("{}.txt", case.name))
}

/// Names of the cases whose output differs from the frozen file. With
/// `STOMOYAL_BLESS=1` the files are rewritten instead.
pub fn mismatches() -> Vec<String> {
    let bless = std::env::var_os("STOMOYAL_BLESS").is_some();
    let mut bad = Vec::new();
    for case in cases() {
        let actual = run(&case);
        let path = expected_path(&case);
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &actual).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == actual => {}
            Ok(expected) => bad.push(format!("{}:\n--- expected\n{expected}--- actual\n{actual}", case.name)),
            Err(_) => bad.push(format!("{}: no golden file at {}", case.name, path.display())),
        }
    }
    bad
}

pub fn malformed_documents() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> =
        std::fs::read_dir(golden_dir().join("malformed")).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

/// Runs `expect X` on a malformed document; returns the exit code and stderr.
pub fn run_malformed(path: &Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stomoyal")).args(["expect", "X", "--input"]).arg(path).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

/// `e300_grid_length.json` is expected to fail with code `E300`.
pub fn expected_code(path: &Path) -> String {
    let stem = path.file_stem().unwrap().to_string_lossy();
    stem.split('_').next().unwrap().to_uppercase()
}
