#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn fixture(name: &str) -> String {
    tests_dir()
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

pub fn golden_path(name: &str) -> PathBuf {
    tests_dir().join("golden").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary from `tests/`, so fixture paths can be relative.
pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_linrel"))
        .args(args)
        .current_dir(tests_dir())
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// `(golden file, arguments)`.
pub const GOLDEN: &[(&str, &[&str])] = &[
    (
        "classify_cospan_gf2.txt",
        &["classify", "fixtures/gf2.json", "R"],
    ),
    (
        "classify_identity_gf2.txt",
        &["classify", "fixtures/gf2.json", "Id"],
    ),
    (
        "classify_cospan_gf2.json",
        &["--json", "classify", "fixtures/gf2.json", "R"],
    ),
    (
        "classify_subspace_qq.json",
        &["--json", "classify", "fixtures/qq.json", "Line"],
    ),
    (
        "decompose_cospan_gf2.json",
        &["--json", "decompose", "fixtures/gf2.json", "R"],
    ),
    (
        "decompose_subspace_qq.json",
        &["--json", "decompose", "fixtures/qq.json", "Line"],
    ),
    (
        "decompose_pair_qq.json",
        &[
            "--json",
            "decompose",
            "fixtures/qq.json",
            "PairIe",
            "--mode",
            "pair",
        ],
    ),
    (
        "decompose_pair_qq.txt",
        &["decompose", "fixtures/qq.json", "PairIe", "--mode", "pair"],
    ),
    (
        "subspaces_gf3.json",
        &["--json", "subspaces", "fixtures/gf3.json", "a", "b"],
    ),
    (
        "subspaces_qq.txt",
        &["subspaces", "fixtures/qq.json", "e1", "e2"],
    ),
    (
        "inverse_qq.json",
        &["--json", "inverse", "fixtures/qq.json", "N"],
    ),
];

/// First golden case whose output differs, if any.
pub fn golden_mismatch() -> Option<String> {
    for (name, args) in GOLDEN {
        let r = run(args);
        if r.code != 0 {
            return Some(format!("{name}: exit {} ({})", r.code, r.stderr.trim()));
        }
        match std::fs::read_to_string(golden_path(name)) {
            Ok(expected) if expected == r.stdout => {}
            Ok(_) => return Some(format!("{name}: output differs")),
            Err(e) => return Some(format!("{name}: {e}")),
        }
    }
    None
}
