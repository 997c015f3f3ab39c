//! The golden command list and a runner for the `engine` binary.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub id: String,
    pub exit: i32,
    pub args: Vec<String>,
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(crate_dir().join("tests/golden/commands.txt")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.splitn(3, '|').map(str::trim).collect();
            Case {
                id: parts[0].to_string(),
                exit: parts[1].parse().unwrap(),
                args: parts[2].split_whitespace().map(String::from).collect(),
            }
        })
        .collect()
}

/// Stdout for successful runs, stderr otherwise; JSON has `timing_ms`
/// dropped.
pub fn run(dir: &Path, args: &[String], json: bool) -> (String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_engine"));
    cmd.current_dir(dir).args(args);
    if json {
        cmd.arg("--json");
    }
    let out = cmd.output().unwrap();
    let code = out.status.code().unwrap();
    if code <= 1 {
        (strip_timing(&String::from_utf8(out.stdout).unwrap()), code)
    } else {
        (String::from_utf8(out.stderr).unwrap(), code)
    }
}

pub fn strip_timing(s: &str) -> String {
    s.lines().filter(|l| !l.trim_start().starts_with("\"timing_ms\"")).map(|l| format!("{l}\n")).collect()
}

/// Runs every golden case twice; returns one message per mismatch. With
/// `update`, the expected files are rewritten instead of compared.
pub fn check_golden(update: bool) -> Vec<String> {
    let dir = crate_dir();
    let mut failures = Vec::new();
    for c in cases() {
        let json = c.exit <= 1;
        let (first, code) = run(&dir, &c.args, json);
        let (second, code2) = run(&dir, &c.args, json);
        if code != c.exit || code2 != c.exit {
            failures.push(format!("{}: exit {code}/{code2}, expected {}\n{first}", c.id, c.exit));
            continue;
        }
        if first != second {
            failures.push(format!("{}: two runs differ", c.id));
            continue;
        }
        let path = dir.join("tests/golden").join(format!("{}.out", c.id));
        if update {
            std::fs::write(&path, &first).unwrap();
        } else {
            match std::fs::read_to_string(&path) {
                Ok(expected) if expected == first => {}
                Ok(_) => failures.push(format!("{}: output differs from {}", c.id, path.display())),
                Err(e) => failures.push(format!("{}: {e}", c.id)),
            }
        }
    }
    failures
}
