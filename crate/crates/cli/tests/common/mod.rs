#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn corpus_file(rel: &str) -> PathBuf {
    fixtures().join("tests").join(rel)
}

/// Runs the binary with `--fixtures` pointing at the fixture tree.
pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intent-shacl"))
        .arg("--fixtures")
        .arg(fixtures())
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}
