#![allow(dead_code)]

#[path = "../../../suite/src/golden.rs"]
pub mod golden;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn hematocrit() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/hematocrit.json")
}

pub fn histreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_histreg"))
        .args(args)
        .env_remove(histreg_cli::THREADS_ENV)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}
