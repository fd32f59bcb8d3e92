#![allow(dead_code)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("not json ({e}): {}", self.stdout))
    }
}

fn collect(out: Output) -> Run {
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn run(args: &[&str]) -> Run {
    collect(
        Command::new(env!("CARGO_BIN_EXE_fermiconc"))
            .args(args)
            .output()
            .expect("binary runs"),
    )
}

/// Scratch directory holding state files for one test.
pub struct Scratch {
    dir: TempDir,
}

impl Scratch {
    pub fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    pub fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::File::create(&path)
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
        path
    }

    /// Run `gen` and store its output.
    pub fn gen(&self, name: &str, args: &[&str]) -> PathBuf {
        let mut full = vec!["gen"];
        full.extend_from_slice(args);
        let r = run(&full);
        assert_eq!(r.code, 0, "gen failed: {}", r.stderr);
        self.write(name, &r.stdout)
    }
}

pub fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}
