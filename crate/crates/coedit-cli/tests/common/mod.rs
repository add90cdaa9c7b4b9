//! Shared helpers for the integration suites: locating fixtures, driving
//! the binary, and the independent metric oracles.

#![allow(dead_code)]

pub mod oracles;

use std::path::PathBuf;
use std::process::Command;

/// The compiled `coedit` binary.
pub fn coedit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coedit"))
}

/// Absolute path of a bundled fixture.
pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// Run the binary, asserting success; returns captured stderr.
pub fn run_ok(args: &[&str]) -> String {
    let out = coedit().args(args).output().expect("spawn coedit");
    assert!(
        out.status.success(),
        "coedit {args:?} failed with {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Run the binary expecting a specific exit code.
pub fn run_expect(args: &[&str], code: i32) -> String {
    let out = coedit().args(args).output().expect("spawn coedit");
    assert_eq!(
        out.status.code(),
        Some(code),
        "coedit {args:?}\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stderr).into_owned()
}
