//! Golden-file harness shared by the CLI and acceptance tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct GoldenCase {
    pub config: &'static str,
    pub command: &'static str,
    pub format: &'static str,
    pub exit_code: i32,
}

const fn case(config: &'static str, command: &'static str, format: &'static str, exit_code: i32) -> GoldenCase {
    GoldenCase { config, command, format, exit_code }
}

pub const CASES: &[GoldenCase] = &[
    case("design_minimal", "design", "json", 0),
    case("design_minimal", "design", "csv", 0),
    case("design_infeasible", "design", "json", 3),
    case("bounds_interpolation", "bounds", "json", 0),
    case("bounds_extrapolation", "bounds", "json", 0),
    case("bounds_derivative", "bounds", "csv", 0),
    case("bounds_unbounded", "bounds", "json", 2),
    case("solve_roundtrip", "solve", "json", 0),
    case("solve_explicit_m", "solve", "json", 0),
    case("solve_infeasible", "solve", "json", 3),
    case("simulate_exp", "simulate", "json", 0),
    case("diagnostics", "diagnostics", "json", 0),
    case("diagnostics", "diagnostics", "csv", 0),
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

impl GoldenCase {
    pub fn expected_path(&self) -> PathBuf {
        let ext = if self.exit_code == 0 { self.format } else { "err" };
        golden_dir().join(format!("{}.{}.{}", self.config, self.command, ext))
    }

    /// Runs the binary; returns (exit code, stdout or stderr as appropriate).
    pub fn run(&self) -> (i32, Vec<u8>) {
        let out = Command::new(env!("CARGO_BIN_EXE_optdesign"))
            .arg(self.command)
            .arg("--config")
            .arg(format!("{}.json", self.config))
            .arg("--format")
            .arg(self.format)
            .env("OPTDESIGN_CONFIG_DIR", golden_dir())
            .current_dir(std::env::temp_dir())
            .output()
            .expect("binary runs");
        let code = out.status.code().unwrap_or(-1);
        let body = if code == 0 { out.stdout } else { out.stderr };
        (code, body)
    }

    /// Compares one run against the stored file, rewriting it when
    /// `UPDATE_GOLDEN` is set.
    pub fn check(&self) -> Result<(), String> {
        let (code, body) = self.run();
        if code != self.exit_code {
            return Err(format!(
                "{} {}: exit {code}, expected {}: {}",
                self.config,
                self.command,
                self.exit_code,
                String::from_utf8_lossy(&body)
            ));
        }
        let path = self.expected_path();
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &body).map_err(|e| e.to_string())?;
        }
        let expected = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if expected != body {
            return Err(format!("{} differs from the stored output", path.display()));
        }
        Ok(())
    }
}
