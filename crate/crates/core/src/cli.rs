//! Command-line driver.
//!
//! Exit codes: 0 when every property holds, 1 on a property failure, 2 on
//! usage, parse or lookup errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::carrier::perfect_certificate;
use crate::demo;
use crate::error::{Error, Result};
use crate::suites::{self, Config, Suite};
use crate::system::{parse_system, AnySystem, Classification, SequentialSystem};

pub const SEED_ENV: &str = "RIESZ_LIMITS_SEED";
pub const DEFAULT_SEED: u64 = 42;
const CERTIFICATE_SAMPLES: usize = 4;

#[derive(Parser, Debug)]
#[command(
    name = "riesz-limits",
    version,
    about = "Exact checks on direct and inverse limits of vector lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named property suite.
    Verify {
        suite: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        depth: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: Option<u64>,
        /// Overridden by RIESZ_LIMITS_SEED.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print a worked scenario.
    Demo {
        name: String,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
    },
    /// Classify the system in a file.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run(
    args: impl IntoIterator<Item = OsString>,
    seed_env: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, seed_env) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, seed_env: Option<&str>) -> Result<(String, i32)> {
    match command {
        Command::Verify {
            suite,
            depth,
            trials,
            seed,
            format,
        } => {
            let suite = Suite::from_name(&suite)?;
            let seed = match seed_env {
                Some(s) => s.trim().parse().map_err(|_| {
                    Error::PreconditionViolated(format!("{SEED_ENV} must be an unsigned integer"))
                })?,
                None => seed,
            };
            let cfg = Config {
                depth: depth.map_or(suite.default_depth(), |d| d as usize),
                trials: trials.map_or(suite.default_trials(), |t| t as usize),
                seed,
            };
            let report = suites::run(suite, &cfg)?;
            let mut text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            if !text.ends_with('\n') {
                text.push('\n');
            }
            Ok((text, if report.passed() { 0 } else { 1 }))
        }
        Command::Demo { name, depth } => Ok((demo::run(&name, depth as usize)?, 0)),
        Command::Check { file, depth } => {
            let text = std::fs::read_to_string(&file).map_err(|e| {
                Error::PreconditionViolated(format!("cannot read {}: {e}", file.display()))
            })?;
            Ok((check(&text, depth as usize)?, 0))
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// The `check` report for the system described by `text`.
pub fn check(text: &str, depth: usize) -> Result<String> {
    let system = parse_system(text)?;
    let (depth, classification, certificate) = match &system {
        AnySystem::Direct(s) => {
            let depth = s.available_depth(depth);
            let cert = match perfect_certificate(s, depth, CERTIFICATE_SAMPLES) {
                Ok(c) if c.all_checks_pass() => "issued".to_string(),
                Ok(_) => "issued, bidual spot checks failed".to_string(),
                Err(Error::CertificateRefused { flag }) => format!("refused ({flag})"),
                Err(e) => return Err(e),
            };
            (depth, s.classify(depth)?, cert)
        }
        AnySystem::Inverse(s) => {
            let depth = s.available_depth(depth);
            let c = s.classify(depth)?;
            // With surjective steps the dual is a direct system of the
            // same kind as above.
            let cert = if !c.all_surjective {
                "refused (steps_surjective)".to_string()
            } else {
                match perfect_certificate(&s.dual()?, depth, CERTIFICATE_SAMPLES) {
                    Ok(c) if c.all_checks_pass() => "issued (via the dual system)".to_string(),
                    Ok(_) => "issued, bidual spot checks failed".to_string(),
                    Err(Error::CertificateRefused { flag }) => {
                        format!("refused ({flag} in the dual system)")
                    }
                    Err(e) => return Err(e),
                }
            };
            (depth, c, cert)
        }
    };
    Ok(render_check(&system, depth, &classification, &certificate))
}

fn render_check(system: &AnySystem, depth: usize, c: &Classification, certificate: &str) -> String {
    let mut out = String::new();
    let dims: Vec<String> = (1..=depth)
        .map(|k| match system {
            AnySystem::Direct(s) => s.dim(k),
            AnySystem::Inverse(s) => s.dim(k),
        })
        .map(|d| d.map_or_else(|_| "?".to_string(), |d| d.to_string()))
        .collect();
    let _ = writeln!(
        out,
        "system {} classified to depth {depth}",
        c.orientation.name()
    );
    let _ = writeln!(out, "dims {}", dims.join(" "));
    let _ = writeln!(
        out,
        "step   map      injective  surjective  interval_preserving image_band"
    );
    for s in &c.steps {
        let (from, to) = match c.orientation {
            crate::system::Orientation::Direct => (s.level, s.level + 1),
            crate::system::Orientation::Inverse => (s.level + 1, s.level),
        };
        let band = s
            .image_band
            .as_ref()
            .map_or_else(|| "-".to_string(), |b| b.to_string());
        let _ = writeln!(
            out,
            "{:<6} {:<8} {:<10} {:<11} {:<19} {}",
            s.level,
            format!("{from}->{to}"),
            yes(s.injective),
            yes(s.surjective),
            yes(s.interval_preserving),
            band
        );
    }
    let _ = writeln!(out, "lattice homomorphisms (VL): yes");
    let _ = writeln!(
        out,
        "interval preserving (IVL): {}",
        yes(c.all_interval_preserving)
    );
    let _ = writeln!(out, "injective steps: {}", yes(c.all_injective));
    let _ = writeln!(out, "surjective steps: {}", yes(c.all_surjective));
    let _ = writeln!(out, "perfect certificate: {certificate}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str], env: Option<&str>) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let args = std::iter::once("riesz-limits")
            .chain(args.iter().copied())
            .map(OsString::from);
        let code = run(args, env, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_names_exit_two() {
        let (code, _, err) = run_args(&["verify", "nosuch"], None);
        assert_eq!(code, 2);
        assert!(err.contains("unknown suite"), "{err}");
        assert_eq!(run_args(&["demo", "nosuch"], None).0, 2);
        assert_eq!(run_args(&["frobnicate"], None).0, 2);
        assert_eq!(run_args(&["verify", "adjoints", "--depth", "0"], None).0, 2);
    }

    #[test]
    fn env_seed_overrides_flag() {
        let (code, a, _) = run_args(
            &["verify", "disjointify", "--trials", "5", "--seed", "1"],
            Some("9"),
        );
        assert_eq!(code, 0);
        let (_, b, _) = run_args(
            &["verify", "disjointify", "--trials", "5", "--seed", "9"],
            None,
        );
        assert_eq!(a, b);
        assert!(a.contains("\"seed\": 9"));
        assert_eq!(run_args(&["verify", "disjointify"], Some("x")).0, 2);
    }

    #[test]
    fn check_reports_parse_errors() {
        let err = check("system direct\nlevels two\n", 4).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn check_inverse_without_surjectivity() {
        let text = "system inverse\nlevels 2\ndim 1 1\ndim 2 2\nmap 2 1\n  1: -\n";
        let report = check(text, 5).unwrap();
        assert!(report.contains("classified to depth 2"));
        assert!(report.contains("perfect certificate: refused (steps_surjective)"));
    }
}
