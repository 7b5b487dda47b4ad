//! Argument parsing and dispatch. Exit codes: 0 success, 1 validation failure,
//! 2 usage, IO or schema error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use ncfib_core::examples::{run_example, ExampleName, ExampleSpec};
use ncfib_core::Scalar;

use crate::config::{run_check, CheckError, Config};
use crate::render::{check_text, example_text};
use crate::report::ExampleReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ncfib", version, about = "Differential fibrations and their Leray-Serre spectral sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a builtin example: s3 (s3_over_z2) or matrix (m3_over_m2).
    Example {
        name: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        /// Cocycle parameter of the group example, e.g. 2 or 3/4.
        #[arg(long)]
        b: Option<String>,
        /// Last spectral page to print.
        #[arg(long, default_value_t = 2)]
        pages: usize,
    },
    /// Build a calculus from a JSON config and check its structure.
    Check {
        path: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn json<T: serde::Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("reports serialize");
    s.push('\n');
    s
}

fn example(
    name: &str,
    format: Format,
    max_degree: usize,
    b: Option<&str>,
    pages: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let Some(which) = ExampleName::parse(name) else {
        let _ = writeln!(err, "error: unknown example '{name}' (expected s3, s3_over_z2, matrix or m3_over_m2)");
        return EXIT_USAGE;
    };
    let mut spec = ExampleSpec::new(which);
    spec.max_degree = max_degree;
    spec.pages = pages;
    if max_degree == 0 {
        let _ = writeln!(err, "error: --max-degree must be at least 1");
        return EXIT_USAGE;
    }
    if let Some(b) = b {
        if which != ExampleName::S3OverZ2 {
            let _ = writeln!(err, "error: --b only applies to the group example");
            return EXIT_USAGE;
        }
        match b.parse::<Scalar>() {
            Ok(v) => spec.b = v,
            Err(e) => {
                let _ = writeln!(err, "error: --b: {e}");
                return EXIT_USAGE;
            }
        }
    }
    match run_example(&spec) {
        Ok(run) => {
            let report = ExampleReport::from(&run);
            let text = match format {
                Format::Json => json(&report),
                Format::Text => example_text(&report),
            };
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn check(path: &str, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match Config::load(path) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match run_check(&cfg) {
        Ok(report) => {
            let text = match format {
                Format::Json => json(&report),
                Format::Text => check_text(&report),
            };
            let _ = out.write_all(text.as_bytes());
            if report.passed() {
                EXIT_OK
            } else {
                let _ = writeln!(err, "error: calculus fails structural checks");
                EXIT_INVALID
            }
        }
        Err(CheckError::Config(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match cli.command {
        Command::Example { name, format, max_degree, b, pages } => {
            example(&name, format, max_degree, b.as_deref(), pages, out, err)
        }
        Command::Check { path, format } => check(&path, format, out, err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut full = vec!["ncfib"];
        full.extend_from_slice(args);
        let code = run(full, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["example", "s3", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["example", "torus"]).0, EXIT_USAGE);
        assert_eq!(call(&["example", "matrix", "--b", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["example", "s3", "--b", "x/y"]).0, EXIT_USAGE);
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn half_b_is_rejected() {
        let (code, out, err) = call(&["example", "s3", "--b", "1/2"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(out.is_empty());
        assert!(err.contains("not connected"), "{err}");
    }
}
