use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use atomiclab_core::verify::{emit_report, parse_monoid_spec, run_suite, Format, Overrides, SUITES};
use clap::{Parser, Subcommand, ValueEnum};

const SEED_VAR: &str = "ATOMICLAB_SEED";

#[derive(Parser)]
#[command(name = "atomiclab", version, about = "Bounded verification suites for atomic monoids and their algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite and print its report.
    Suite {
        /// One of grams, prop51, thm32, thm43, lemma41, lemma53, thm54, all.
        name: String,
        /// Generator depth (truncation N for thm32).
        #[arg(long)]
        depth: Option<usize>,
        /// Largest coefficient tried in membership searches.
        #[arg(long = "coeff-bound")]
        coeff_bound: Option<u64>,
        /// Largest denominator level explored by the algebra descents.
        #[arg(long = "denom-bound")]
        denom_bound: Option<u64>,
        /// Characteristic of the coefficient field.
        #[arg(long)]
        field: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        /// Monoid spec file; its generators are checked for atomhood.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Record per-check wall-clock times (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_seed(s: &str) -> Option<u64> {
    match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Suite { name, depth, coeff_bound, denom_bound, field, format, spec, timings } = cli.command;

    if !SUITES.contains(&name.as_str()) {
        return usage_error(format!("unknown suite `{name}`; expected one of {}", SUITES.join(", ")));
    }
    let seed = match std::env::var(SEED_VAR) {
        Ok(v) => match parse_seed(v.trim()) {
            Some(s) => Some(s),
            None => return usage_error(format!("{SEED_VAR} must be an unsigned integer, got `{v}`")),
        },
        Err(_) => None,
    };
    let spec = match spec {
        Some(path) => {
            let text = match std::fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) => return usage_error(format!("{}: {e}", path.display())),
            };
            match parse_monoid_spec(&text) {
                Ok(s) => Some(s),
                Err(e) => return usage_error(format!("{}: {e}", path.display())),
            }
        }
        None => None,
    };

    let overrides = Overrides { depth, coeff_bound, denom_bound, field, seed, timings, spec };
    let report = match run_suite(&name, &overrides) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let format = match format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    let mut out = emit_report(&report, format);
    if !out.ends_with('\n') {
        out.push('\n');
    }
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(1);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
