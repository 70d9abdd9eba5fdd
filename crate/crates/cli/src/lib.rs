//! Command-line front end for `stiefel-bp`.
//!
//! Every command computes a JSON value; `--pretty` renders that value for
//! people. Exit status: 0 on success, 1 on a computation error or a failed
//! comparison, 2 on a usage error.

pub mod commands;
pub mod pretty;
pub mod suites;

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use stiefel_bp::obstruction::ScanRanges;
use stiefel_bp::{Exec, Prime};

use commands::{PresentMode, SeriesKind};
use suites::SuiteOptions;

/// Environment variable holding the default prime.
pub const PRIME_ENV: &str = "STIEFEL_BP_PRIME";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn compute(e: impl std::fmt::Display) -> Self {
        CliError::Compute(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Failed(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "stiefel-bp", version, about = "BP-cohomology of projective Stiefel manifolds and equivariant map obstructions")]
pub struct Cli {
    /// Human-readable output rendered from the JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Run everything on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let p: u64 = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    Prime::new(p).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct ModeFlags {
    /// Run the spectral sequence engine.
    #[arg(long)]
    pub engine: bool,
    /// Closed form from binomial valuations (default).
    #[arg(long)]
    pub closed_form: bool,
    /// Both, plus a comparison; exits 1 if they disagree.
    #[arg(long)]
    pub both: bool,
}

impl ModeFlags {
    fn mode(&self) -> PresentMode {
        if self.engine {
            PresentMode::Engine
        } else if self.both {
            PresentMode::Both
        } else {
            PresentMode::ClosedForm
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Presentation of BP^*(PW(n,k)).
    Present {
        n: usize,
        k: usize,
        /// Prime (default from STIEFEL_BP_PRIME, else 2).
        #[arg(value_parser = parse_prime, env = PRIME_ENV, default_value = "2")]
        p: Prime,
        #[command(flatten)]
        mode: ModeFlags,
        /// Highest power of x kept on the pages (default n + 8).
        #[arg(long)]
        xmax: Option<usize>,
    },
    /// A formal group law series: log, exp, fgl, nseries:a or adams:a.
    Series {
        #[arg(value_parser = clap::value_parser!(SeriesKind))]
        kind: SeriesKind,
        #[arg(value_parser = parse_prime, env = PRIME_ENV, default_value = "2")]
        p: Prime,
        /// Highest power of x kept.
        #[arg(default_value_t = 8)]
        xmax: usize,
        /// Terms in J^jorder are dropped (2 means modulo J^2).
        #[arg(default_value_t = 2)]
        jorder: u32,
    },
    /// Obstructions to an equivariant map W(n,k) -> W(m,l).
    Obstruct { n: usize, k: usize, m: usize, l: usize },
    /// Obstructions over a grid; ranges are `a..b` (inclusive) or `a`.
    Scan {
        #[arg(value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(value_parser = parse_range)]
        k: RangeInclusive<usize>,
        #[arg(value_parser = parse_range)]
        m: RangeInclusive<usize>,
        #[arg(value_parser = parse_range)]
        l: RangeInclusive<usize>,
        /// CSV with columns n,k,m,l,verdict,first_firing_criterion.
        #[arg(long)]
        csv: bool,
    },
    /// Run the acceptance suites.
    Selfcheck {
        /// Smaller ranges, a few seconds.
        #[arg(long)]
        quick: bool,
        /// Corrupt the transgression d(y_n) = x^n to p x^n; must fail.
        #[arg(long)]
        mutate_transgression: bool,
    },
}

pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("'{x}' is not a nonnegative integer"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let a = num(s)?;
            (a, a)
        }
    };
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

/// Rendered output of a command, and whether it counts as success.
pub struct Output {
    pub text: String,
    pub ok: bool,
    /// Message for standard error when `ok` is false.
    pub failure: Option<String>,
}

fn render(value: &Value, pretty: bool, render_pretty: fn(&Value) -> String) -> String {
    if pretty {
        render_pretty(value)
    } else {
        serde_json::to_string(value).expect("json") + "\n"
    }
}

/// Runs one command. Progress lines (from `selfcheck`) go to `progress`.
pub fn run(cli: &Cli, progress: &mut dyn FnMut(&str)) -> Result<Output, CliError> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match &cli.command {
        Command::Present { n, k, p, mode, xmax } => {
            let mode = mode.mode();
            let (value, agree) = commands::present_value(*n, *k, *p, mode, *xmax, exec)?;
            let renderer = match mode {
                PresentMode::ClosedForm => pretty::presentation,
                PresentMode::Engine => pretty::engine,
                PresentMode::Both => pretty::both,
            };
            Ok(Output {
                text: render(&value, cli.pretty, renderer),
                ok: agree,
                failure: (!agree).then(|| format!("engine and closed form disagree for W({n},{k}) at p = {p}")),
            })
        }
        Command::Series { kind, p, xmax, jorder } => {
            let value = commands::series_value(kind, *p, *xmax, *jorder)?;
            Ok(Output { text: render(&value, cli.pretty, pretty::series), ok: true, failure: None })
        }
        Command::Obstruct { n, k, m, l } => {
            let value = commands::obstruct_value(*n, *k, *m, *l)?;
            Ok(Output { text: render(&value, cli.pretty, pretty::obstruction), ok: true, failure: None })
        }
        Command::Scan { n, k, m, l, csv } => {
            let ranges = ScanRanges { n: n.clone(), k: k.clone(), m: m.clone(), l: l.clone() };
            let reports = commands::scan_reports(&ranges, exec);
            let text = if *csv {
                commands::scan_csv(&reports)?
            } else {
                let mut text = String::new();
                for r in &reports {
                    let value = serde_json::to_value(r).expect("json");
                    text += &render(&value, cli.pretty, pretty::obstruction);
                }
                text
            };
            Ok(Output { text, ok: true, failure: None })
        }
        Command::Selfcheck { quick, mutate_transgression } => {
            let opts = SuiteOptions { quick: *quick, mutate_transgression: *mutate_transgression, exec };
            let (value, passed) = commands::selfcheck_value(&opts, |line| progress(line));
            let failed: Vec<String> = value["suites"]
                .as_array()
                .into_iter()
                .flatten()
                .filter(|s| s["passed"] == false)
                .map(|s| format!("{} ({})", s["id"].as_str().unwrap_or("?"), s["name"].as_str().unwrap_or("?")))
                .collect();
            Ok(Output {
                text: render(&value, cli.pretty, pretty::selfcheck),
                ok: passed,
                failure: (!passed).then(|| format!("failing suites: {}", failed.join(", "))),
            })
        }
    }
}
