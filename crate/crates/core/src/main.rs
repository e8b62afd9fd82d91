use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modval::cli::{eval, list_checks, parse_tau, render, run_checks, Cache, EvalFunction, Format, Selection};
use modval::mpcore::make_context;
use modval::qseries::NewformId;
use modval::Error;

#[derive(Parser)]
#[command(name = "modval", version, about = "High-precision checks of modular L-value identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List registered checks with anchors and thresholds.
    List {
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Run checks and write a report.
    Run(RunArgs),
    /// Evaluate one function at a point.
    Eval {
        /// eta, f0, f1, f2, f3, t, varpi1, varpi2, e4, imod, mahler or l
        function: EvalFunction,
        /// Point in the upper half-plane as <re>,<im>.
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        /// Newform for `l`: f15, g12 or e14.
        #[arg(long, default_value = "f15")]
        form: NewformId,
        #[arg(long, default_value_t = 2)]
        s: u32,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Manage the constant cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Check id; repeatable.
    #[arg(long = "check", required_unless_present = "all", conflicts_with = "all")]
    checks: Vec<String>,
    /// Run every check in the registry.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 100)]
    digits: u32,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Report destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Compute every constant afresh without touching the cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Remove all cache entries.
    Clear,
    /// Show cache location and size.
    Stat,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn run(args: RunArgs) -> ExitCode {
    let sel = if args.all { Selection::All } else { Selection::Ids(args.checks) };
    let cache = if args.no_cache { None } else { Some(Cache::from_env()) };
    let (results, summary) = match run_checks(&sel, args.digits, args.jobs, cache.as_ref()) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let text = render(&results, &summary, args.format);
    match &args.out {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("error: writing {}: {e}", p.display());
                return ExitCode::from(1);
            }
            eprintln!(
                "{} checks: {} passed, {} failed, {} skipped; report in {}",
                summary.total,
                summary.passed,
                summary.failed,
                summary.skipped,
                p.display()
            );
        }
        None => print!("{text}"),
    }
    if summary.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match cli.cmd {
        Cmd::List { format } => {
            for (id, anchor, th) in list_checks() {
                match format {
                    Format::Text => println!("{id:<28} {th:<6} {anchor}"),
                    Format::Json => println!(
                        "{}",
                        serde_json::json!({ "check_id": id, "anchor": anchor, "threshold": th.to_string() })
                    ),
                }
            }
            ExitCode::SUCCESS
        }
        Cmd::Run(args) => run(args),
        Cmd::Eval { function, tau, form, s, digits } => {
            let ctx = match make_context(digits) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let tau = match tau.as_deref().map(|t| parse_tau(t, ctx.prec())).transpose() {
                Ok(t) => t,
                Err(e) => return usage(e),
            };
            if function.needs_tau() && tau.is_none() {
                return usage(format!("{function} needs --tau <re>,<im>"));
            }
            match eval(function, tau.as_ref(), form, s, &ctx) {
                Ok(v) => {
                    println!("{v}");
                    ExitCode::SUCCESS
                }
                Err(e @ (Error::Domain(_) | Error::Unknown { .. } | Error::PrecisionTooLow(_))) => usage(e),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Cmd::Cache { action } => {
            let cache = Cache::from_env();
            match action {
                CacheAction::Clear => match cache.clear() {
                    Ok(n) => {
                        println!("removed {n} entries from {}", cache.dir().display());
                        ExitCode::SUCCESS
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        ExitCode::from(1)
                    }
                },
                CacheAction::Stat => match cache.stat() {
                    Ok(s) => {
                        println!("dir: {}", s.dir);
                        println!("entries: {}", s.entries);
                        println!("stale: {}", s.stale);
                        println!("bytes: {}", s.bytes);
                        ExitCode::SUCCESS
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        ExitCode::from(1)
                    }
                },
            }
        }
    }
}
