//! `fgver`: build geometric objects, verify line-set files, run the acceptance battery.
//!
//! Exit status is 0 when every verdict passes, 1 on a verification failure and 2 on
//! usage or parse errors.

mod build;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fgver_core::suite::{run_suite, Scale};

use report::{Outcome, Report, Verdict};

#[derive(Parser)]
#[command(name = "fgver", version, about = "Finite geometry constructions and verifiers")]
struct Cli {
    /// Worker threads for parallel loops (defaults to all cores).
    #[arg(long, global = true, env = "FGVER_THREADS")]
    threads: Option<usize>,
    /// Record wall-clock time in the report (makes output non-deterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks against a line-set file.
    Verify(verify::VerifyArgs),
    /// Construct an object and write it to files.
    Build {
        #[command(subcommand)]
        what: build::BuildWhat,
    },
    /// Run every acceptance criterion.
    PaperSuite {
        #[arg(long, value_enum, default_value = "small")]
        scale: ScaleArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Small,
    FullDesk,
}

fn paper_suite(scale: ScaleArg, timing: bool) -> Outcome {
    let scale = match scale {
        ScaleArg::Small => Scale::Small,
        ScaleArg::FullDesk => Scale::FullDesk,
    };
    let suite = run_suite(scale, timing);
    let mut report = Report::default();
    for c in &suite.criteria {
        report.verdicts.push(Verdict::new(
            format!("criterion-{:02}", c.id),
            c.pass,
            serde_json::to_value(c).expect("criterion report serializes"),
        ));
    }
    Ok(report)
}

/// Arguments echoed into the report, without the options that must not change it.
fn echo_command(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip_value = false;
    for a in args {
        if std::mem::take(&mut skip_value) {
            continue;
        }
        match a.as_str() {
            "--threads" => skip_value = true,
            "--timing" => {}
            _ if a.starts_with("--threads=") => {}
            _ => out.push(a),
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let command = echo_command(std::env::args().skip(1));
    let start = std::time::Instant::now();
    let (outcome, out) = match cli.command {
        Command::Verify(args) => {
            let out = args.out.clone();
            (verify::run(&args), out)
        }
        Command::Build { what } => {
            let out = what.out().cloned();
            (build::run(&what), out)
        }
        Command::PaperSuite { scale, out } => (paper_suite(scale, cli.timing), out),
    };
    let mut report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    report.finish(command, cli.timing.then(|| start.elapsed().as_millis() as u64));
    if let Err(e) = report.emit(out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(if report.pass { 0 } else { 1 })
}
