use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rforms::verify::{
    error_exit_code, parse_rational, parse_suites, report_diff, run, Report, RunConfig,
};
use rforms::Series;

#[derive(Parser)]
#[command(
    name = "rforms",
    version,
    about = "Exact checks for universal r-forms on FRT quantum groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run check suites and write a JSON-lines report.
    Verify {
        #[arg(long, value_parser = parse_series)]
        series: Series,
        #[arg(long)]
        n: usize,
        /// Scale of r_z, an expression in q and t.
        #[arg(long)]
        z: Option<String>,
        /// Central twist parameter; repeatable.
        #[arg(long)]
        zeta: Vec<String>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Comma-separated: axioms, yd, classify, bwm, functionals, modular, toy, or all.
        #[arg(long, default_value = "all")]
        suites: String,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Rational point for a numeric pre-check, e.g. 3/2.
        #[arg(long)]
        t0: Option<String>,
        /// Add wall_time_ms to each record (breaks byte-identical output).
        #[arg(long)]
        timings: bool,
    },
    /// Compare two reports by check id.
    Diff { a: PathBuf, b: PathBuf },
}

fn parse_series(s: &str) -> Result<Series, String> {
    s.parse::<Series>().map_err(|e| e.to_string())
}

fn fail(code: i32, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("rforms: {msg}");
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.cmd {
        Cmd::Verify {
            series,
            n,
            z,
            zeta,
            degree,
            suites,
            out,
            threads,
            t0,
            timings,
        } => {
            let suites = match parse_suites(&suites) {
                Ok(s) => s,
                Err(e) => return fail(2, e),
            };
            let t0 = match t0.as_deref().map(parse_rational).transpose() {
                Ok(t) => t,
                Err(e) => return fail(2, e),
            };
            let cfg = RunConfig {
                series,
                n,
                z,
                zetas: zeta,
                degree,
                suites,
                threads,
                t0,
                timings,
            };
            let report = match run(&cfg) {
                Ok(r) => r,
                Err(e) => return fail(error_exit_code(&e), e),
            };
            let text = report.to_jsonl();
            let written = match &out {
                Some(p) => fs::write(p, &text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                return fail(2, format!("cannot write report: {e}"));
            }
            let s = report.summary();
            eprintln!(
                "{} passed, {} failed, {} skipped",
                s.passed, s.failed, s.skipped
            );
            ExitCode::from(s.exit_code as u8)
        }
        Cmd::Diff { a, b } => {
            let load = |p: &PathBuf| {
                fs::read_to_string(p)
                    .map_err(|e| format!("{}: {e}", p.display()))
                    .and_then(|s| Report::parse(&s).map_err(|e| format!("{}: {e}", p.display())))
            };
            let (ra, rb) = match (load(&a), load(&b)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => return fail(2, e),
            };
            match report_diff(&ra, &rb) {
                Err(e) => fail(2, e),
                Ok(d) if d.is_empty() => ExitCode::SUCCESS,
                Ok(d) => {
                    for line in d {
                        println!("{line}");
                    }
                    ExitCode::from(1)
                }
            }
        }
    }
}
