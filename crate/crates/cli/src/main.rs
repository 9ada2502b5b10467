//! `regsub`: census, orbit counts, oracle cross-checks and full verification runs
//! for the regular elementary abelian subgroups of the groups Γ(I_k).
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 cap exceeded.

mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use regsub_core::census::{self, CensusReport, Check, Status};
use regsub_core::conj::{self, ORACLE_MAX_P};
use regsub_core::suite::{self, SuiteConfig};
use regsub_core::{Context, Error};

use emit::Format;

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "regsub", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, enumeration count and internal checks per (p, k)
    Census(RunArgs),
    /// Census plus conjugacy orbit count b_H and bound verdicts
    Orbits(RunArgs),
    /// Brute-force subgroup search cross-checked against the parametrization (p <= 3)
    Oracle(RunArgs),
    /// The full named check suite for one prime
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Prime p
    #[arg(long)]
    p: u32,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    emit: Format,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest parameter count enumerated explicitly
    #[arg(long, env = "REGSUB_ENUM_CAP", default_value_t = census::DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    /// Largest group materialized by closure
    #[arg(long, env = "REGSUB_CLOSURE_CAP", default_value_t = regsub_core::permrep::DEFAULT_CLOSURE_CAP)]
    closure_cap: usize,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Filtration level; defaults to every k with p <= k <= 2(p-1)
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
}

/// A command's reports plus the exit code they earned.
struct Outcome<T> {
    value: T,
    code: u8,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("regsub: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn ks(ctx: Context, k: Option<u32>) -> Result<Vec<u32>, Error> {
    match k {
        Some(k) => census::check_k_range(ctx, k).map(|()| vec![k]),
        None => Ok(suite::k_range(ctx).collect()),
    }
}

fn has_fail(checks: &[Check]) -> bool {
    checks.iter().any(|c| c.status == Status::Fail)
}

fn run_census(ctx: Context, ks: &[u32], a: &CommonArgs) -> Result<Outcome<Vec<CensusReport>>, Error> {
    let reports = ks
        .iter()
        .map(|&k| census::census_counts(ctx, k, a.enum_cap))
        .collect::<Result<Vec<_>, _>>()?;
    let code = if reports.iter().all(CensusReport::all_ok) { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(Outcome { value: reports, code })
}

fn run_orbits(ctx: Context, ks: &[u32], a: &CommonArgs) -> Result<Outcome<Vec<CensusReport>>, Error> {
    let reports = ks
        .iter()
        .map(|&k| conj::full_report(ctx, k, a.enum_cap))
        .collect::<Result<Vec<_>, _>>()?;
    let code = if reports.iter().any(|r| r.b_h.is_none()) {
        eprintln!(
            "regsub: cap exceeded: enumeration cap {} too small for some k; report is partial",
            a.enum_cap
        );
        EXIT_CAP
    } else if reports.iter().all(CensusReport::all_ok) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok(Outcome { value: reports, code })
}

fn run_oracle(ctx: Context, ks: &[u32], a: &CommonArgs) -> Result<Outcome<Vec<CensusReport>>, Error> {
    let mut reports = Vec::new();
    for &k in ks {
        let (mut report, params) = census::census_with_params(ctx, k, a.enum_cap)?;
        let params = params.ok_or(Error::EnumerationCapExceeded {
            exp: report.reg_count_expected_exp,
            cap: a.enum_cap,
        })?;
        conj::merge_into(&mut report, &conj::orbits_of_params(ctx, k, &params)?)?;
        let prefix = format!("k{k}/");
        for c in suite::oracle_checks(ctx, k, &params, a.closure_cap)? {
            let name = c.name.strip_prefix(&prefix).unwrap_or(&c.name).to_string();
            report.checks.push(Check { name, status: c.status });
        }
        reports.push(report);
    }
    let code = if reports.iter().all(CensusReport::all_ok) { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(Outcome { value: reports, code })
}

fn render_reports(reports: &[CensusReport], format: Format) -> std::io::Result<String> {
    match format {
        Format::Json => emit::json(reports),
        Format::Csv => emit::csv(reports),
    }
}

fn finish(text: std::io::Result<String>, a: &CommonArgs, code: u8) -> ExitCode {
    match text.and_then(|t| emit::write(a.out.as_deref(), &t)) {
        Ok(()) => ExitCode::from(code),
        Err(e) => usage(format!("cannot write report: {e}")),
    }
}

fn cap_exit(e: &Error) -> ExitCode {
    eprintln!("regsub: cap exceeded: {e}");
    ExitCode::from(EXIT_CAP)
}

type Runner = fn(Context, &[u32], &CommonArgs) -> Result<Outcome<Vec<CensusReport>>, Error>;

fn run_per_k(r: RunArgs, run: Runner, oracle: bool) -> ExitCode {
    let a = &r.common;
    let ctx = match Context::new(a.p) {
        Ok(ctx) => ctx,
        Err(e) => return usage(e),
    };
    let ks = match ks(ctx, r.k) {
        Ok(ks) => ks,
        Err(e) => return usage(e),
    };
    if oracle && a.p > ORACLE_MAX_P {
        return cap_exit(&Error::OracleOutOfScale(format!(
            "brute-force oracle runs only for p <= {ORACLE_MAX_P}, got p = {}",
            a.p
        )));
    }
    match run(ctx, &ks, a) {
        Ok(o) => finish(render_reports(&o.value, a.emit), a, o.code),
        Err(e) if e.is_cap() => cap_exit(&e),
        Err(e) => usage(e),
    }
}

fn run_verify(v: VerifyArgs) -> ExitCode {
    let a = &v.common;
    let ctx = match Context::new(a.p) {
        Ok(ctx) => ctx,
        Err(e) => return usage(e),
    };
    let cfg = SuiteConfig {
        enum_cap: a.enum_cap,
        closure_cap: a.closure_cap,
        ..SuiteConfig::default()
    };
    match suite::run_verify(ctx, &cfg) {
        Ok(out) => {
            let code = if has_fail(&out.checks) { EXIT_CHECK_FAILED } else { EXIT_OK };
            let text = match a.emit {
                Format::Json => emit::json(&out),
                Format::Csv => emit::csv(&out.reports),
            };
            finish(text, a, code)
        }
        Err(e) if e.is_cap() => cap_exit(&e),
        Err(e) => usage(e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Census(r) => run_per_k(r, run_census, false),
        Command::Orbits(r) => run_per_k(r, run_orbits, false),
        Command::Oracle(r) => run_per_k(r, run_oracle, true),
        Command::Verify(v) => run_verify(v),
    }
}
