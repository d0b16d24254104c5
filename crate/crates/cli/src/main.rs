//! Command-line front end: evaluate interpolated t-values to certified
//! precision, print interpolation expansions and generating-function
//! coefficients, run the verification catalogue, and manage the value cache.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mtval_core::genfun::solve_phi0_bounded;
use mtval_core::index::interpolation_expansion;
use mtval_core::numeric::nested::t_interp_eval_cached;
use mtval_core::numeric::ValueCache;
use mtval_core::ring::{rational_string, CoefficientRing};
use mtval_core::series::SeriesBounds;
use mtval_core::verify::{
    catalogue, default_specs, parse_rational, run_all, CheckSpec, CheckStatus, FullReport,
};
use mtval_core::{Index, Level};
use serde::Deserialize;

const CACHE_DIR_VAR: &str = "MTVAL_CACHE_DIR";
const CACHE_FILE: &str = "values.cache";

/// `say!` that exits quietly when the reader closes the pipe
/// (`mtval expand | head` must not panic).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let mut out = std::io::stdout().lock();
        if writeln!(out, $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "mtval",
    version,
    about = "Interpolated multiple t-values of general level: evaluation and verification"
)]
struct Cli {
    /// TOML configuration file; command-line flags win over its entries.
    /// Defaults to ./mtval.toml when that file exists.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one interpolated t-value with a certified error bound.
    Eval(EvalArgs),
    /// Print an interpolation expansion or generating-function coefficients.
    Expand(ExpandArgs),
    /// Run verification checks and report the results.
    Verify(VerifyArgs),
    /// Inspect or clear the persistent value cache.
    Cache(CacheArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Level modulus N.
    #[arg(long, default_value_t = 1)]
    level: u32,
    /// Level residue a, with 1 <= a <= N.
    #[arg(long, default_value_t = 1)]
    residue: u32,
    /// Comma-separated index, e.g. 2,1 (first part at least 2).
    #[arg(long)]
    index: String,
    /// Interpolation parameter: an integer or a fraction p/q.
    #[arg(long, default_value = "0")]
    r: String,
    /// Decimal digits printed (working precision runs a little higher).
    #[arg(long)]
    precision: Option<u32>,
    /// Certified absolute error target.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ExpandArgs {
    /// Expand t^r of this index into strict values weighted by powers of r.
    #[arg(long, conflicts_with = "orders")]
    index: Option<String>,
    /// Print solved generating-function coefficients through this z-order
    /// (at least N + 2).
    #[arg(long)]
    orders: Option<usize>,
    /// Level modulus N.
    #[arg(long, default_value_t = 1)]
    level: u32,
    /// Level residue a, with 1 <= a <= N.
    #[arg(long, default_value_t = 1)]
    residue: u32,
    /// Largest total weight kept in the u, v, w expansion.
    #[arg(long, default_value_t = 5)]
    max_weight: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check id to run (repeatable); see --list for the catalogue.
    #[arg(long = "check", value_name = "ID")]
    checks: Vec<String>,
    /// Run the whole catalogue.
    #[arg(long, conflicts_with = "checks")]
    all: bool,
    /// Parameter override key=value, applied to every selected check
    /// (repeatable).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Write the JSON report to this path, or to stdout with "-".
    #[arg(long, value_name = "PATH")]
    json: Option<String>,
    /// Number of checks run concurrently.
    #[arg(long)]
    jobs: Option<usize>,
    /// List the check catalogue and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Show the cache location, entry count, and file size.
    Inspect,
    /// Delete every cached value.
    Clear,
}

/// Optional settings file; every field may instead come from a flag, and
/// flags win.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    cache_dir: Option<PathBuf>,
    precision: Option<u32>,
    tol: Option<f64>,
    jobs: Option<usize>,
}

fn load_config(explicit: Option<&Path>) -> Result<Config> {
    let path = match explicit {
        Some(path) => path.to_path_buf(),
        None => {
            let fallback = PathBuf::from("mtval.toml");
            if !fallback.exists() {
                return Ok(Config::default());
            }
            fallback
        }
    };
    let text = fs::read_to_string(&path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = load_config(cli.config.as_deref())?;
    // The library reads the cache directory from the environment; a config
    // entry fills it in when the variable is absent (so flags/env still win).
    if std::env::var_os(CACHE_DIR_VAR).is_none() {
        if let Some(dir) = &config.cache_dir {
            std::env::set_var(CACHE_DIR_VAR, dir);
        }
    }
    match cli.command {
        Command::Eval(args) => {
            cmd_eval(args, &config)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Expand(args) => {
            cmd_expand(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => cmd_verify(args, &config),
        Command::Cache(args) => {
            cmd_cache(args)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_index(text: &str) -> Result<Index> {
    let parts = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| anyhow!("malformed index {text:?}: expected comma-separated positive integers"))
        })
        .collect::<Result<Vec<u32>>>()?;
    Index::new(parts).map_err(|err| anyhow!("malformed index {text:?}: {err}"))
}

fn make_level(modulus: u32, residue: u32) -> Result<Level> {
    if modulus == 0 {
        bail!("level modulus N must be positive");
    }
    if residue < 1 || residue > modulus {
        bail!("residue must satisfy 1 ≤ a ≤ N (got a = {residue}, N = {modulus})");
    }
    Ok(Level::new(modulus, residue)?)
}

fn cache_file_path() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_VAR).map(|dir| Path::new(&dir).join(CACHE_FILE))
}

fn open_cache() -> ValueCache {
    match cache_file_path() {
        Some(path) => ValueCache::at_path(&path).unwrap_or_else(|_| ValueCache::in_memory()),
        None => ValueCache::in_memory(),
    }
}

fn cmd_eval(args: EvalArgs, config: &Config) -> Result<()> {
    let level = make_level(args.level, args.residue)?;
    let index = parse_index(&args.index)?;
    let r = parse_rational(&args.r)
        .ok_or_else(|| anyhow!("malformed r {:?}: expected an integer or fraction p/q", args.r))?;
    let precision = args.precision.or(config.precision).unwrap_or(30);
    if precision == 0 || precision > 1000 {
        bail!("precision must lie in 1..=1000");
    }
    let tol = args
        .tol
        .or(config.tol)
        .unwrap_or_else(|| 10f64.powi(5 - precision.min(250) as i32));
    if !tol.is_finite() || tol <= 0.0 {
        bail!("tol must be positive");
    }
    let cache = open_cache();
    let value = t_interp_eval_cached(&cache, &level, &index, &r, precision, tol)?;
    say!(
        "t^r({index}) at level ({}, {}), r = {}",
        level.modulus(),
        level.residue(),
        rational_string(&r)
    );
    say!("value = {}", value.to_string_digits(precision));
    say!("err  <= {:.2e}", value.err());
    Ok(())
}

fn cmd_expand(args: ExpandArgs) -> Result<()> {
    match (&args.index, args.orders) {
        (Some(text), None) => {
            let index = parse_index(text)?;
            let terms = interpolation_expansion(&index);
            let rendered: Vec<String> = terms
                .iter()
                .map(|term| match term.r_exponent {
                    0 => format!("t({})", term.index),
                    1 => format!("r t({})", term.index),
                    e => format!("r^{e} t({})", term.index),
                })
                .collect();
            say!("t^r({index}) = {}", rendered.join(" + "));
            Ok(())
        }
        (None, Some(orders)) => {
            let level = make_level(args.level, args.residue)?;
            if !(2..=12).contains(&args.max_weight) {
                bail!("max-weight must lie in 2..=12");
            }
            let w = args.max_weight;
            let bounds = SeriesBounds::capped(w - 2, w - 2, 2 * (w / 2) - 2, w - 2);
            let min_orders = level.modulus() as usize + 2;
            if orders < min_orders {
                bail!(
                    "orders must be at least N + 2 = {min_orders} for level ({}, {})",
                    level.modulus(),
                    level.residue()
                );
            }
            let sol = solve_phi0_bounded(level, orders, bounds)?;
            say!(
                "generating-function coefficients, level ({}, {}), weights <= {w}",
                level.modulus(),
                level.residue()
            );
            for m in 0..=sol.z_bound() {
                let layer = sol.series().coeff(m);
                let lines: Vec<String> = layer
                    .iter_nonzero()
                    .map(|(i, j, l, poly)| format!("  u^{i} v^{j} w^{l}: {}", poly.coeff_string()))
                    .collect();
                if lines.is_empty() {
                    continue;
                }
                say!("z^{m}:");
                for line in lines {
                    say!("{line}");
                }
            }
            Ok(())
        }
        _ => bail!("expand needs exactly one of --index or --orders"),
    }
}

fn parse_overrides(raw: &[String]) -> Result<Vec<(String, String)>> {
    raw.iter()
        .map(|entry| {
            entry
                .split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| anyhow!("malformed --param {entry:?}: expected key=value"))
        })
        .collect()
}

fn status_word(status: CheckStatus) -> &'static str {
    match status {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Skipped => "skipped",
    }
}

fn print_human(report: &FullReport, to_stderr: bool) {
    let say = |line: String| {
        if to_stderr {
            eprintln!("{line}");
        } else {
            say!("{line}");
        }
    };
    for check in &report.checks {
        say(format!(
            "{:<24} {:<8} {:>7} ms  ({} case{})",
            check.id,
            status_word(check.status),
            check.ms,
            check.cases.len(),
            if check.cases.len() == 1 { "" } else { "s" }
        ));
        match check.status {
            CheckStatus::Fail => {
                for case in check.cases.iter().take(3) {
                    let detail = case
                        .delta
                        .as_deref()
                        .map(|d| format!("delta {d}"))
                        .or_else(|| case.coeff_diff.as_deref().map(|d| format!("diff {d}")))
                        .unwrap_or_default();
                    say(format!("    {} {detail}", case.desc));
                }
            }
            CheckStatus::Skipped => {
                if let Some(case) = check.cases.first() {
                    say(format!("    reason: {}", case.desc));
                }
            }
            CheckStatus::Pass => {}
        }
    }
    let passed = report
        .checks
        .iter()
        .filter(|c| c.status == CheckStatus::Pass)
        .count();
    let failed = report
        .checks
        .iter()
        .filter(|c| c.status == CheckStatus::Fail)
        .count();
    let skipped = report.checks.len() - passed - failed;
    say(format!(
        "{passed} pass, {failed} fail, {skipped} skipped"
    ));
}

fn cmd_verify(args: VerifyArgs, config: &Config) -> Result<ExitCode> {
    if args.list {
        say!("{:<24} {:<8} summary", "id", "kind");
        for info in catalogue() {
            say!(
                "{:<24} {:<8} {}",
                info.id,
                format!("{:?}", info.kind).to_lowercase(),
                info.summary
            );
        }
        return Ok(ExitCode::SUCCESS);
    }
    let overrides = parse_overrides(&args.params)?;
    let specs: Vec<CheckSpec> = if args.all {
        default_specs()
    } else if args.checks.is_empty() {
        bail!("select checks with --check <id> (repeatable) or --all; --list prints the catalogue");
    } else {
        args.checks
            .iter()
            .map(|id| CheckSpec::by_id(id).map_err(anyhow::Error::from))
            .collect::<Result<Vec<CheckSpec>>>()?
    };
    let specs: Vec<CheckSpec> = specs
        .into_iter()
        .map(|mut spec| {
            for (key, value) in &overrides {
                spec = spec.with_parameter(key, value);
            }
            spec
        })
        .collect();
    let jobs = args.jobs.or(config.jobs).unwrap_or(1).max(1);
    let report = run_all(&specs, jobs)?;

    let json_to_stdout = matches!(args.json.as_deref(), Some("-"));
    print_human(&report, json_to_stdout);
    match args.json.as_deref() {
        Some("-") => say!("{}", report.to_json()),
        Some(path) => fs::write(path, report.to_json() + "\n")
            .with_context(|| format!("writing report to {path}"))?,
        None => {}
    }
    Ok(ExitCode::from(u8::try_from(report.exit_code()).unwrap_or(2)))
}

fn cmd_cache(args: CacheArgs) -> Result<()> {
    let Some(path) = cache_file_path() else {
        say!("cache: in-memory only ({CACHE_DIR_VAR} is not set)");
        return Ok(());
    };
    match args.action {
        CacheAction::Inspect => {
            let cache = ValueCache::at_path(&path)
                .with_context(|| format!("opening cache {}", path.display()))?;
            let size = fs::metadata(&path).map(|meta| meta.len()).unwrap_or(0);
            say!("cache file: {}", path.display());
            say!("entries: {}", cache.len());
            say!("size: {size} bytes");
        }
        CacheAction::Clear => {
            let cache = ValueCache::at_path(&path)
                .with_context(|| format!("opening cache {}", path.display()))?;
            let had = cache.len();
            cache
                .clear()
                .with_context(|| format!("clearing cache {}", path.display()))?;
            say!("cleared {had} cached value(s) at {}", path.display());
        }
    }
    Ok(())
}
