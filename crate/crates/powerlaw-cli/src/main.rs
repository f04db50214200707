//! Command-line front end for fitting and comparing discrete power-law
//! models on integer frequency data.
//!
//! Input is always the CSV interchange format (`x,count` header, one
//! `integer,integer` row per distinct x, `#` comments); `-` reads stdin.
//! Output defaults to JSON; `--format text` renders human tables and
//! `--format csv` emits frequency CSV (the native format of `sample`,
//! whose output pipes straight back into `fit` and `ks`). The
//! `POWERLAW_FORMAT` environment variable overrides the default format
//! only; an explicit `--format` flag always wins.
//!
//! Exit codes: 0 success, 1 data or parameter errors, 2 convergence
//! failures.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use powerlaw::comparison::{build_comparison_report, ks_statistic, sig7, ComparisonReport};
use powerlaw::data::{CurveData, FrequencyTable};
use powerlaw::distributions::{CutoffParams, Model, PowerLawParams};
use powerlaw::estimators::{self, FitResult};
use powerlaw::Error as PlError;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::io::Read;

#[derive(Parser)]
#[command(
    name = "powerlaw",
    version,
    about = "Fit and compare discrete power-law distributions on frequency data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Ols,
    ConstrainedOls,
    Nls,
    ConstrainedNls,
    MlePowerlaw,
    MleCutoff,
    MleFixedBeta,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TruncateMode {
    /// Keep head probabilities as they are (they no longer sum to 1)
    Distribution,
    /// Renormalize over the retained range
    Data,
}

#[derive(Args)]
struct FormatArg {
    /// Output format (default json; env POWERLAW_FORMAT overrides the
    /// default, the flag overrides both)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one estimator on a frequency CSV
    Fit {
        /// Estimation method
        #[arg(long, value_enum)]
        method: Method,
        /// Fixed beta (< 0), required by mle-fixed-beta
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        /// Drop all x above this cut before fitting (curve methods only)
        #[arg(long)]
        truncate_at: Option<u32>,
        /// Truncation semantics (default: distribution)
        #[arg(long, value_enum, default_value = "distribution")]
        truncate_mode: TruncateMode,
        #[command(flatten)]
        format: FormatArg,
        /// Input CSV path, or - for stdin
        input: String,
    },
    /// Fit all three hypotheses and report the full model comparison
    Compare {
        /// Beta for the near-power-law probe null (< 0)
        #[arg(long, default_value_t = -1e-6, allow_hyphen_values = true)]
        beta_probe: f64,
        #[command(flatten)]
        format: FormatArg,
        input: String,
    },
    /// Kolmogorov-Smirnov distance between data and a given model
    Ks {
        #[arg(long)]
        alpha: f64,
        /// Cutoff beta; omit for the pure power law
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[command(flatten)]
        format: FormatArg,
        input: String,
    },
    /// Draw a synthetic frequency table from a model (CSV by default,
    /// pipeable into fit/ks)
    Sample {
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Emit the estimator table and the model-comparison table with
    /// provenance
    Tables {
        #[arg(long, default_value_t = -1e-6, allow_hyphen_values = true)]
        beta_probe: f64,
        #[command(flatten)]
        format: FormatArg,
        input: String,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let line = e.to_string();
            eprintln!("{}", line.lines().next().unwrap_or("invalid arguments"));
            return 1;
        }
    };
    match execute(cli.command) {
        Ok(out) => emit(&out),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                PlError::Convergence(_) | PlError::NotConverged(_) | PlError::Boundary => 2,
                _ => 1,
            }
        }
    }
}

/// One buffered write; a downstream consumer hanging up early (broken
/// pipe) is not our failure.
fn emit(out: &str) -> i32 {
    use std::io::Write;
    let stdout = std::io::stdout();
    match stdout.lock().write_all(out.as_bytes()) {
        Ok(()) => 0,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            1
        }
    }
}

fn resolve_format(arg: &FormatArg, default: Format) -> Format {
    if let Some(f) = arg.format {
        return f;
    }
    match std::env::var("POWERLAW_FORMAT").ok().as_deref() {
        Some("json") => Format::Json,
        Some("text") => Format::Text,
        Some("csv") => Format::Csv,
        _ => default,
    }
}

fn read_input(path: &str) -> Result<String, PlError> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| PlError::EmptyInput(format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| PlError::EmptyInput(format!("cannot read {path}: {e}")))?;
    }
    Ok(text)
}

fn load_table(path: &str) -> Result<(FrequencyTable, String), PlError> {
    let text = read_input(path)?;
    Ok((FrequencyTable::from_csv(&text)?, text))
}

fn model_from(alpha: f64, beta: Option<f64>) -> Result<Model, PlError> {
    match beta {
        None => Ok(Model::PowerLaw(PowerLawParams::new(alpha)?)),
        Some(b) => Ok(Model::Cutoff(CutoffParams::new(alpha, b)?)),
    }
}

fn execute(command: Command) -> Result<String, PlError> {
    match command {
        Command::Fit {
            method,
            beta,
            truncate_at,
            truncate_mode,
            format,
            input,
        } => {
            let format = resolve_format(&format, Format::Json);
            let (table, _) = load_table(&input)?;
            let fit = run_fit(&table, method, beta, truncate_at, truncate_mode)?;
            Ok(fit_output(&fit, format))
        }
        Command::Compare {
            beta_probe,
            format,
            input,
        } => {
            let format = resolve_format(&format, Format::Json);
            let (table, _) = load_table(&input)?;
            let report = build_comparison_report(&table, beta_probe)?;
            Ok(report_output(&report, format))
        }
        Command::Ks {
            alpha,
            beta,
            format,
            input,
        } => {
            let format = resolve_format(&format, Format::Json);
            let (table, _) = load_table(&input)?;
            let model = model_from(alpha, beta)?;
            let ks = ks_statistic(&table, &model)?;
            Ok(match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&ks).unwrap()),
                Format::Text | Format::Csv => format!(
                    "D = {} at x = {}\ncritical value (95%, conservative) = {}\nreject = {}\n",
                    sig7(ks.d_statistic),
                    ks.argmax_x,
                    sig7(ks.critical_value_95),
                    ks.reject
                ),
            })
        }
        Command::Sample {
            alpha,
            beta,
            count,
            seed,
            format,
        } => {
            let format = resolve_format(&format, Format::Csv);
            let model = model_from(alpha, beta)?;
            let table = model.sample(count, seed)?;
            Ok(match format {
                Format::Json => {
                    let rows: Vec<_> = table.rows().iter().map(|&(x, c)| json!([x, c])).collect();
                    let out = json!({"n": table.n(), "x_max": table.x_max(), "rows": rows});
                    format!("{}\n", serde_json::to_string_pretty(&out).unwrap())
                }
                Format::Text | Format::Csv => table.to_csv(),
            })
        }
        Command::Tables {
            beta_probe,
            format,
            input,
        } => {
            let format = resolve_format(&format, Format::Json);
            let (table, raw) = load_table(&input)?;
            tables_output(&table, &raw, beta_probe, format)
        }
    }
}

fn run_fit(
    table: &FrequencyTable,
    method: Method,
    beta: Option<f64>,
    truncate_at: Option<u32>,
    truncate_mode: TruncateMode,
) -> Result<FitResult, PlError> {
    let curve = || -> Result<CurveData, PlError> {
        match truncate_at {
            None => Ok(table.curve()),
            Some(cut) => match truncate_mode {
                TruncateMode::Distribution => table.curve().truncate_distribution(cut),
                TruncateMode::Data => table.truncate_data(cut),
            },
        }
    };
    let is_curve_method = matches!(
        method,
        Method::Ols | Method::ConstrainedOls | Method::Nls | Method::ConstrainedNls
    );
    if truncate_at.is_some() && !is_curve_method {
        return Err(PlError::InvalidParams(
            "--truncate-at applies to the curve-fitting methods only".into(),
        ));
    }
    if beta.is_some() && method != Method::MleFixedBeta {
        return Err(PlError::InvalidParams(
            "--beta applies to --method mle-fixed-beta only".into(),
        ));
    }
    match method {
        Method::Ols => estimators::fit_ols_loglog(&curve()?),
        Method::ConstrainedOls => estimators::fit_constrained_ols(&curve()?),
        Method::Nls => estimators::fit_nls(&curve()?),
        Method::ConstrainedNls => estimators::fit_constrained_nls(&curve()?),
        Method::MlePowerlaw => estimators::fit_mle_power_law(&table.sufficient_stats()),
        Method::MleCutoff => estimators::fit_mle_cutoff(&table.sufficient_stats()),
        Method::MleFixedBeta => {
            let beta = beta.ok_or_else(|| {
                PlError::InvalidParams("--method mle-fixed-beta requires --beta".into())
            })?;
            estimators::fit_mle_fixed_beta(&table.sufficient_stats(), beta)
        }
    }
}

fn fit_output(fit: &FitResult, format: Format) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    match format {
        Format::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(fit).unwrap());
        }
        Format::Text => {
            let _ = writeln!(out, "method         = {}", fit.method.name());
            let _ = writeln!(out, "alpha          = {}", sig7(fit.alpha));
            if let Some(b) = fit.b {
                let _ = writeln!(out, "b              = {}", sig7(b));
            }
            if let Some(beta) = fit.beta {
                let _ = writeln!(out, "beta           = {}", sig7(beta));
            }
            if let Some(ll) = fit.log_likelihood {
                let _ = writeln!(out, "log_likelihood = {}", sig7(ll));
            }
            let _ = writeln!(out, "objective      = {}", sig7(fit.objective));
            let _ = writeln!(out, "converged      = {}", fit.converged);
            let _ = writeln!(out, "iterations     = {}", fit.iterations);
        }
        Format::Csv => {
            let _ = writeln!(out, "key,value");
            let _ = writeln!(out, "method,{}", fit.method.name());
            let _ = writeln!(out, "alpha,{}", fit.alpha);
            if let Some(b) = fit.b {
                let _ = writeln!(out, "b,{b}");
            }
            if let Some(beta) = fit.beta {
                let _ = writeln!(out, "beta,{beta}");
            }
            if let Some(ll) = fit.log_likelihood {
                let _ = writeln!(out, "log_likelihood,{ll}");
            }
            let _ = writeln!(out, "objective,{}", fit.objective);
            let _ = writeln!(out, "converged,{}", fit.converged);
            let _ = writeln!(out, "iterations,{}", fit.iterations);
        }
    }
    out
}

fn report_output(report: &ComparisonReport, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).unwrap()),
        Format::Text | Format::Csv => format!("{report}\n"),
    }
}

fn tables_output(
    table: &FrequencyTable,
    raw: &str,
    beta_probe: f64,
    format: Format,
) -> Result<String, PlError> {
    use std::fmt::Write;
    let curve = table.curve();
    let fits = [
        estimators::fit_ols_loglog(&curve)?,
        estimators::fit_constrained_ols(&curve)?,
        estimators::fit_nls(&curve)?,
        estimators::fit_constrained_nls(&curve)?,
        estimators::fit_mle_power_law(&table.sufficient_stats())?,
    ];
    let report = build_comparison_report(table, beta_probe)?;
    let checksum: String = Sha256::digest(raw.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let version = env!("CARGO_PKG_VERSION");

    let mut out = String::new();
    match format {
        Format::Json => {
            let v = json!({
                "provenance": {
                    "dataset_sha256": checksum,
                    "library_version": version,
                    "n": table.n(),
                    "x_max": table.x_max(),
                    "rows": table.rows().len(),
                },
                "estimates": fits
                    .iter()
                    .map(|f| serde_json::to_value(f).unwrap())
                    .collect::<Vec<_>>(),
                "comparison": report,
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Text | Format::Csv => {
            let _ = writeln!(
                out,
                "dataset: n = {}, x_max = {}, rows = {}",
                table.n(),
                table.x_max(),
                table.rows().len()
            );
            let _ = writeln!(out, "dataset sha256: {checksum}");
            let _ = writeln!(out, "library version: {version}");
            let _ = writeln!(out);
            let _ = writeln!(out, "power-law estimates on the full curve");
            let _ = writeln!(
                out,
                "{:<26} {:>12} {:>12} {:>14} {:>10} {:>6}",
                "method", "alpha", "b", "objective", "converged", "iters"
            );
            for f in &fits {
                let _ = writeln!(
                    out,
                    "{:<26} {:>12} {:>12} {:>14} {:>10} {:>6}",
                    f.method.name(),
                    sig7(f.alpha),
                    f.b.map_or_else(|| "--".into(), sig7),
                    sig7(f.objective),
                    f.converged,
                    f.iterations
                );
            }
            let _ = writeln!(out);
            let _ = writeln!(out, "{report}");
        }
    }
    Ok(out)
}
