//! Scenario runner: `run` emits a CSV time series, `verify` emits a pass/fail
//! report, `sweep` emits a per-value summary table. Exit codes: 0 success,
//! 1 verification failure, 2 config or runtime error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tdosc::scenario::{self, ScenarioConfig};

#[derive(Parser)]
#[command(name = "tdosc", version, about = "Time-dependent generalized oscillator scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write the sampled time series as CSV.
    Run {
        /// JSON scenario config.
        #[arg(long)]
        config: PathBuf,
        /// CSV output path (falls back to the config's output.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite and write a JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// JSON report path (falls back to the config's output.report; omitted
        /// otherwise, with the summary printed to stdout either way).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Re-run a scenario for each value of one profile parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Profile field to patch (e.g. `epsilon`, `nu`, `z`).
        #[arg(long)]
        param: String,
        /// Comma-separated list of values; may be empty.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        values: String,
        /// Summary table output path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> tdosc::Result<ExitCode> {
    match cli.command {
        Command::Run { config, out } => {
            let config = ScenarioConfig::from_path(&config)?;
            let out_path = match out.or_else(|| config.output.csv.clone()) {
                Some(p) => p,
                None => {
                    return Err(tdosc::Error::Config {
                        field: "output.csv".into(),
                        reason: "no output path; pass --out or set output.csv".into(),
                    })
                }
            };
            let result = scenario::execute(&config)?;
            let mut w = BufWriter::new(File::create(&out_path)?);
            scenario::write_run_csv(&result, &mut w)?;
            w.flush()?;
            let last = result.final_row();
            println!(
                "wrote {} samples to {} | max wronskian residual {:.3e} | final |beta|^2 {:.6e}, r {:.6}",
                result.rows.len(),
                out_path.display(),
                result.max_wronskian_residual(),
                last.pair.beta.norm_sqr(),
                last.squeeze.r,
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config, report } => {
            let config = ScenarioConfig::from_path(&config)?;
            let result = scenario::verify(&config)?;
            for entry in &result.entries {
                println!(
                    "{} {:<24} max residual {:.3e} (tolerance {:.1e}) at t = {:.6}",
                    if entry.pass { "PASS" } else { "FAIL" },
                    entry.name,
                    entry.max_residual,
                    entry.tolerance,
                    entry.worst_time,
                );
            }
            println!("overall: {}", if result.overall_pass { "PASS" } else { "FAIL" });
            if let Some(path) = report.or_else(|| config.output.report.clone()) {
                std::fs::write(&path, result.to_json())?;
            }
            Ok(if result.overall_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Sweep { config, param, values, out } => {
            let config = ScenarioConfig::from_path(&config)?;
            let values = parse_values(&values)?;
            let rows = scenario::sweep(&config, &param, &values)?;
            let mut w = BufWriter::new(File::create(&out)?);
            scenario::write_sweep_csv(&rows, &mut w)?;
            w.flush()?;
            println!("swept `{param}` over {} value(s) into {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_values(list: &str) -> tdosc::Result<Vec<f64>> {
    let trimmed = list.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|item| {
            item.trim().parse::<f64>().map_err(|e| tdosc::Error::Config {
                field: "values".into(),
                reason: format!("`{item}`: {e}"),
            })
        })
        .collect()
}
