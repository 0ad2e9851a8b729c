use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stabpurity::GraphSpec;
use stabpurity_cli::commands::render_tables;
use stabpurity_cli::{
    cmd_estimate, cmd_oracle_check, cmd_reproduce_tables, cmd_simulate, exit, replay_instance,
    to_json, CliError, OracleCheckConfig, Shots,
};

/// Least purity and entropy bounds for graph states from generator
/// expectation values.
#[derive(Parser, Debug)]
#[command(name = "stabpurity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate purity and entropy bounds from a measurement file.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Simulate a dephased graph state and write a measurement file.
    Simulate {
        /// Preset (`path-N`, `ring-N`, `star-N`) or a JSON file.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        gamma_t: f64,
        /// Shots per generator, or `exact`.
        #[arg(long, default_value = "exact")]
        shots: Shots,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Measurement file; the truth file goes to `<stem>.truth.json`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Reproduce the purity and entropy comparison tables.
    ReproduceTables {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cross-check closed forms against numeric oracles.
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Inclusive qubit range, `LO-HI`.
        #[arg(long, default_value = "2-4", value_parser = parse_range)]
        n_range: (usize, usize),
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replay a serialized instance or failure instead of sampling.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected LO-HI, got `{s}`");
    match s.split_once('-') {
        Some((lo, hi)) => Ok((
            lo.parse().map_err(|_| bad())?,
            hi.parse().map_err(|_| bad())?,
        )),
        None => s.parse().map(|n| (n, n)).map_err(|_| bad()),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(spec: &str) -> Result<GraphSpec, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = String::from_utf8(read(path)?)
            .map_err(|_| CliError::Malformed(format!("{spec} is not UTF-8")))?;
        Ok(GraphSpec::from_json(&text)?)
    } else {
        Ok(GraphSpec::preset(spec)?)
    }
}

fn truth_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().unwrap_or_default().to_string_lossy();
    output.with_file_name(format!("{stem}.truth.json"))
}

/// Exit code on success paths that still signal a verdict.
fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Estimate { input, output } => {
            let report = cmd_estimate(&read(&input)?)?;
            emit(&to_json(&report), output.as_deref())?;
        }
        Command::Simulate {
            graph,
            gamma_t,
            shots,
            seed,
            output,
        } => {
            let g = load_graph(&graph)?;
            let (measurement, truth) = cmd_simulate(&g, &graph, gamma_t, shots, seed)?;
            match output {
                Some(path) => {
                    emit(&to_json(&measurement), Some(&path))?;
                    emit(&to_json(&truth), Some(&truth_path(&path)))?;
                }
                None => emit(
                    &to_json(&serde_json::json!({ "measurement": measurement, "truth": truth })),
                    None,
                )?,
            }
        }
        Command::ReproduceTables { json, output } => {
            let tables = cmd_reproduce_tables()?;
            let text = if json {
                to_json(&tables)
            } else {
                render_tables(&tables)
            };
            emit(&text, output.as_deref())?;
        }
        Command::OracleCheck {
            trials,
            n_range,
            seed,
            input,
            output,
        } => {
            if let Some(path) = input {
                let result = replay_instance(&read(&path)?)?;
                emit(&to_json(&result), output.as_deref())?;
                return Ok(if result.within_tolerance {
                    exit::OK
                } else {
                    exit::TOLERANCE_BREACH
                });
            }
            let config = OracleCheckConfig {
                trials,
                n_min: n_range.0,
                n_max: n_range.1,
                seed,
            };
            match cmd_oracle_check(&config) {
                Ok(summary) => emit(&to_json(&summary), output.as_deref())?,
                Err(CliError::ToleranceBreach(summary)) => {
                    emit(&to_json(&summary), output.as_deref())?;
                    return Err(CliError::ToleranceBreach(summary));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::MALFORMED as u8
            } else {
                exit::OK as u8
            });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            if let CliError::Infeasible(report) = &e {
                print!("{}", to_json(report));
            }
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
