//! `rmdo`: solve a game, run a benchmark suite, inspect a game, or run the self-checks.
//!
//! Errors are printed to stderr as a single JSON object. Exit codes: 0 success, 1 runtime
//! failure (or a failed check / suite run), 2 invalid flags or configuration.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Args, Parser, Subcommand};
use rmdo::bench::{self, ExperimentSuite, GameStats, GAME_PARAM_KEYS};
use rmdo::driver::IterationEvent;
use rmdo::log::CsvLogWriter;
use rmdo::{k_statistics, run_on, GameSpec, LogRow, RunError, RunObserver};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{failed} of {total} {what} failed")]
    Failures { failed: usize, total: usize, what: &'static str },
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Run(RunError::Config(_)) => "config",
            CliError::Run(RunError::Game(_)) => "game",
            CliError::Run(RunError::Io(_)) | CliError::File { .. } => "io",
            CliError::Run(_) => "run",
            CliError::Failures { .. } => "failures",
        }
    }

    fn exit_code(&self) -> u8 {
        match self.kind() {
            "config" | "game" => 2,
            _ => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "rmdo", version, about = "Regret-minimizing double oracle solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and print a JSON summary.
    Solve(SolveArgs),
    /// Run every configuration of a suite file, writing one CSV per run and a manifest.
    Bench(BenchArgs),
    /// Print infoset counts, node count and payoff range of a game.
    Inspect(GameArgs),
    /// Run the built-in self-checks.
    Verify,
}

/// Game selection. `--game` takes a family name, optionally with `:key=value,...` parameters.
#[derive(Args, Default)]
struct GameArgs {
    #[arg(long, value_parser = parse_game)]
    game: Option<String>,
    #[arg(long)]
    pot: Option<u32>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    dummy: Option<bool>,
    #[arg(long)]
    coins: Option<u32>,
    #[arg(long)]
    half_board: Option<u32>,
    #[arg(long)]
    min_bid: Option<u32>,
    #[arg(long)]
    rounds: Option<u32>,
    #[arg(long)]
    forces: Option<u32>,
}

fn parse_game(text: &str) -> Result<String, String> {
    text.parse::<GameSpec>().map(|_| text.to_owned()).map_err(|e| e.to_string())
}

impl GameArgs {
    fn params(&self) -> Vec<(&'static str, toml::Value)> {
        let int = |v: Option<u32>| v.map(|n| toml::Value::Integer(n.into()));
        let values = [
            int(self.pot),
            self.dummy.map(toml::Value::Boolean),
            int(self.coins),
            int(self.half_board),
            int(self.min_bid),
            int(self.rounds),
            int(self.forces),
        ];
        GAME_PARAM_KEYS
            .iter()
            .zip(values)
            .filter_map(|(&k, v)| v.map(|v| (k, v)))
            .collect()
    }

    /// Writes the game keys into `table`. A `--game` flag replaces the file's game and all of
    /// its parameters.
    fn apply(&self, table: &mut toml::Table) {
        if let Some(game) = &self.game {
            for key in GAME_PARAM_KEYS {
                table.remove(key);
            }
            table.insert("game".into(), toml::Value::String(game.clone()));
        }
        for (k, v) in self.params() {
            table.insert(k.into(), v);
        }
    }

    fn spec(&self) -> Result<GameSpec, RunError> {
        let mut table = toml::Table::new();
        self.apply(&mut table);
        let mut spec: GameSpec = match table.remove("game") {
            Some(toml::Value::String(s)) => s.parse()?,
            _ => return Err(RunError::Config("--game is required".into())),
        };
        for (k, v) in table {
            let text = match v {
                toml::Value::String(s) => s,
                other => other.to_string(),
            };
            spec.set_param(&k, &text)?;
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Config file (TOML, flat keys); flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, value_parser = ["xodo", "pdo", "xdo"])]
    algo: Option<String>,
    #[arg(long)]
    period: Option<u64>,
    #[arg(long)]
    eps0: Option<f64>,
    #[arg(long, value_parser = ["vanilla", "plus"])]
    regret: Option<String>,
    #[arg(long, value_parser = ["alternating", "simultaneous"])]
    update_order: Option<String>,
    #[arg(long)]
    target_eps: Option<f64>,
    /// 0 lifts the limit.
    #[arg(long)]
    max_iterations: Option<u64>,
    #[arg(long)]
    max_visited: Option<u64>,
    #[arg(long)]
    max_wall_time_s: Option<f64>,
    #[arg(long)]
    eval_every: Option<u64>,
    #[arg(long, value_parser = ["overall", "last_window"])]
    output: Option<String>,
    #[arg(long)]
    snapshot_every: Option<u64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    exact_regret: Option<bool>,
    /// Stream the run log to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the output strategy (JSON) here.
    #[arg(long)]
    strategy: Option<PathBuf>,
    /// Write the final population (JSON) here.
    #[arg(long)]
    population: Option<PathBuf>,
}

impl SolveArgs {
    fn table(&self) -> Result<toml::Table, CliError> {
        let mut table = match &self.config {
            Some(path) => bench::parse_table(&read(path)?)?,
            None => toml::Table::new(),
        };
        self.game.apply(&mut table);
        let text = |v: &Option<String>| v.clone().map(toml::Value::String);
        let int = |v: Option<u64>| v.map(|n| toml::Value::Integer(n as i64));
        let float = |v: Option<f64>| v.map(toml::Value::Float);
        let flags = [
            ("algo", text(&self.algo)),
            ("period", int(self.period)),
            ("eps0", float(self.eps0)),
            ("regret", text(&self.regret)),
            ("update_order", text(&self.update_order)),
            ("target_eps", float(self.target_eps)),
            ("max_iterations", int(self.max_iterations)),
            ("max_visited", int(self.max_visited)),
            ("max_wall_time_s", float(self.max_wall_time_s)),
            ("eval_every", int(self.eval_every)),
            ("output", text(&self.output)),
            ("snapshot_every", int(self.snapshot_every)),
            ("exact_regret", self.exact_regret.map(toml::Value::Boolean)),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                table.insert(key.into(), v);
            }
        }
        Ok(table)
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Suite file (TOML): shared top-level keys plus one `[runs.LABEL]` section per run.
    suite: PathBuf,
    /// Output directory; overrides the suite's `out_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(RunError::from)?;
    out.flush().map_err(RunError::from)?;
    Ok(())
}

/// Prints a line to stdout; a closed pipe is not an error.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

struct CsvSink(Option<CsvLogWriter<BufWriter<File>>>);

impl RunObserver for CsvSink {
    fn on_iteration(&mut self, _event: &IterationEvent<'_>) {}

    fn on_row(&mut self, row: &LogRow) -> Result<(), RunError> {
        match &mut self.0 {
            Some(w) => w.write(row),
            None => Ok(()),
        }
    }
}

fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let config = bench::config_from_table(args.table()?)?;
    let game = config.game.build().map_err(RunError::from)?;
    let mut sink = CsvSink(match &args.csv {
        Some(path) => Some(CsvLogWriter::new(create(path)?)?),
        None => None,
    });
    let result = run_on(&game, &config, &mut sink)?;
    if let Some(w) = &mut sink.0 {
        w.flush()?;
    }
    if let Some(path) = &args.strategy {
        write_json(path, &result.output)?;
    }
    if let Some(path) = &args.population {
        write_json(path, result.populations.last().expect("at least one population"))?;
    }
    let summary = json!({
        "config": config,
        "game_stats": GameStats::of(&game),
        "iterations": result.iterations,
        "visited_infosets": result.visited,
        "final_exploitability": result.final_exploitability,
        "k": result.k,
        "windows": result.window_lengths,
        "stop_reason": result.stop_reason,
        "eps0": result.eps0,
        "k_statistics": k_statistics(&result, &game),
    });
    emit(&serde_json::to_string_pretty(&summary).map_err(RunError::from)?);
    Ok(())
}

fn bench_suite(args: &BenchArgs) -> Result<(), CliError> {
    let mut table = bench::parse_table(&read(&args.suite)?)?;
    let default_out = match &args.out {
        Some(out) => {
            table.remove("out_dir");
            out.clone()
        }
        None => PathBuf::from("."),
    };
    let suite = ExperimentSuite::from_table(table, &default_out)?;
    let manifest = bench::run_experiment(&suite)?;
    let failed = manifest.runs.iter().filter(|r| r.error.is_some()).count();
    for run in &manifest.runs {
        let line = json!({
            "label": run.label,
            "csv": suite.out_dir.join(&run.csv),
            "k": run.k,
            "final_exploitability": run.final_exploitability,
            "stop_reason": run.stop_reason,
            "error": run.error,
        });
        emit(&line.to_string());
    }
    if failed > 0 {
        return Err(CliError::Failures {
            failed,
            total: manifest.runs.len(),
            what: "runs",
        });
    }
    Ok(())
}

fn inspect(args: &GameArgs) -> Result<(), CliError> {
    let spec = args.spec()?;
    let game = spec.build().map_err(RunError::from)?;
    let stats = GameStats::of(&game);
    let report = json!({
        "game": spec.to_string(),
        "infosets": stats.infosets_p1 + stats.infosets_p2,
        "infosets_p1": stats.infosets_p1,
        "infosets_p2": stats.infosets_p2,
        "nodes": stats.nodes,
        "delta": stats.delta,
    });
    emit(&serde_json::to_string_pretty(&report).map_err(RunError::from)?);
    Ok(())
}

fn verify() -> Result<(), CliError> {
    let outcomes = bench::verify();
    for o in &outcomes {
        emit(&format!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail));
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(CliError::Failures {
            failed,
            total: outcomes.len(),
            what: "checks",
        });
    }
    Ok(())
}

fn usage_error(err: &clap::Error) -> serde_json::Value {
    let argument = match err.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => Some(s.split_whitespace().next().unwrap_or(s).to_owned()),
        _ => None,
    };
    let message = err.render().to_string();
    json!({
        "error": {
            "kind": "usage",
            "argument": argument,
            "message": message.lines().next().unwrap_or_default().trim_start_matches("error: "),
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) if err.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let _ = err.print();
            return ExitCode::from(2);
        }
        Err(err) => {
            eprintln!("{}", usage_error(&err));
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench_suite(args),
        Command::Inspect(args) => inspect(args),
        Command::Verify => verify(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", json!({ "error": { "kind": err.kind(), "message": err.to_string() } }));
            ExitCode::from(err.exit_code())
        }
    }
}
