//! Experiment suites: TOML configs, concurrent runs, CSV logs and the JSON manifest.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::driver::{k_statistics, run_on, KStatistics, RunConfig, RunObserver, StopReason};
use crate::error::RunError;
use crate::game::{GameTree, Player};
use crate::log::{CsvLogWriter, LogRow};
use crate::zoo::GameSpec;

/// Config keys that parameterize the game rather than the run.
pub const GAME_PARAM_KEYS: [&str; 7] = ["pot", "dummy", "coins", "half_board", "min_bid", "rounds", "forces"];

/// Environment variable capping the number of concurrent suite runs.
pub const THREADS_ENV: &str = "RMDO_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameStats {
    pub infosets_p1: usize,
    pub infosets_p2: usize,
    pub nodes: usize,
    pub delta: f64,
}

impl GameStats {
    pub fn of(game: &GameTree) -> Self {
        Self {
            infosets_p1: game.infoset_count(Player::One),
            infosets_p2: game.infoset_count(Player::Two),
            nodes: game.num_nodes(),
            delta: game.delta(),
        }
    }
}

/// Parses a TOML document into a table.
pub fn parse_table(text: &str) -> Result<toml::Table, RunError> {
    text.parse::<toml::Table>()
        .map_err(|e| RunError::Config(e.to_string()))
}

fn value_text(value: &toml::Value) -> String {
    match value {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Builds a run config from flat keys: `game` plus game parameters, and any [`RunConfig`] field.
pub fn config_from_table(mut table: toml::Table) -> Result<RunConfig, RunError> {
    let mut spec: GameSpec = match table.remove("game") {
        Some(v) => value_text(&v).parse()?,
        None => RunConfig::default().game,
    };
    for key in GAME_PARAM_KEYS {
        if let Some(v) = table.remove(key) {
            spec.set_param(key, &value_text(&v))?;
        }
    }
    spec.validate()?;
    let mut config: RunConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| RunError::Config(e.to_string()))?;
    config.game = spec;
    config.validate()?;
    Ok(config)
}

pub fn parse_run_config(text: &str) -> Result<RunConfig, RunError> {
    config_from_table(parse_table(text)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSuite {
    pub game: GameSpec,
    pub runs: Vec<(String, RunConfig)>,
    pub out_dir: PathBuf,
}

impl ExperimentSuite {
    /// Suite from a TOML document. Top-level keys are shared by every run (the game keys may
    /// only appear there); each `[runs.LABEL]` section adds or overrides run keys. `out_dir`
    /// overrides `default_out_dir`.
    pub fn from_table(mut table: toml::Table, default_out_dir: &Path) -> Result<Self, RunError> {
        let out_dir = match table.remove("out_dir") {
            Some(v) => PathBuf::from(value_text(&v)),
            None => default_out_dir.to_path_buf(),
        };
        let runs = match table.remove("runs") {
            Some(toml::Value::Table(runs)) => runs,
            Some(_) => return Err(RunError::Config("`runs` must be a table of run sections".into())),
            None => toml::Table::new(),
        };
        let base = config_from_table(table.clone())?;
        let mut out = Vec::with_capacity(runs.len());
        for (label, section) in runs {
            let toml::Value::Table(section) = section else {
                return Err(RunError::Config(format!("run {label:?} must be a table")));
            };
            if let Some(key) = section
                .keys()
                .find(|k| *k == "game" || GAME_PARAM_KEYS.contains(&k.as_str()))
            {
                return Err(RunError::Config(format!(
                    "run {label:?} sets `{key}`; the game is shared by the whole suite"
                )));
            }
            let mut merged = table.clone();
            merged.extend(section);
            out.push((label, config_from_table(merged)?));
        }
        let suite = Self {
            game: base.game,
            runs: out,
            out_dir,
        };
        suite.validate()?;
        Ok(suite)
    }

    pub fn parse(text: &str, default_out_dir: &Path) -> Result<Self, RunError> {
        Self::from_table(parse_table(text)?, default_out_dir)
    }

    /// Labels must be unique and usable as file names.
    pub fn validate(&self) -> Result<(), RunError> {
        let mut seen = HashSet::new();
        for (label, config) in &self.runs {
            let safe = !label.is_empty()
                && label
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
            if !safe || label.starts_with('.') {
                return Err(RunError::Config(format!(
                    "label {label:?} must be non-empty and use only letters, digits, '-', '_', '.'"
                )));
            }
            if !seen.insert(label.as_str()) {
                return Err(RunError::Config(format!("duplicate label {label:?}")));
            }
            config.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub label: String,
    pub config: RunConfig,
    pub game_stats: GameStats,
    pub csv: String,
    pub k: Option<usize>,
    pub k_statistics: Option<KStatistics>,
    pub windows: Vec<u64>,
    pub iterations: Option<u64>,
    pub visited_infosets: Option<u64>,
    pub final_exploitability: Option<f64>,
    pub stop_reason: Option<StopReason>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub game: String,
    pub game_stats: Option<GameStats>,
    pub runs: Vec<ManifestEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

struct CsvObserver {
    writer: CsvLogWriter<BufWriter<File>>,
}

impl RunObserver for CsvObserver {
    fn on_row(&mut self, row: &LogRow) -> Result<(), RunError> {
        self.writer.write(row)?;
        self.writer.flush()
    }
}

fn run_one(game: &GameTree, stats: GameStats, label: &str, config: &RunConfig, out_dir: &Path) -> ManifestEntry {
    let csv = format!("{label}.csv");
    let mut entry = ManifestEntry {
        label: label.to_owned(),
        config: config.clone(),
        game_stats: stats,
        csv: csv.clone(),
        k: None,
        k_statistics: None,
        windows: Vec::new(),
        iterations: None,
        visited_infosets: None,
        final_exploitability: None,
        stop_reason: None,
        error: None,
    };
    let outcome = File::create(out_dir.join(&csv))
        .map_err(RunError::from)
        .and_then(|f| CsvLogWriter::new(BufWriter::new(f)))
        .and_then(|writer| {
            let mut observer = CsvObserver { writer };
            let result = run_on(game, config, &mut observer)?;
            observer.writer.flush()?;
            Ok(result)
        });
    match outcome {
        Ok(result) => {
            entry.k = Some(result.k);
            entry.k_statistics = Some(k_statistics(&result, game));
            entry.windows = result.window_lengths;
            entry.iterations = Some(result.iterations);
            entry.visited_infosets = Some(result.visited);
            entry.final_exploitability = Some(result.final_exploitability);
            entry.stop_reason = Some(result.stop_reason);
        }
        Err(e) => entry.error = Some(e.to_string()),
    }
    entry
}

/// Thread count from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_limit() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs every config of the suite (concurrently), streaming `<label>.csv` files and writing
/// `manifest.json` into the output directory. A failing run is recorded in its manifest entry.
pub fn run_experiment(suite: &ExperimentSuite) -> Result<Manifest, RunError> {
    suite.validate()?;
    fs::create_dir_all(&suite.out_dir)?;
    let mut manifest = Manifest {
        game: suite.game.to_string(),
        game_stats: None,
        runs: Vec::new(),
    };
    if !suite.runs.is_empty() {
        let game = suite.game.build()?;
        let stats = GameStats::of(&game);
        manifest.game_stats = Some(stats);
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = thread_limit() {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| RunError::Config(format!("thread pool: {e}")))?;
        manifest.runs = pool.install(|| {
            suite
                .runs
                .par_iter()
                .map(|(label, config)| {
                    let config = RunConfig {
                        game: suite.game.clone(),
                        ..config.clone()
                    };
                    run_one(&game, stats, label, &config, &suite.out_dir)
                })
                .collect()
        });
    }
    let file = File::create(suite.out_dir.join(MANIFEST_FILE))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &manifest)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::Algorithm;
    use crate::log::RunLog;

    const SWEEP: &str = r#"
game = "kuhn"
pot = 1
max_iterations = 200
eval_every = 20

[runs.pdo-1]
algo = "pdo"
period = 1

[runs.pdo-10]
algo = "pdo"
period = 10

[runs.xodo]
algo = "xodo"
"#;

    #[test]
    fn suite_keeps_file_order_and_inherits_keys() {
        let suite = ExperimentSuite::parse(SWEEP, Path::new("out")).unwrap();
        let labels: Vec<_> = suite.runs.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["pdo-1", "pdo-10", "xodo"]);
        assert_eq!(suite.runs[1].1.period, 10);
        assert_eq!(suite.runs[2].1.algo, Algorithm::Xodo);
        assert!(suite.runs.iter().all(|(_, c)| c.max_iterations == Some(200) && c.eval_every == 20));
        assert_eq!(suite.out_dir, PathBuf::from("out"));
    }

    #[test]
    fn game_parameters_are_flat_keys() {
        let config = parse_run_config("game = \"oshi-zumo\"\ncoins = 3\nhalf_board = 1\nalgo = \"xdo\"\n").unwrap();
        assert_eq!(
            config.game,
            GameSpec::OshiZumo {
                coins: 3,
                half_board: 1,
                min_bid: 1
            }
        );
        assert!(parse_run_config("colour = 3\n").is_err());
        assert!(parse_run_config("pot = 0\n").is_err());
    }

    #[test]
    fn runs_cannot_change_the_game() {
        let text = "game = \"kuhn\"\n[runs.a]\npot = 3\n";
        assert!(ExperimentSuite::parse(text, Path::new(".")).is_err());
    }

    #[test]
    fn duplicate_labels_fail_before_running() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig::default();
        let suite = ExperimentSuite {
            game: config.game.clone(),
            runs: vec![("a".into(), config.clone()), ("a".into(), config)],
            out_dir: dir.path().join("never"),
        };
        assert!(matches!(run_experiment(&suite), Err(RunError::Config(_))));
        assert!(!dir.path().join("never").exists());
    }

    #[test]
    fn empty_suite_writes_empty_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let suite = ExperimentSuite::parse("game = \"kuhn\"\n", dir.path()).unwrap();
        let manifest = run_experiment(&suite).unwrap();
        assert!(manifest.runs.is_empty());
        let text = fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
        let back: Manifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back, manifest);
    }

    #[test]
    fn sweep_writes_one_csv_per_run() {
        let dir = tempfile::tempdir().unwrap();
        let suite = ExperimentSuite::parse(SWEEP, dir.path()).unwrap();
        let manifest = run_experiment(&suite).unwrap();
        assert_eq!(manifest.runs.len(), 3);
        for entry in &manifest.runs {
            assert!(entry.error.is_none());
            let log = RunLog::read_csv(File::open(dir.path().join(&entry.csv)).unwrap()).unwrap();
            assert_eq!(log.rows().last().unwrap().exploitability, entry.final_exploitability.unwrap());
            assert_eq!(entry.windows.iter().sum::<u64>(), 200);
        }
        assert_eq!(manifest.game_stats.unwrap().nodes, 55);
    }
}
