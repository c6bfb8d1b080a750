//! Experiment harness: measured regret, suites with CSV/JSON artifacts, and self-checks.

mod regret;
mod suite;
mod verify;

pub use regret::{measured_average_regret, overall_average_from_snapshots, regret_curve, RegretCheckpoint};
pub use suite::{
    config_from_table, parse_run_config, parse_table, run_experiment, thread_limit, ExperimentSuite, GameStats,
    Manifest, ManifestEntry, GAME_PARAM_KEYS, MANIFEST_FILE, THREADS_ENV,
};
pub use verify::{verify, CheckOutcome};
