//! Regret-minimizing double oracle for two-player zero-sum extensive-form games.
//!
//! Games are explicit trees ([`GameTree`]); every algorithm runs against the [`GameView`]
//! trait so the full game and restricted games share one traversal API.

pub mod bench;
pub mod driver;
pub mod error;
pub mod game;
pub mod log;
pub mod oracle;
pub mod regret;
pub mod restriction;
pub mod strategy;
pub mod value;
pub mod zoo;

pub use driver::{
    k_statistics, run, run_on, should_compute_br, Algorithm, FrequencyScheme, KStatistics, OutputSelector,
    RunConfig, RunObserver, RunResult, StopReason, WindowState,
};
pub use error::{GameError, OracleError, RegretError, RestrictionError, RunError, StrategyError};
pub use game::{
    validate_perfect_recall, GameBuilder, GameTree, GameView, Infoset, Node, NodeId, NodeKind, Player,
    RecallReport,
};
pub use log::{LogRow, RunLog};
pub use oracle::{best_response, brute_force_best_response, exploitability, BestResponseResult};
pub use regret::{regret_matching, window_weight, RegretTables, RegretVariant, UpdateOrder};
pub use restriction::{expand_joint, expand_strategy, restrict_strategy, Population, RestrictedView};
pub use strategy::{support_size, BehaviorStrategy, JointStrategy};
pub use value::{expected_value, reach_contributions, Reach};
pub use zoo::GameSpec;
