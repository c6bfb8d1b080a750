use thiserror::Error;

/// Structural problems found while assembling a [`GameTree`](crate::GameTree).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("node {0} is reachable along more than one path")]
    SharedNode(usize),
    #[error("node {0} is not reachable from the root")]
    Unreachable(usize),
    #[error("non-terminal node {0} has no actions")]
    EmptyActions(usize),
    #[error("chance node {node} has invalid distribution (sum {sum})")]
    BadChance { node: usize, sum: f64 },
    #[error("infoset {key:?} has inconsistent actions across its histories")]
    InconsistentInfoset { key: String },
    #[error("invalid game parameters: {0}")]
    InvalidParameters(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("infoset {0} is not defined for this strategy")]
    UnknownInfoset(usize),
    #[error("strategy has {got} infosets but the game expects {expected}")]
    InfosetCount { expected: usize, got: usize },
    #[error("infoset {infoset} has {got} probabilities but {expected} actions")]
    ActionCount {
        infoset: usize,
        expected: usize,
        got: usize,
    },
    #[error("infoset {infoset} is not a distribution (sum {sum})")]
    NotDistribution { infoset: usize, sum: f64 },
    #[error("strategy belongs to {got:?}, expected {expected:?}")]
    WrongPlayer {
        expected: crate::Player,
        got: crate::Player,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("{count} pure strategies exceed the enumeration cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegretError {
    #[error("cannot regret-match an empty vector")]
    EmptyVector,
    #[error("iteration {t} is outside a window of length {len}")]
    OutOfWindow { t: u64, len: u64 },
    #[error("no iterations accumulated in the current window")]
    EmptyWindow,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RestrictionError {
    #[error("infoset {infoset} of {player:?} has no admitted actions")]
    NoAdmittedActions { player: crate::Player, infoset: usize },
    #[error("population does not match the game: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// Errors raised by the double-oracle driver and the experiment harness.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Regret(#[from] RegretError),
    #[error(transparent)]
    Restriction(#[from] RestrictionError),
    #[error("strategy snapshots were not retained for this run")]
    SnapshotsUnavailable,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
