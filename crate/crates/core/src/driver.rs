//! The regret-minimizing double oracle loop.
//!
//! Each iteration runs one CFR iteration in the current restricted game. Whenever the frequency
//! scheme asks for it, both players' full-game best responses to the current window's average
//! strategy are merged into the population; if the population grew, the window closes, the regret
//! tables reset, and the restricted game is rebuilt.

use std::time::{Duration, Instant};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{RunError, StrategyError};
use crate::game::{GameTree, Player};
use crate::log::{LogRow, RunLog};
use crate::oracle::{exploitability, exploitability_report};
use crate::regret::{normalize_into, RegretTables, RegretVariant, UpdateOrder};
use crate::restriction::{expand_joint, Population, RestrictedView};
use crate::strategy::{support_size, BehaviorStrategy, JointStrategy};
use crate::zoo::GameSpec;

/// Largest game (in nodes) for which every iteration's strategy may be retained.
pub const EXACT_REGRET_MAX_NODES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Best responses every iteration.
    Xodo,
    /// Best responses every `period` iterations of a window.
    Pdo,
    /// Best responses once the restricted game is solved to a halving threshold.
    Xdo,
}

/// When best responses are computed within a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyScheme {
    EveryIteration,
    Periodic(u64),
    /// Initial threshold `eps0`; the active threshold is `eps0 / 2^level`.
    Threshold(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputSelector {
    /// Average over all iterations with cross-window weights `|T_j| w_t / T`.
    Overall,
    /// Average over the last window only.
    LastWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TargetReached,
    MaxIterations,
    MaxVisited,
    MaxWallTime,
}

mod spec_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::zoo::GameSpec;

    pub fn serialize<S: Serializer>(spec: &GameSpec, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(spec)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GameSpec, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn zero_is_unlimited<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
    Ok(Option::<u64>::deserialize(d)?.filter(|&n| n > 0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(with = "spec_text")]
    pub game: GameSpec,
    pub algo: Algorithm,
    /// PDO period `c`.
    pub period: u64,
    /// XDO initial threshold; defaults to half the exploitability of the uniform strategy.
    pub eps0: Option<f64>,
    pub regret: RegretVariant,
    pub update_order: UpdateOrder,
    pub target_eps: Option<f64>,
    /// In config text, `0` lifts the limit.
    #[serde(deserialize_with = "zero_is_unlimited")]
    pub max_iterations: Option<u64>,
    pub max_visited: Option<u64>,
    pub max_wall_time_s: Option<f64>,
    /// Evaluate the output strategy every this many iterations (0: only at window closes and
    /// at the end).
    pub eval_every: u64,
    /// Defaults to overall for XODO and last-window otherwise.
    pub output: Option<OutputSelector>,
    /// Retain the played strategy every this many iterations (0: none).
    pub snapshot_every: u64,
    /// Retain every iteration's strategy; only allowed on small games.
    pub exact_regret: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            game: GameSpec::Kuhn { pot: 1, dummy: false },
            algo: Algorithm::Pdo,
            period: 50,
            eps0: None,
            regret: RegretVariant::Plus,
            update_order: UpdateOrder::Alternating,
            target_eps: None,
            max_iterations: Some(10_000),
            max_visited: None,
            max_wall_time_s: None,
            eval_every: 10,
            output: None,
            snapshot_every: 10,
            exact_regret: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        let fail = |msg: &str| Err(RunError::Config(msg.to_owned()));
        self.game.validate()?;
        if self.algo == Algorithm::Pdo && self.period == 0 {
            return fail("period must be at least 1");
        }
        if self.eps0.is_some_and(|e| !(e > 0.0)) {
            return fail("eps0 must be positive");
        }
        if self.target_eps.is_some_and(|e| !(e > 0.0)) {
            return fail("target_eps must be positive");
        }
        if self.max_iterations == Some(0) {
            return fail("max_iterations must be at least 1");
        }
        if self.max_wall_time_s.is_some_and(|s| !(s > 0.0)) {
            return fail("max_wall_time_s must be positive");
        }
        if self.target_eps.is_none()
            && self.max_iterations.is_none()
            && self.max_visited.is_none()
            && self.max_wall_time_s.is_none()
        {
            return fail("at least one stop rule is required");
        }
        Ok(())
    }

    pub fn output_selector(&self) -> OutputSelector {
        self.output.unwrap_or(match self.algo {
            Algorithm::Xodo => OutputSelector::Overall,
            Algorithm::Pdo | Algorithm::Xdo => OutputSelector::LastWindow,
        })
    }

    /// The frequency scheme, using `default_eps0` when XDO has no explicit threshold.
    pub fn scheme(&self, default_eps0: f64) -> FrequencyScheme {
        match self.algo {
            Algorithm::Xodo => FrequencyScheme::EveryIteration,
            Algorithm::Pdo => FrequencyScheme::Periodic(self.period),
            Algorithm::Xdo => FrequencyScheme::Threshold(self.eps0.unwrap_or(default_eps0)),
        }
    }

    fn snapshot_period(&self) -> u64 {
        if self.exact_regret {
            1
        } else {
            self.snapshot_every
        }
    }
}

/// Window bookkeeping.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WindowState {
    /// Index `j` of the current window.
    pub index: u64,
    /// Iterations run in the current window.
    pub in_window: u64,
    /// Iterations run overall.
    pub total: u64,
    pub closed_lengths: Vec<u64>,
    /// Number of times the XDO threshold has been met.
    pub threshold_level: u32,
}

impl WindowState {
    pub fn record_iteration(&mut self) {
        self.in_window += 1;
        self.total += 1;
    }

    pub fn close(&mut self) {
        self.closed_lengths.push(self.in_window);
        self.in_window = 0;
        self.index += 1;
    }

    /// Lengths of every window, the current one last.
    pub fn lengths(&self) -> Vec<u64> {
        let mut out = self.closed_lengths.clone();
        out.push(self.in_window);
        out
    }

    pub fn threshold(&self, eps0: f64) -> f64 {
        eps0 / 2f64.powi(self.threshold_level as i32)
    }
}

/// Whether best responses are due after the current iteration. The probe (restricted-game
/// exploitability of the window average) is only called by the threshold scheme.
pub fn should_compute_br<E>(
    scheme: FrequencyScheme,
    window: &WindowState,
    probe: impl FnOnce() -> Result<f64, E>,
) -> Result<bool, E> {
    Ok(match scheme {
        FrequencyScheme::EveryIteration => true,
        FrequencyScheme::Periodic(c) => window.in_window % c == 0,
        FrequencyScheme::Threshold(eps0) => probe()? <= window.threshold(eps0),
    })
}

/// Cross-window weights `W_t = |T_j| w_t / T` for every iteration of a run.
pub fn global_weights(variant: RegretVariant, window_lengths: &[u64]) -> Vec<f64> {
    let total: u64 = window_lengths.iter().sum();
    let mut out = Vec::with_capacity(total as usize);
    for &len in window_lengths {
        let z: f64 = (1..=len).map(|t| variant.raw_weight(t)).sum();
        for t in 1..=len {
            out.push(len as f64 * (variant.raw_weight(t) / z) / total as f64);
        }
    }
    out
}

/// Strategy played at one iteration, in the layout of that iteration's restricted game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub iteration: u64,
    pub window: u64,
    pub t_in_window: u64,
    pub played: JointStrategy,
}

/// Retained strategies plus what is needed to expand and weight them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHistory {
    pub variant: RegretVariant,
    pub snapshots: Vec<Snapshot>,
    /// Population of each window.
    pub populations: Vec<Population>,
    pub window_lengths: Vec<u64>,
}

impl SnapshotHistory {
    pub fn expanded(&self, snapshot: &Snapshot, game: &GameTree) -> Result<JointStrategy, RunError> {
        Ok(expand_joint(
            &snapshot.played,
            &self.populations[snapshot.window as usize],
            game,
        )?)
    }
}

/// One completed iteration, as seen by a [`RunObserver`].
#[derive(Debug)]
pub struct IterationEvent<'a> {
    pub iteration: u64,
    pub window: u64,
    /// Joint strategy played this iteration, in the restricted game's layout.
    pub played: &'a JointStrategy,
    pub population: &'a Population,
}

pub trait RunObserver {
    fn on_iteration(&mut self, _event: &IterationEvent<'_>) {}

    fn on_row(&mut self, _row: &LogRow) -> Result<(), RunError> {
        Ok(())
    }
}

pub struct NoObserver;

impl RunObserver for NoObserver {}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub output_kind: OutputSelector,
    /// The selected output strategy, on the full game.
    pub output: JointStrategy,
    pub overall_average: JointStrategy,
    pub last_window_average: JointStrategy,
    pub final_exploitability: f64,
    /// Number of windows.
    pub k: usize,
    pub window_lengths: Vec<u64>,
    pub iterations: u64,
    pub visited: u64,
    pub log: RunLog,
    pub stop_reason: StopReason,
    /// Population of each window.
    pub populations: Vec<Population>,
    /// Initial XDO threshold actually used.
    pub eps0: Option<f64>,
    /// Threshold in force at each XDO best-response round.
    pub thresholds: Vec<f64>,
    pub snapshots: Option<SnapshotHistory>,
}

/// Wall clock that can leave out measurement work.
struct Clock {
    start: Instant,
    excluded: Duration,
}

impl Clock {
    fn start() -> Self {
        Self {
            start: Instant::now(),
            excluded: Duration::ZERO,
        }
    }

    fn elapsed(&self) -> Duration {
        self.start.elapsed().saturating_sub(self.excluded)
    }

    fn exclude<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.excluded += t0.elapsed();
        out
    }
}

/// Builds the configured game and runs on it.
pub fn run(config: &RunConfig) -> Result<RunResult, RunError> {
    let game = config.game.build()?;
    run_on(&game, config, &mut NoObserver)
}

/// Runs the configured algorithm on `game` (the config's game spec is not rebuilt).
pub fn run_on(game: &GameTree, config: &RunConfig, observer: &mut dyn RunObserver) -> Result<RunResult, RunError> {
    config.validate()?;
    if config.exact_regret && game.num_nodes() > EXACT_REGRET_MAX_NODES {
        return Err(RunError::Config(format!(
            "exact regret needs a game of at most {EXACT_REGRET_MAX_NODES} nodes, got {}",
            game.num_nodes()
        )));
    }
    let mut clock = Clock::start();
    let mut visited = 0u64;

    let initial = exploitability_report(game, &JointStrategy::uniform(game))?;
    visited += initial.visited;
    let scheme = config.scheme(initial.value / 2.0);
    let eps0 = match scheme {
        FrequencyScheme::Threshold(e) => Some(e),
        _ => None,
    };
    let [br1, br2] = &initial.best_responses;
    let mut population = Population::from_best_responses(br1, br2);
    let mut populations = vec![population.clone()];
    let mut view = RestrictedView::new(game, population.clone())?;
    let mut tables = RegretTables::new(&view, config.regret, config.update_order);

    let selector = config.output_selector();
    let mut averages = Averages::new(game);
    let mut window = WindowState::default();
    let mut log = RunLog::default();
    let mut thresholds = Vec::new();
    let snapshot_period = config.snapshot_period();
    let mut snapshots = Vec::new();

    let emit = |row: LogRow, log: &mut RunLog, observer: &mut dyn RunObserver| {
        log.push(row);
        observer.on_row(&row)
    };

    let stop_reason = loop {
        if config.max_iterations.is_some_and(|m| window.total >= m) {
            break StopReason::MaxIterations;
        }
        if config.max_visited.is_some_and(|m| visited >= m) {
            break StopReason::MaxVisited;
        }
        if config
            .max_wall_time_s
            .is_some_and(|s| clock.elapsed().as_secs_f64() >= s)
        {
            break StopReason::MaxWallTime;
        }

        let report = tables.cfr_iteration(&view)?;
        visited += report.visited;
        window.record_iteration();
        observer.on_iteration(&IterationEvent {
            iteration: window.total,
            window: window.index,
            played: &report.played,
            population: &population,
        });
        if snapshot_period > 0 && window.total % snapshot_period == 0 {
            snapshots.push(Snapshot {
                iteration: window.total,
                window: window.index,
                t_in_window: window.in_window,
                played: report.played,
            });
        }

        let due = should_compute_br(scheme, &window, || -> Result<f64, RunError> {
            let probe = exploitability_report(&view, &tables.window_average_strategy()?)?;
            visited += probe.visited;
            Ok(probe.value)
        })?;

        let mut evaluated = None;
        if due {
            if let FrequencyScheme::Threshold(e) = scheme {
                thresholds.push(window.threshold(e));
                window.threshold_level += 1;
            }
            let target = expand_joint(&tables.window_average_strategy()?, &population, game)?;
            let responses = exploitability_report(game, &target)?;
            visited += responses.visited;
            let mut changed = false;
            for br in &responses.best_responses {
                changed |= population.merge_best_response(br)?;
            }
            if changed {
                averages.close_window(&tables, &view, window.in_window, target)?;
                let closing = window.index;
                window.close();
                let e = clock.exclude(|| -> Result<f64, RunError> {
                    let output = averages.output(selector, &tables, &view, &window)?;
                    Ok(exploitability(game, &output)?)
                })?;
                evaluated = Some(e);
                let row = LogRow {
                    iteration: window.total,
                    visited_infosets: visited,
                    wall_time_s: clock.elapsed().as_secs_f64(),
                    exploitability: e,
                    window: closing,
                    population_size: populations.last().map_or(0, |p| p.size() as u64),
                };
                emit(row, &mut log, observer)?;

                population.advance_generation();
                populations.push(population.clone());
                view = RestrictedView::new(game, population.clone())?;
                tables.reset_for_new_window(&view);
            }
        }

        if evaluated.is_none() && config.eval_every > 0 && window.total % config.eval_every == 0 {
            let e = clock.exclude(|| -> Result<f64, RunError> {
                let output = averages.output(selector, &tables, &view, &window)?;
                Ok(exploitability(game, &output)?)
            })?;
            evaluated = Some(e);
            let row = LogRow {
                iteration: window.total,
                visited_infosets: visited,
                wall_time_s: clock.elapsed().as_secs_f64(),
                exploitability: e,
                window: window.index,
                population_size: population.size() as u64,
            };
            emit(row, &mut log, observer)?;
        }

        if let (Some(target), Some(e)) = (config.target_eps, evaluated) {
            if e <= target {
                break StopReason::TargetReached;
            }
        }
    };

    let (overall, last_window) = clock.exclude(|| -> Result<_, RunError> {
        Ok((
            averages.output(OutputSelector::Overall, &tables, &view, &window)?,
            averages.output(OutputSelector::LastWindow, &tables, &view, &window)?,
        ))
    })?;
    let output = match selector {
        OutputSelector::Overall => overall.clone(),
        OutputSelector::LastWindow => last_window.clone(),
    };
    let final_exploitability = match log.last() {
        Some(row) if row.iteration == window.total => row.exploitability,
        _ => {
            let e = clock.exclude(|| exploitability(game, &output))?;
            let row = LogRow {
                iteration: window.total,
                visited_infosets: visited,
                wall_time_s: clock.elapsed().as_secs_f64(),
                exploitability: e,
                window: window.index,
                population_size: population.size() as u64,
            };
            emit(row, &mut log, observer)?;
            e
        }
    };

    let window_lengths = window.lengths();
    let snapshots = (snapshot_period > 0).then(|| SnapshotHistory {
        variant: config.regret,
        snapshots,
        populations: populations.clone(),
        window_lengths: window_lengths.clone(),
    });
    Ok(RunResult {
        output_kind: selector,
        output,
        overall_average: overall,
        last_window_average: last_window,
        final_exploitability,
        k: window_lengths.len(),
        window_lengths,
        iterations: window.total,
        visited,
        log,
        stop_reason,
        populations,
        eps0,
        thresholds,
        snapshots,
    })
}

/// Streaming state for the two output strategies.
struct Averages<'g> {
    game: &'g GameTree,
    /// `sum_j |T_j| * (average realization weights of window j)` over closed windows.
    closed: [Vec<Vec<f64>>; 2],
    /// Full-game average of the most recently closed window.
    last_closed: Option<JointStrategy>,
}

impl<'g> Averages<'g> {
    fn new(game: &'g GameTree) -> Self {
        let zeros = |p: Player| {
            game.infosets(p)
                .iter()
                .map(|s| vec![0.0; s.num_actions()])
                .collect()
        };
        Self {
            game,
            closed: [zeros(Player::One), zeros(Player::Two)],
            last_closed: None,
        }
    }

    fn close_window(
        &mut self,
        tables: &RegretTables,
        view: &RestrictedView<'_>,
        len: u64,
        average: JointStrategy,
    ) -> Result<(), RunError> {
        for p in Player::BOTH {
            add_scaled(&mut self.closed[p.index()], &tables.average_realization(view, p)?, len as f64);
        }
        self.last_closed = Some(average);
        Ok(())
    }

    fn output(
        &self,
        selector: OutputSelector,
        tables: &RegretTables,
        view: &RestrictedView<'_>,
        window: &WindowState,
    ) -> Result<JointStrategy, RunError> {
        match selector {
            OutputSelector::Overall => {
                let [p1, p2] = Player::BOTH.map(|p| -> Result<BehaviorStrategy, RunError> {
                    let mut weights = self.closed[p.index()].clone();
                    if window.in_window > 0 {
                        add_scaled(&mut weights, &tables.average_realization(view, p)?, window.in_window as f64);
                    }
                    Ok(behavior_from_weights(p, weights)?)
                });
                Ok(JointStrategy::new(p1?, p2?)?)
            }
            OutputSelector::LastWindow if window.in_window > 0 => Ok(expand_joint(
                &tables.window_average_strategy()?,
                view.population(),
                self.game,
            )?),
            OutputSelector::LastWindow => self.last_closed.clone().ok_or(RunError::Regret(
                crate::error::RegretError::EmptyWindow,
            )),
        }
    }
}

fn add_scaled(acc: &mut [Vec<f64>], rows: &[Vec<f64>], scale: f64) {
    for (a, r) in acc.iter_mut().zip(rows) {
        for (x, y) in a.iter_mut().zip(r) {
            *x += scale * y;
        }
    }
}

/// Behavioral strategy from per-infoset realization weights (uniform where there is no mass).
pub fn behavior_from_weights(player: Player, mut weights: Vec<Vec<f64>>) -> Result<BehaviorStrategy, StrategyError> {
    for row in &mut weights {
        let w = row.clone();
        normalize_into(&w, row);
    }
    BehaviorStrategy::from_rows(player, weights)
}

/// Window-count diagnostics for a finished run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KStatistics {
    pub k: usize,
    /// `|S_1| + |S_2|`.
    pub infoset_total: usize,
    /// `k <= |S_1| + |S_2|`.
    pub bound_satisfied: bool,
    /// `1 + sum_s (|A(s)| - 1)`: every new window needs at least one newly admitted action.
    pub structural_bound: usize,
    pub structural_bound_satisfied: bool,
    /// Every population contains its predecessor.
    pub populations_monotone: bool,
    /// Largest support size of the output strategy over all infosets (informational).
    pub max_output_support: usize,
}

pub fn k_statistics(result: &RunResult, game: &GameTree) -> KStatistics {
    let infoset_total = game.total_infosets();
    let structural_bound = 1 + Player::BOTH
        .iter()
        .flat_map(|&p| game.infosets(p).iter().map(|s| s.num_actions() - 1))
        .sum::<usize>();
    let populations_monotone = result.populations.windows(2).all(|w| w[1].contains(&w[0]));
    let max_output_support = Player::BOTH
        .iter()
        .flat_map(|&p| {
            let s = result.output.get(p);
            (0..s.num_infosets()).map(move |i| support_size(s, i, 0.0).unwrap_or(0))
        })
        .max()
        .unwrap_or(0);
    KStatistics {
        k: result.k,
        infoset_total,
        bound_satisfied: result.k <= infoset_total,
        structural_bound,
        structural_bound_satisfied: result.k <= structural_bound,
        populations_monotone,
        max_output_support,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::paper_example;

    #[test]
    fn periodic_examples() {
        let mut w = WindowState::default();
        w.in_window = 100;
        let never = || -> Result<f64, ()> { panic!("probe not expected") };
        assert_eq!(should_compute_br(FrequencyScheme::Periodic(50), &w, never), Ok(true));
        w.in_window = 101;
        assert_eq!(should_compute_br(FrequencyScheme::Periodic(50), &w, never), Ok(false));
        assert_eq!(should_compute_br(FrequencyScheme::EveryIteration, &w, never), Ok(true));
    }

    #[test]
    fn threshold_example() {
        let w = WindowState {
            threshold_level: 2,
            in_window: 1,
            ..Default::default()
        };
        assert_eq!(w.threshold(0.4), 0.1);
        let probe = || -> Result<f64, ()> { Ok(0.09) };
        assert_eq!(should_compute_br(FrequencyScheme::Threshold(0.4), &w, probe), Ok(true));
        let probe = || -> Result<f64, ()> { Ok(0.11) };
        assert_eq!(should_compute_br(FrequencyScheme::Threshold(0.4), &w, probe), Ok(false));
    }

    #[test]
    fn global_weight_examples() {
        let w = global_weights(RegretVariant::Vanilla, &[4, 6]);
        assert_eq!(w.len(), 10);
        assert!(w.iter().all(|x| (x - 0.1).abs() < 1e-15));
        for lengths in [vec![1], vec![3, 5, 2], vec![7, 1, 1, 9]] {
            for variant in [RegretVariant::Vanilla, RegretVariant::Plus] {
                let sum: f64 = global_weights(variant, &lengths).iter().sum();
                assert!((sum - 1.0).abs() < 1e-12);
            }
        }
        // a single window reduces to the within-window weights
        let w = global_weights(RegretVariant::Plus, &[3]);
        assert!((w[0] - 1.0 / 6.0).abs() < 1e-15 && (w[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let ok = RunConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            RunConfig { period: 0, ..ok.clone() },
            RunConfig { eps0: Some(0.0), ..ok.clone() },
            RunConfig { target_eps: Some(-1.0), ..ok.clone() },
            RunConfig { max_iterations: None, ..ok.clone() },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn config_json_round_trip() {
        let config = RunConfig {
            game: "oshi-zumo:coins=3,half_board=1,min_bid=1".parse().unwrap(),
            algo: Algorithm::Xdo,
            eps0: Some(0.25),
            ..Default::default()
        };
        let text = serde_json::to_string(&config).unwrap();
        assert!(text.contains("\"game\":\"oshi-zumo:coins=3,half_board=1,min_bid=1\""));
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), config);
    }

    #[test]
    fn zero_iterations_lifts_the_limit() {
        let config: RunConfig = serde_json::from_str(r#"{"max_iterations": 0, "target_eps": 0.1}"#).unwrap();
        assert_eq!(config.max_iterations, None);
        let unlimited = RunConfig { max_iterations: None, max_visited: Some(10), ..Default::default() };
        let text = serde_json::to_string(&unlimited).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), unlimited);
    }

    #[test]
    fn paper_example_pdo_one() {
        let game = paper_example();
        let config = RunConfig {
            game: GameSpec::PaperExample,
            period: 1,
            eval_every: 1,
            target_eps: Some(1e-12),
            max_iterations: Some(100),
            ..Default::default()
        };
        let result = run_on(&game, &config, &mut NoObserver).unwrap();
        assert_eq!(result.k, 1);
        assert_eq!(result.iterations, 1);
        assert_eq!(result.stop_reason, StopReason::TargetReached);
        assert_eq!(result.output.get(Player::One).probs(0), &[1.0, 0.0]);
        assert_eq!(result.output.get(Player::Two).probs(0), &[0.0, 1.0]);
        assert!(result.final_exploitability.abs() < 1e-12);
        let stats = k_statistics(&result, &game);
        assert!(stats.bound_satisfied && stats.populations_monotone);
        assert_eq!(stats.infoset_total, 2);
    }

    #[test]
    fn window_lengths_sum_to_iterations() {
        let config = RunConfig {
            algo: Algorithm::Xodo,
            max_iterations: Some(300),
            ..Default::default()
        };
        let result = run(&config).unwrap();
        assert_eq!(result.window_lengths.iter().sum::<u64>(), 300);
        assert_eq!(result.k, result.populations.len());
        let rows = result.log.rows();
        assert!(rows.windows(2).all(|w| w[0].iteration < w[1].iteration
            && w[0].visited_infosets <= w[1].visited_infosets
            && w[0].wall_time_s <= w[1].wall_time_s));
        assert!(rows.iter().all(|r| r.exploitability >= -1e-9));
    }
}
