//! Self-checks on the built-in games, run by `rmdo verify`.

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::driver::{k_statistics, run_on, Algorithm, IterationEvent, NoObserver, RunConfig, RunObserver};
use crate::game::{validate_perfect_recall, GameTree, Player};
use crate::oracle::{best_response, brute_force_best_response, exploitability, BRUTE_FORCE_CAP};
use crate::regret::{RegretTables, RegretVariant, UpdateOrder};
use crate::strategy::{BehaviorStrategy, JointStrategy};
use crate::zoo::{self, GameSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<String, String>;

const CHECKS: [(&str, Check); 7] = [
    ("perfect_recall", perfect_recall),
    ("best_response_matches_enumeration", br_equivalence),
    ("exploitability_nonnegative", exploitability_nonnegative),
    ("paper_example_trace", paper_example_trace),
    ("kuhn_cfr_plus_convergence", kuhn_convergence),
    ("pdo_one_matches_xodo", pdo_one_matches_xodo),
    ("deterministic_counters", deterministic_counters),
];

/// Runs every check; a panic inside a check counts as a failure.
pub fn verify() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| {
            let (passed, detail) = match std::panic::catch_unwind(*check) {
                Ok(Ok(detail)) => (true, detail),
                Ok(Err(detail)) => (false, detail),
                Err(_) => (false, "panicked".to_owned()),
            };
            CheckOutcome {
                name: (*name).to_owned(),
                passed,
                detail,
            }
        })
        .collect()
}

fn small_games() -> Vec<(String, GameTree)> {
    [
        "paper-example",
        "matching-pennies",
        "kuhn",
        "kuhn:pot=3",
        "kuhn:pot=2,dummy=true",
        "leduc",
        "oshi-zumo",
        "sequential-blotto:rounds=2,forces=3",
        "sequential-blotto:rounds=4,forces=4",
    ]
    .iter()
    .map(|s| {
        let spec: GameSpec = s.parse().expect("built-in spec");
        (s.to_string(), spec.build().expect("built-in game"))
    })
    .collect()
}

fn perfect_recall() -> Result<String, String> {
    let games = small_games();
    for (name, game) in &games {
        let report = validate_perfect_recall(game);
        if !report.is_valid() {
            return Err(format!("{name}: {report:?}"));
        }
    }
    Ok(format!("{} games", games.len()))
}

fn br_equivalence() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(7);
    let mut compared = 0;
    for spec in ["paper-example", "kuhn", "sequential-blotto:rounds=2,forces=3"] {
        let game = spec.parse::<GameSpec>().unwrap().build().unwrap();
        for _ in 0..20 {
            for p in Player::BOTH {
                let opp = BehaviorStrategy::random(&game, p.opponent(), &mut rng);
                let fast = best_response(&game, &opp, p).map_err(|e| e.to_string())?;
                let slow = brute_force_best_response(&game, &opp, p, BRUTE_FORCE_CAP).map_err(|e| e.to_string())?;
                if (fast.value - slow.value).abs() >= 1e-12 {
                    return Err(format!("{spec}: {} vs {}", fast.value, slow.value));
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} comparisons"))
}

fn exploitability_nonnegative() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(11);
    let mut worst = f64::INFINITY;
    for (name, game) in small_games() {
        for _ in 0..10 {
            let joint = JointStrategy::new(
                BehaviorStrategy::random(&game, Player::One, &mut rng),
                BehaviorStrategy::random(&game, Player::Two, &mut rng),
            )
            .unwrap();
            let e = exploitability(&game, &joint).map_err(|e| e.to_string())?;
            if e < -1e-9 {
                return Err(format!("{name}: {e}"));
            }
            worst = worst.min(e);
        }
    }
    Ok(format!("minimum {worst:.3e}"))
}

fn paper_example_trace() -> Result<String, String> {
    let game = zoo::paper_example();
    let config = RunConfig {
        game: GameSpec::PaperExample,
        algo: Algorithm::Pdo,
        period: 1,
        eval_every: 1,
        target_eps: Some(1e-12),
        max_iterations: Some(10),
        ..Default::default()
    };
    let result = run_on(&game, &config, &mut NoObserver).map_err(|e| e.to_string())?;
    let pure_l_y = result.output.get(Player::One).probs(0) == [1.0, 0.0]
        && result.output.get(Player::Two).probs(0) == [0.0, 1.0];
    if result.k != 1 || !pure_l_y || result.final_exploitability.abs() > 1e-12 {
        return Err(format!("k={} e={}", result.k, result.final_exploitability));
    }
    let stats = k_statistics(&result, &game);
    if !stats.bound_satisfied || !stats.populations_monotone {
        return Err(format!("{stats:?}"));
    }
    Ok("(L, Y) with zero exploitability in one window".into())
}

fn kuhn_convergence() -> Result<String, String> {
    let game = zoo::kuhn(1).unwrap();
    let mut tables = RegretTables::new(&game, RegretVariant::Plus, UpdateOrder::Alternating);
    for _ in 0..1000 {
        tables.cfr_iteration(&game).map_err(|e| e.to_string())?;
    }
    let avg = tables.window_average_strategy().map_err(|e| e.to_string())?;
    let e = exploitability(&game, &avg).map_err(|e| e.to_string())?;
    let v = crate::value::expected_value(&game, &avg);
    if e >= 1e-3 || (v + 1.0 / 18.0).abs() >= 1e-3 {
        return Err(format!("e={e:.3e} v={v:.6}"));
    }
    Ok(format!("e={e:.3e} v={v:.6}"))
}

#[derive(Default)]
struct Trace(Vec<(u64, JointStrategy)>);

impl RunObserver for Trace {
    fn on_iteration(&mut self, event: &IterationEvent<'_>) {
        self.0.push((event.window, event.played.clone()));
    }
}

fn pdo_one_matches_xodo() -> Result<String, String> {
    let game = zoo::kuhn(1).unwrap();
    let base = RunConfig {
        max_iterations: Some(200),
        snapshot_every: 0,
        ..Default::default()
    };
    let mut traces = Vec::new();
    let mut populations = Vec::new();
    for config in [
        RunConfig { algo: Algorithm::Pdo, period: 1, ..base.clone() },
        RunConfig { algo: Algorithm::Xodo, ..base },
    ] {
        let mut trace = Trace::default();
        let result = run_on(&game, &config, &mut trace).map_err(|e| e.to_string())?;
        traces.push(trace.0);
        populations.push(result.populations);
    }
    if traces[0] != traces[1] || populations[0] != populations[1] {
        return Err("trajectories differ".into());
    }
    Ok(format!("{} iterations identical", traces[0].len()))
}

fn deterministic_counters() -> Result<String, String> {
    let game = zoo::kuhn(2).unwrap();
    let config = RunConfig {
        game: GameSpec::Kuhn { pot: 2, dummy: false },
        algo: Algorithm::Xdo,
        max_iterations: Some(300),
        ..Default::default()
    };
    let a = run_on(&game, &config, &mut NoObserver).map_err(|e| e.to_string())?;
    let b = run_on(&game, &config, &mut NoObserver).map_err(|e| e.to_string())?;
    let strip = |r: &crate::driver::RunResult| {
        r.log
            .rows()
            .iter()
            .map(|row| (row.iteration, row.visited_infosets, row.exploitability.to_bits(), row.window, row.population_size))
            .collect::<Vec<_>>()
    };
    if strip(&a) != strip(&b) {
        return Err("logs differ".into());
    }
    Ok(format!("{} rows identical", a.log.rows().len()))
}
