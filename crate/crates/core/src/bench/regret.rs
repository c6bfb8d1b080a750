//! Weighted-average regret measured from retained strategy snapshots.

use serde::{Deserialize, Serialize};

use crate::driver::{behavior_from_weights, SnapshotHistory};
use crate::error::RunError;
use crate::game::{GameTree, Player};
use crate::oracle::best_response;
use crate::strategy::JointStrategy;
use crate::value::{expected_value, sequence_reach};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegretCheckpoint {
    pub iteration: u64,
    /// Measured weighted-average regret of each player.
    pub regret: [f64; 2],
}

/// Per-snapshot regrets `max_pi v_i(pi, pi^t_-i) - v_i(pi^t)` for both players.
fn instantaneous(history: &SnapshotHistory, game: &GameTree) -> Result<Vec<[f64; 2]>, RunError> {
    history
        .snapshots
        .iter()
        .map(|snap| {
            let joint = history.expanded(snap, game)?;
            let v1 = expected_value(game, &joint);
            let mut out = [0.0; 2];
            for p in Player::BOTH {
                let br = best_response(game, joint.get(p.opponent()), p)?;
                out[p.index()] = br.value - p.sign() * v1;
            }
            Ok(out)
        })
        .collect()
}

/// Cross-window weight of each retained snapshot as of checkpoint `t` (zero past `t`).
fn weights_at(history: &SnapshotHistory, t: u64) -> Vec<f64> {
    let mut starts = Vec::with_capacity(history.window_lengths.len());
    let mut acc = 0;
    for &len in &history.window_lengths {
        starts.push(acc);
        acc += len;
    }
    let variant = history.variant;
    history
        .snapshots
        .iter()
        .map(|snap| {
            if snap.iteration > t {
                return 0.0;
            }
            let j = snap.window as usize;
            let len = history.window_lengths[j].min(t - starts[j]);
            let z: f64 = (1..=len).map(|u| variant.raw_weight(u)).sum();
            len as f64 * variant.raw_weight(snap.t_in_window) / z / t as f64
        })
        .collect()
}

/// `R_i^T = sum_t W_t [max_pi v_i(pi, pi^t_-i) - v_i(pi^t)] / sum_t W_t` over the snapshots
/// retained up to iteration `t`.
pub fn measured_average_regret(
    history: &SnapshotHistory,
    game: &GameTree,
    player: Player,
    t: u64,
) -> Result<f64, RunError> {
    Ok(regret_curve(history, game, &[t])?[0].regret[player.index()])
}

/// Measured regrets of both players at several checkpoints, evaluating each snapshot once.
pub fn regret_curve(
    history: &SnapshotHistory,
    game: &GameTree,
    checkpoints: &[u64],
) -> Result<Vec<RegretCheckpoint>, RunError> {
    if history.snapshots.is_empty() {
        return Err(RunError::SnapshotsUnavailable);
    }
    let rho = instantaneous(history, game)?;
    checkpoints
        .iter()
        .map(|&t| {
            let w = weights_at(history, t);
            let total: f64 = w.iter().sum();
            if total == 0.0 {
                return Err(RunError::SnapshotsUnavailable);
            }
            let mut regret = [0.0; 2];
            for (wi, r) in w.iter().zip(&rho) {
                regret[0] += wi * r[0];
                regret[1] += wi * r[1];
            }
            Ok(RegretCheckpoint {
                iteration: t,
                regret: regret.map(|r| r / total),
            })
        })
        .collect()
}

/// Overall average strategy as of checkpoint `t`, rebuilt from the snapshots.
pub fn overall_average_from_snapshots(
    history: &SnapshotHistory,
    game: &GameTree,
    t: u64,
) -> Result<JointStrategy, RunError> {
    let weights = weights_at(history, t);
    let mut plans = Player::BOTH.map(|p| {
        game.infosets(p)
            .iter()
            .map(|s| vec![0.0; s.num_actions()])
            .collect::<Vec<_>>()
    });
    for (snap, &w) in history.snapshots.iter().zip(&weights) {
        if w == 0.0 {
            continue;
        }
        let joint = history.expanded(snap, game)?;
        for p in Player::BOTH {
            let strategy = joint.get(p);
            let reach = sequence_reach(game, strategy);
            for (s, row) in plans[p.index()].iter_mut().enumerate() {
                for (a, x) in row.iter_mut().enumerate() {
                    *x += w * reach[s] * strategy.probs(s)[a];
                }
            }
        }
    }
    let [p1, p2] = plans;
    Ok(JointStrategy::new(
        behavior_from_weights(Player::One, p1)?,
        behavior_from_weights(Player::Two, p2)?,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::{run_on, Algorithm, NoObserver, RunConfig, Snapshot};
    use crate::regret::RegretVariant;
    use crate::restriction::Population;
    use crate::zoo::{paper_example, GameSpec};

    fn single(game: &GameTree, played: JointStrategy) -> SnapshotHistory {
        SnapshotHistory {
            variant: RegretVariant::Vanilla,
            snapshots: vec![Snapshot {
                iteration: 1,
                window: 0,
                t_in_window: 1,
                played,
            }],
            populations: vec![Population::full(game)],
            window_lengths: vec![1],
        }
    }

    #[test]
    fn uniform_paper_example_regret() {
        let game = paper_example();
        let h = single(&game, JointStrategy::uniform(&game));
        let r = measured_average_regret(&h, &game, Player::One, 1).unwrap();
        assert!((r - 0.25).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_has_no_regret() {
        let game = paper_example();
        let ne = JointStrategy::new(
            crate::BehaviorStrategy::pure(&game, Player::One, &[0]).unwrap(),
            crate::BehaviorStrategy::pure(&game, Player::Two, &[1]).unwrap(),
        )
        .unwrap();
        let h = single(&game, ne);
        for p in Player::BOTH {
            assert!(measured_average_regret(&h, &game, p, 1).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn snapshot_average_matches_streaming_average() {
        let game = crate::zoo::kuhn(1).unwrap();
        let config = RunConfig {
            game: GameSpec::Kuhn { pot: 1, dummy: false },
            algo: Algorithm::Xodo,
            max_iterations: Some(120),
            exact_regret: true,
            ..Default::default()
        };
        let result = run_on(&game, &config, &mut NoObserver).unwrap();
        let history = result.snapshots.as_ref().unwrap();
        let rebuilt = overall_average_from_snapshots(history, &game, 120).unwrap();
        for p in Player::BOTH {
            for (a, b) in rebuilt.get(p).flat().iter().zip(result.overall_average.get(p).flat()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn empty_history_is_an_error() {
        let game = paper_example();
        let mut h = single(&game, JointStrategy::uniform(&game));
        h.snapshots.clear();
        assert!(matches!(
            measured_average_regret(&h, &game, Player::One, 1),
            Err(RunError::SnapshotsUnavailable)
        ));
    }
}
