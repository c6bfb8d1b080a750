//! Behavioral strategies: one probability vector per infoset of a single player.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::StrategyError;
use crate::game::{GameView, Player};

/// Tolerance for a probability vector to count as a distribution.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Per-infoset action probabilities for one player, stored flat.
///
/// The layout (number of actions per infoset) follows the [`GameView`] the strategy was built
/// for, so a strategy on a restricted game indexes the restricted action lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviorStrategy {
    player: Player,
    offsets: Vec<usize>,
    probs: Vec<f64>,
}

impl BehaviorStrategy {
    pub fn uniform<V: GameView + ?Sized>(view: &V, player: Player) -> Self {
        let offsets = layout(view, player);
        let mut probs = vec![0.0; *offsets.last().unwrap()];
        for w in offsets.windows(2) {
            let n = (w[1] - w[0]) as f64;
            probs[w[0]..w[1]].iter_mut().for_each(|p| *p = 1.0 / n);
        }
        Self {
            player,
            offsets,
            probs,
        }
    }

    /// Deterministic strategy choosing `actions[s]` at every infoset `s`.
    pub fn pure<V: GameView + ?Sized>(
        view: &V,
        player: Player,
        actions: &[usize],
    ) -> Result<Self, StrategyError> {
        let offsets = layout(view, player);
        let n = offsets.len() - 1;
        if actions.len() != n {
            return Err(StrategyError::InfosetCount {
                expected: n,
                got: actions.len(),
            });
        }
        let mut probs = vec![0.0; offsets[n]];
        for (s, &a) in actions.iter().enumerate() {
            let width = offsets[s + 1] - offsets[s];
            if a >= width {
                return Err(StrategyError::ActionCount {
                    infoset: s,
                    expected: width,
                    got: a + 1,
                });
            }
            probs[offsets[s] + a] = 1.0;
        }
        Ok(Self {
            player,
            offsets,
            probs,
        })
    }

    /// Random strategy with independent uniform weights per action.
    pub fn random<V: GameView + ?Sized, R: Rng + ?Sized>(view: &V, player: Player, rng: &mut R) -> Self {
        let mut out = Self::uniform(view, player);
        for s in 0..out.num_infosets() {
            let row = out.probs_mut(s);
            row.iter_mut().for_each(|p| *p = rng.random::<f64>() + 1e-3);
            let sum: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= sum);
        }
        out
    }

    pub fn from_rows(player: Player, rows: Vec<Vec<f64>>) -> Result<Self, StrategyError> {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut probs = Vec::new();
        for row in rows {
            probs.extend_from_slice(&row);
            offsets.push(probs.len());
        }
        let out = Self {
            player,
            offsets,
            probs,
        };
        out.check_distributions()?;
        Ok(out)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.num_infosets()).map(|s| self.probs(s).to_vec()).collect()
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn num_infosets(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_actions(&self, infoset: usize) -> usize {
        self.offsets[infoset + 1] - self.offsets[infoset]
    }

    pub fn probs(&self, infoset: usize) -> &[f64] {
        &self.probs[self.offsets[infoset]..self.offsets[infoset + 1]]
    }

    pub fn probs_mut(&mut self, infoset: usize) -> &mut [f64] {
        &mut self.probs[self.offsets[infoset]..self.offsets[infoset + 1]]
    }

    pub fn get(&self, infoset: usize) -> Result<&[f64], StrategyError> {
        if infoset >= self.num_infosets() {
            return Err(StrategyError::UnknownInfoset(infoset));
        }
        Ok(self.probs(infoset))
    }

    /// All probabilities, infoset after infoset.
    pub fn flat(&self) -> &[f64] {
        &self.probs
    }

    /// Same player and per-infoset action counts.
    pub fn same_layout(&self, other: &BehaviorStrategy) -> bool {
        self.player == other.player && self.offsets == other.offsets
    }

    pub fn is_pure(&self) -> bool {
        (0..self.num_infosets()).all(|s| self.probs(s).iter().filter(|&&p| p != 0.0).count() == 1)
    }

    /// Checks the layout against `view` and every row against the distribution tolerance.
    pub fn validate_for<V: GameView + ?Sized>(&self, view: &V) -> Result<(), StrategyError> {
        let n = view.infoset_count(self.player);
        if self.num_infosets() != n {
            return Err(StrategyError::InfosetCount {
                expected: n,
                got: self.num_infosets(),
            });
        }
        for s in 0..n {
            let expected = view.action_count(self.player, s);
            if self.num_actions(s) != expected {
                return Err(StrategyError::ActionCount {
                    infoset: s,
                    expected,
                    got: self.num_actions(s),
                });
            }
        }
        self.check_distributions()
    }

    fn check_distributions(&self) -> Result<(), StrategyError> {
        for s in 0..self.num_infosets() {
            let row = self.probs(s);
            let sum: f64 = row.iter().sum();
            if row.iter().any(|&p| !(p >= 0.0)) || (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
                return Err(StrategyError::NotDistribution { infoset: s, sum });
            }
        }
        Ok(())
    }
}

fn layout<V: GameView + ?Sized>(view: &V, player: Player) -> Vec<usize> {
    let n = view.infoset_count(player);
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for s in 0..n {
        offsets.push(offsets[s] + view.action_count(player, s));
    }
    offsets
}

/// Number of actions at `infoset` played with probability strictly above `threshold`.
pub fn support_size(
    strategy: &BehaviorStrategy,
    infoset: usize,
    threshold: f64,
) -> Result<usize, StrategyError> {
    Ok(strategy.get(infoset)?.iter().filter(|&&p| p > threshold).count())
}

/// A strategy for each player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointStrategy {
    players: [BehaviorStrategy; 2],
}

impl JointStrategy {
    pub fn new(p1: BehaviorStrategy, p2: BehaviorStrategy) -> Result<Self, StrategyError> {
        for (expected, s) in [(Player::One, &p1), (Player::Two, &p2)] {
            if s.player() != expected {
                return Err(StrategyError::WrongPlayer {
                    expected,
                    got: s.player(),
                });
            }
        }
        Ok(Self { players: [p1, p2] })
    }

    pub fn uniform<V: GameView + ?Sized>(view: &V) -> Self {
        Self {
            players: Player::BOTH.map(|p| BehaviorStrategy::uniform(view, p)),
        }
    }

    pub fn get(&self, player: Player) -> &BehaviorStrategy {
        &self.players[player.index()]
    }

    pub fn get_mut(&mut self, player: Player) -> &mut BehaviorStrategy {
        &mut self.players[player.index()]
    }

    pub fn with(&self, player: Player, strategy: BehaviorStrategy) -> Self {
        let mut out = self.clone();
        out.players[player.index()] = strategy;
        out
    }

    pub fn validate_for<V: GameView + ?Sized>(&self, view: &V) -> Result<(), StrategyError> {
        self.players.iter().try_for_each(|s| s.validate_for(view))
    }

    pub fn into_parts(self) -> (BehaviorStrategy, BehaviorStrategy) {
        let [a, b] = self.players;
        (a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(p: &[f64]) -> BehaviorStrategy {
        BehaviorStrategy::from_rows(Player::One, vec![p.to_vec()]).unwrap()
    }

    #[test]
    fn support_of_uniform_three() {
        assert_eq!(support_size(&row(&[1.0 / 3.0; 3]), 0, 0.0), Ok(3));
    }

    #[test]
    fn support_of_pure() {
        assert_eq!(support_size(&row(&[0.0, 1.0, 0.0]), 0, 0.0), Ok(1));
    }

    #[test]
    fn support_ignores_zero_entries() {
        assert_eq!(support_size(&row(&[0.7, 0.3, 0.0]), 0, 0.0), Ok(2));
        assert_eq!(support_size(&row(&[0.7, 0.3, 0.0]), 0, 0.5), Ok(1));
    }

    #[test]
    fn support_of_unknown_infoset() {
        assert_eq!(
            support_size(&row(&[1.0]), 3, 0.0),
            Err(StrategyError::UnknownInfoset(3))
        );
    }

    #[test]
    fn rows_must_be_distributions() {
        let err = BehaviorStrategy::from_rows(Player::Two, vec![vec![0.5, 0.4]]).unwrap_err();
        assert!(matches!(err, StrategyError::NotDistribution { infoset: 0, .. }));
        let err = BehaviorStrategy::from_rows(Player::Two, vec![vec![1.5, -0.5]]).unwrap_err();
        assert!(matches!(err, StrategyError::NotDistribution { .. }));
    }

    #[test]
    fn joint_checks_owners() {
        let a = row(&[1.0]);
        assert!(JointStrategy::new(a.clone(), a).is_err());
    }
}
