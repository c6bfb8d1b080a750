//! CFR-family regret minimization over a [`GameView`].

use serde::{Deserialize, Serialize};

use crate::error::{RegretError, StrategyError};
use crate::game::{GameView, NodeKind, Player};
use crate::strategy::{BehaviorStrategy, JointStrategy};
use crate::value::local_action;

/// Regret-update rule and the matching within-window averaging weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RegretVariant {
    /// Plain regret matching, uniform averaging weights.
    Vanilla,
    /// Regret matching+ (regrets clamped at zero), linearly increasing averaging weights.
    #[default]
    Plus,
}

impl RegretVariant {
    /// Unnormalized weight of the `t`-th iteration of a window (1-based). Normalizing by the
    /// window total gives [`window_weight`].
    pub fn raw_weight(self, t: u64) -> f64 {
        match self {
            RegretVariant::Vanilla => 1.0,
            RegretVariant::Plus => t as f64,
        }
    }
}

/// How the two players' updates are sequenced inside one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum UpdateOrder {
    /// Player one updates first; player two then responds to the updated strategy.
    #[default]
    Alternating,
    /// Both players update against the strategies at the start of the iteration.
    Simultaneous,
}

/// Positive-part normalization; uniform when no entry is positive.
pub fn regret_matching(cum_regrets: &[f64]) -> Result<Vec<f64>, RegretError> {
    if cum_regrets.is_empty() {
        return Err(RegretError::EmptyVector);
    }
    let mut out = vec![0.0; cum_regrets.len()];
    regret_matching_into(cum_regrets, &mut out);
    Ok(out)
}

fn regret_matching_into(cum_regrets: &[f64], out: &mut [f64]) {
    let positive: f64 = cum_regrets.iter().map(|r| r.max(0.0)).sum();
    if positive > 0.0 {
        for (o, r) in out.iter_mut().zip(cum_regrets) {
            *o = r.max(0.0) / positive;
        }
    } else {
        out.fill(1.0 / out.len() as f64);
    }
}

/// Normalized weight `w_t` of within-window iteration `t` (1-based) in a window of `window_len`.
pub fn window_weight(variant: RegretVariant, t: u64, window_len: u64) -> Result<f64, RegretError> {
    if t == 0 || t > window_len {
        return Err(RegretError::OutOfWindow { t, len: window_len });
    }
    let len = window_len as f64;
    Ok(match variant {
        RegretVariant::Vanilla => 1.0 / len,
        RegretVariant::Plus => 2.0 * t as f64 / (len * (len + 1.0)),
    })
}

/// Outcome of one CFR iteration.
#[derive(Debug, Clone)]
pub struct IterationReport {
    /// Joint strategy at the start of the iteration (the strategy that was played).
    pub played: JointStrategy,
    /// Nodes traversed (one traversal per player).
    pub visited: u64,
}

#[derive(Debug, Clone, Default)]
struct Scratch {
    reach_cf: Vec<f64>,
    values: Vec<f64>,
}

/// Where an infoset's own sequence comes from, in view-local terms.
#[derive(Debug, Clone, Copy)]
enum Parent {
    Root,
    Sequence(usize, usize),
    /// The parent action is not part of the view.
    Excluded,
}

#[derive(Debug, Clone)]
struct PlayerTables {
    offsets: Vec<usize>,
    parents: Vec<Parent>,
    regrets: Vec<f64>,
    instant: Vec<f64>,
    average: Vec<f64>,
    own_reach: Vec<f64>,
}

impl PlayerTables {
    fn new<V: GameView + ?Sized>(view: &V, player: Player) -> Self {
        let n = view.infoset_count(player);
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for s in 0..n {
            offsets.push(offsets[s] + view.action_count(player, s));
        }
        let width = offsets[n];
        let parents = (0..n)
            .map(|s| match view.tree().infoset(player, s).parent_sequence() {
                None => Parent::Root,
                Some((ps, full)) => match local_action(view, player, ps, full) {
                    Some(a) => Parent::Sequence(ps, a),
                    None => Parent::Excluded,
                },
            })
            .collect();
        Self {
            offsets,
            parents,
            regrets: vec![0.0; width],
            instant: vec![0.0; width],
            average: vec![0.0; width],
            own_reach: vec![0.0; n],
        }
    }

    fn row(&self, s: usize) -> std::ops::Range<usize> {
        self.offsets[s]..self.offsets[s + 1]
    }

    /// Own reach of every infoset under `strategy`; parents precede children in infoset order.
    fn fill_own_reach(&mut self, strategy: &BehaviorStrategy) {
        for s in 0..self.parents.len() {
            self.own_reach[s] = match self.parents[s] {
                Parent::Root => 1.0,
                Parent::Sequence(ps, a) => self.own_reach[ps] * strategy.probs(ps)[a],
                Parent::Excluded => 0.0,
            };
        }
    }
}

/// Cumulative regrets, current strategies, and the current window's average accumulators.
#[derive(Debug, Clone)]
pub struct RegretTables {
    variant: RegretVariant,
    order: UpdateOrder,
    tables: [PlayerTables; 2],
    current: JointStrategy,
    iteration: u64,
    weight_total: f64,
    scratch: Scratch,
}

impl RegretTables {
    pub fn new<V: GameView + ?Sized>(view: &V, variant: RegretVariant, order: UpdateOrder) -> Self {
        Self {
            variant,
            order,
            tables: Player::BOTH.map(|p| PlayerTables::new(view, p)),
            current: JointStrategy::uniform(view),
            iteration: 0,
            weight_total: 0.0,
            scratch: Scratch::default(),
        }
    }

    /// Starts a new window on `view`: zero regrets and accumulators, uniform current strategy.
    pub fn reset_for_new_window<V: GameView + ?Sized>(&mut self, view: &V) {
        *self = Self {
            scratch: std::mem::take(&mut self.scratch),
            ..Self::new(view, self.variant, self.order)
        };
    }

    pub fn variant(&self) -> RegretVariant {
        self.variant
    }

    pub fn order(&self) -> UpdateOrder {
        self.order
    }

    /// Iterations accumulated in the current window.
    pub fn iterations(&self) -> u64 {
        self.iteration
    }

    pub fn current(&self) -> &JointStrategy {
        &self.current
    }

    /// Cumulative regrets of `player`, one row per infoset.
    pub fn cumulative_regrets(&self, player: Player) -> Vec<Vec<f64>> {
        let t = &self.tables[player.index()];
        (0..t.offsets.len() - 1).map(|s| t.regrets[t.row(s)].to_vec()).collect()
    }

    /// Instantaneous regrets of `player` from the most recent iteration.
    pub fn instantaneous_regrets(&self, player: Player) -> Vec<Vec<f64>> {
        let t = &self.tables[player.index()];
        (0..t.offsets.len() - 1).map(|s| t.instant[t.row(s)].to_vec()).collect()
    }

    /// Runs one CFR iteration on `view`, which must be the view the tables were sized for.
    pub fn cfr_iteration<V: GameView + ?Sized>(&mut self, view: &V) -> Result<IterationReport, StrategyError> {
        self.current.validate_for(view)?;
        let played = self.current.clone();
        let t = self.iteration + 1;
        let weight = self.variant.raw_weight(t);
        let mut visited = 0;
        for player in Player::BOTH {
            let opponent = match self.order {
                UpdateOrder::Alternating => self.current.get(player.opponent()),
                UpdateOrder::Simultaneous => played.get(player.opponent()),
            };
            let own = played.get(player);
            let tables = &mut self.tables[player.index()];
            visited += traverse(view, player, own, opponent, tables, &mut self.scratch);
            tables.fill_own_reach(own);

            let strategy = self.current.get_mut(player);
            for s in 0..tables.offsets.len() - 1 {
                let row = tables.row(s);
                let x = tables.own_reach[s];
                for i in row.clone() {
                    tables.average[i] += weight * x * own.flat()[i];
                    let r = tables.regrets[i] + tables.instant[i];
                    tables.regrets[i] = match self.variant {
                        RegretVariant::Vanilla => r,
                        RegretVariant::Plus => r.max(0.0),
                    };
                }
                regret_matching_into(&tables.regrets[row], strategy.probs_mut(s));
            }
        }
        self.iteration = t;
        self.weight_total += weight;
        Ok(IterationReport { played, visited })
    }

    /// Weighted average of the played strategies over the current window.
    ///
    /// Each snapshot enters with its own reach, so the result is the behavioral form of the
    /// weighted average realization plan; infosets never reached get the uniform strategy.
    pub fn window_average_strategy(&self) -> Result<JointStrategy, RegretError> {
        if self.iteration == 0 {
            return Err(RegretError::EmptyWindow);
        }
        let mut joint = self.current.clone();
        for player in Player::BOTH {
            let t = &self.tables[player.index()];
            let strategy = joint.get_mut(player);
            for s in 0..t.offsets.len() - 1 {
                normalize_into(&t.average[t.row(s)], strategy.probs_mut(s));
            }
        }
        Ok(joint)
    }

    /// The window's average realization weights of `player`, normalized by the window's weight
    /// total and laid out on the full game's action lists (`rows[s][full_action]`).
    pub fn average_realization<V: GameView + ?Sized>(
        &self,
        view: &V,
        player: Player,
    ) -> Result<Vec<Vec<f64>>, RegretError> {
        if self.iteration == 0 {
            return Err(RegretError::EmptyWindow);
        }
        let tree = view.tree();
        let t = &self.tables[player.index()];
        Ok((0..t.offsets.len() - 1)
            .map(|s| {
                let mut row = vec![0.0; tree.infoset(player, s).num_actions()];
                for (a, &m) in t.average[t.row(s)].iter().enumerate() {
                    row[view.full_action(player, s, a)] = m / self.weight_total;
                }
                row
            })
            .collect())
    }
}

/// Writes `weights / sum(weights)` into `out`, or uniform if the weights have no mass.
pub(crate) fn normalize_into(weights: &[f64], out: &mut [f64]) {
    let sum: f64 = weights.iter().sum();
    if sum > 0.0 {
        for (o, w) in out.iter_mut().zip(weights) {
            *o = w / sum;
        }
    } else {
        out.fill(1.0 / out.len() as f64);
    }
}

/// One traversal for `player`: fills the instantaneous regrets and returns the number of nodes
/// visited.
fn traverse<V: GameView + ?Sized>(
    view: &V,
    player: Player,
    own: &BehaviorStrategy,
    opponent: &BehaviorStrategy,
    tables: &mut PlayerTables,
    scratch: &mut Scratch,
) -> u64 {
    let tree = view.tree();
    let preorder = view.preorder();
    let n = tree.num_nodes();
    for buf in [&mut scratch.reach_cf, &mut scratch.values] {
        buf.clear();
        buf.resize(n, 0.0);
    }
    tables.instant.fill(0.0);

    let Scratch { reach_cf, values } = scratch;
    reach_cf[tree.root()] = 1.0;
    for &h in preorder {
        let cf = reach_cf[h];
        match tree.kind(h) {
            NodeKind::Terminal { .. } => {}
            NodeKind::Chance { probs } => {
                for (&c, &p) in tree.children(h).iter().zip(probs.iter()) {
                    reach_cf[c] = cf * p;
                }
            }
            &NodeKind::Decision { player: actor, infoset } => {
                for a in 0..view.action_count(actor, infoset) {
                    let c = view.decision_child(h, actor, infoset, a);
                    reach_cf[c] = if actor == player {
                        cf
                    } else {
                        cf * opponent.probs(infoset)[a]
                    };
                }
            }
        }
    }

    let sign = player.sign();
    for &h in preorder.iter().rev() {
        values[h] = match tree.kind(h) {
            NodeKind::Terminal { payoff } => sign * payoff,
            NodeKind::Chance { probs } => tree
                .children(h)
                .iter()
                .zip(probs.iter())
                .map(|(&c, &p)| p * values[c])
                .sum(),
            &NodeKind::Decision { player: actor, infoset } if actor != player => opponent
                .probs(infoset)
                .iter()
                .enumerate()
                .map(|(a, &p)| p * values[view.decision_child(h, actor, infoset, a)])
                .sum(),
            &NodeKind::Decision { infoset, .. } => {
                let probs = own.probs(infoset);
                let v: f64 = probs
                    .iter()
                    .enumerate()
                    .map(|(a, &p)| p * values[view.decision_child(h, player, infoset, a)])
                    .sum();
                let base = tables.offsets[infoset];
                let cf = reach_cf[h];
                for a in 0..probs.len() {
                    tables.instant[base + a] += cf * (values[view.decision_child(h, player, infoset, a)] - v);
                }
                v
            }
        };
    }
    preorder.len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::paper_example;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn regret_matching_examples() {
        assert!(close(&regret_matching(&[0.0, 0.0, 0.0]).unwrap(), &[1.0 / 3.0; 3]));
        assert!(close(&regret_matching(&[3.0, 1.0, -2.0]).unwrap(), &[0.75, 0.25, 0.0]));
        assert!(close(&regret_matching(&[-1.0, -2.0]).unwrap(), &[0.5, 0.5]));
        assert_eq!(regret_matching(&[]), Err(RegretError::EmptyVector));
    }

    #[test]
    fn window_weight_examples() {
        let plus: Vec<f64> = (1..=3).map(|t| window_weight(RegretVariant::Plus, t, 3).unwrap()).collect();
        assert!(close(&plus, &[1.0 / 6.0, 1.0 / 3.0, 0.5]));
        for t in 1..=4 {
            assert_eq!(window_weight(RegretVariant::Vanilla, t, 4).unwrap(), 0.25);
        }
        for len in 1..40 {
            for variant in [RegretVariant::Vanilla, RegretVariant::Plus] {
                let sum: f64 = (1..=len).map(|t| window_weight(variant, t, len).unwrap()).sum();
                assert!((sum - 1.0).abs() < 1e-9);
            }
        }
        assert!(window_weight(RegretVariant::Plus, 0, 3).is_err());
        assert!(window_weight(RegretVariant::Plus, 4, 3).is_err());
    }

    #[test]
    fn first_iteration_regrets_on_paper_example() {
        let game = paper_example();
        let mut tables = RegretTables::new(&game, RegretVariant::Vanilla, UpdateOrder::Simultaneous);
        let report = tables.cfr_iteration(&game).unwrap();
        assert_eq!(report.visited, 14);
        assert!(close(&tables.instantaneous_regrets(Player::One)[0], &[0.25, -0.25]));
        assert!(close(&tables.instantaneous_regrets(Player::Two)[0], &[-1.25, 1.25]));
        assert!(close(tables.current().get(Player::One).probs(0), &[1.0, 0.0]));
    }

    #[test]
    fn alternating_order_sees_the_updated_first_player() {
        let game = paper_example();
        let mut tables = RegretTables::new(&game, RegretVariant::Vanilla, UpdateOrder::Alternating);
        tables.cfr_iteration(&game).unwrap();
        assert!(close(&tables.instantaneous_regrets(Player::One)[0], &[0.25, -0.25]));
        // player two now faces pure L: v(X) = -2, v(Y) = -1, v = -1.5
        assert!(close(&tables.instantaneous_regrets(Player::Two)[0], &[-0.5, 0.5]));
    }

    #[test]
    fn window_average_of_two_snapshots() {
        // root infoset of player one: played (1,0) then (0,1)
        let game = paper_example();
        for (variant, expected) in [(RegretVariant::Vanilla, 0.5), (RegretVariant::Plus, 2.0 / 3.0)] {
            let mut tables = RegretTables::new(&game, variant, UpdateOrder::Simultaneous);
            tables.current = JointStrategy::new(
                BehaviorStrategy::pure(&game, Player::One, &[0]).unwrap(),
                BehaviorStrategy::uniform(&game, Player::Two),
            )
            .unwrap();
            tables.cfr_iteration(&game).unwrap();
            *tables.current.get_mut(Player::One) = BehaviorStrategy::pure(&game, Player::One, &[1]).unwrap();
            tables.cfr_iteration(&game).unwrap();
            let avg = tables.window_average_strategy().unwrap();
            assert!(close(avg.get(Player::One).probs(0), &[1.0 - expected, expected]));
        }
    }

    #[test]
    fn single_snapshot_average_is_the_snapshot() {
        let game = crate::zoo::kuhn(1).unwrap();
        let mut tables = RegretTables::new(&game, RegretVariant::Plus, UpdateOrder::Alternating);
        let report = tables.cfr_iteration(&game).unwrap();
        assert_eq!(tables.window_average_strategy().unwrap(), report.played);
    }

    #[test]
    fn reset_clears_everything() {
        let game = crate::zoo::kuhn(1).unwrap();
        let mut tables = RegretTables::new(&game, RegretVariant::Plus, UpdateOrder::Alternating);
        for _ in 0..5 {
            tables.cfr_iteration(&game).unwrap();
        }
        tables.reset_for_new_window(&game);
        assert_eq!(tables.current(), &JointStrategy::uniform(&game));
        assert_eq!(tables.window_average_strategy(), Err(RegretError::EmptyWindow));
        for p in Player::BOTH {
            assert!(tables.cumulative_regrets(p).iter().flatten().all(|&r| r == 0.0));
        }
    }

    #[test]
    fn plus_regrets_stay_nonnegative() {
        let game = crate::zoo::kuhn(2).unwrap();
        let mut tables = RegretTables::new(&game, RegretVariant::Plus, UpdateOrder::Alternating);
        for _ in 0..50 {
            tables.cfr_iteration(&game).unwrap();
            for p in Player::BOTH {
                assert!(tables.cumulative_regrets(p).iter().flatten().all(|&r| r >= 0.0));
            }
        }
    }
}
