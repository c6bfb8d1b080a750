//! Reach probabilities and expected values under a joint strategy.

use crate::game::{GameTree, GameView, NodeId, NodeKind, Player};
use crate::strategy::{BehaviorStrategy, JointStrategy};

/// Each participant's contribution to the probability of reaching a history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reach {
    pub p1: f64,
    pub p2: f64,
    pub chance: f64,
}

impl Reach {
    pub const ONE: Reach = Reach {
        p1: 1.0,
        p2: 1.0,
        chance: 1.0,
    };

    pub fn total(&self) -> f64 {
        self.p1 * self.p2 * self.chance
    }

    pub fn player(&self, player: Player) -> f64 {
        match player {
            Player::One => self.p1,
            Player::Two => self.p2,
        }
    }

    /// Reach of everyone except `player` (opponent and chance).
    pub fn counterfactual(&self, player: Player) -> f64 {
        self.player(player.opponent()) * self.chance
    }
}

/// Reach contributions of both players and chance for history `node` of the full game.
pub fn reach_contributions(game: &GameTree, joint: &JointStrategy, node: NodeId) -> Reach {
    let mut reach = Reach::ONE;
    let mut cur = node;
    while let Some(parent) = game.node(cur).parent() {
        let a = game.node(cur).parent_action();
        match game.kind(parent) {
            NodeKind::Chance { probs } => reach.chance *= probs[a],
            NodeKind::Decision { player, infoset } => {
                let p = joint.get(*player).probs(*infoset)[a];
                match player {
                    Player::One => reach.p1 *= p,
                    Player::Two => reach.p2 *= p,
                }
            }
            NodeKind::Terminal { .. } => unreachable!("terminal nodes have no children"),
        }
        cur = parent;
    }
    reach
}

/// Reach contributions for every node of the view (top-down), indexed by node id. Nodes outside
/// the view keep zero reach.
pub fn reach_all<V: GameView + ?Sized>(view: &V, joint: &JointStrategy) -> Vec<Reach> {
    let tree = view.tree();
    let zero = Reach {
        p1: 0.0,
        p2: 0.0,
        chance: 0.0,
    };
    let mut reach = vec![zero; tree.num_nodes()];
    reach[tree.root()] = Reach::ONE;
    for &n in view.preorder() {
        let r = reach[n];
        match tree.kind(n) {
            NodeKind::Terminal { .. } => {}
            NodeKind::Chance { probs } => {
                for (&c, &p) in tree.children(n).iter().zip(probs.iter()) {
                    reach[c] = Reach { chance: r.chance * p, ..r };
                }
            }
            &NodeKind::Decision { player, infoset } => {
                let probs = joint.get(player).probs(infoset);
                for (a, &p) in probs.iter().enumerate() {
                    let c = view.decision_child(n, player, infoset, a);
                    reach[c] = match player {
                        Player::One => Reach { p1: r.p1 * p, ..r },
                        Player::Two => Reach { p2: r.p2 * p, ..r },
                    };
                }
            }
        }
    }
    reach
}

/// Conditional value of every node's subtree for player one (indexed by node id; zero outside
/// the view). Unlike [`history_values`], this is defined for zero-reach histories too.
pub fn subtree_values<V: GameView + ?Sized>(view: &V, joint: &JointStrategy) -> Vec<f64> {
    let tree = view.tree();
    let mut values = vec![0.0; tree.num_nodes()];
    for &n in view.preorder().iter().rev() {
        values[n] = match tree.kind(n) {
            NodeKind::Terminal { payoff } => *payoff,
            NodeKind::Chance { probs } => tree
                .children(n)
                .iter()
                .zip(probs.iter())
                .map(|(&c, &p)| p * values[c])
                .sum(),
            &NodeKind::Decision { player, infoset } => joint
                .get(player)
                .probs(infoset)
                .iter()
                .enumerate()
                .map(|(a, &p)| p * values[view.decision_child(n, player, infoset, a)])
                .sum(),
        };
    }
    values
}

/// Expected value of each history for player one: the reach-weighted average payoff of the
/// terminals below it, and exactly zero where the history has zero reach.
pub fn history_values<V: GameView + ?Sized>(view: &V, joint: &JointStrategy) -> Vec<f64> {
    let mut values = subtree_values(view, joint);
    let reach = reach_all(view, joint);
    for (v, r) in values.iter_mut().zip(&reach) {
        if r.total() == 0.0 {
            *v = 0.0;
        }
    }
    values
}

/// Value of the joint strategy for player one; player two receives the negation.
pub fn expected_value<V: GameView + ?Sized>(view: &V, joint: &JointStrategy) -> f64 {
    subtree_values(view, joint)[view.tree().root()]
}

/// The player's own reach probability of each of their infosets (identical for all histories of
/// an infoset under perfect recall).
pub fn sequence_reach<V: GameView + ?Sized>(view: &V, strategy: &BehaviorStrategy) -> Vec<f64> {
    let player = strategy.player();
    let tree = view.tree();
    let mut reach = vec![0.0; view.infoset_count(player)];
    for s in 0..reach.len() {
        reach[s] = match tree.infoset(player, s).parent_sequence() {
            None => 1.0,
            Some((ps, full_action)) => match local_action(view, player, ps, full_action) {
                Some(a) => reach[ps] * strategy.probs(ps)[a],
                None => 0.0,
            },
        };
    }
    reach
}

/// Local index of full-game action `full` at `infoset`, if the view admits it.
pub fn local_action<V: GameView + ?Sized>(
    view: &V,
    player: Player,
    infoset: usize,
    full: usize,
) -> Option<usize> {
    (0..view.action_count(player, infoset)).find(|&a| view.full_action(player, infoset, a) == full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn root_reach_is_one() {
        let game = zoo::kuhn(1).unwrap();
        let joint = JointStrategy::uniform(&game);
        assert_eq!(reach_contributions(&game, &joint, game.root()), Reach::ONE);
    }

    #[test]
    fn reach_all_matches_walk_up() {
        let game = zoo::kuhn(2).unwrap();
        let joint = JointStrategy::uniform(&game);
        let all = reach_all(&game, &joint);
        for n in 0..game.num_nodes() {
            let r = reach_contributions(&game, &joint, n);
            assert!((r.total() - all[n].total()).abs() < 1e-15);
        }
    }

    #[test]
    fn history_values_zero_where_unreached() {
        let game = zoo::paper_example();
        let l = BehaviorStrategy::pure(&game, Player::One, &[0]).unwrap();
        let joint = JointStrategy::new(l, BehaviorStrategy::uniform(&game, Player::Two)).unwrap();
        let values = history_values(&game, &joint);
        // root, L-node, (L,X), (L,Y), R-node, (R,X), (R,Y)
        assert_eq!(values[0], 1.5);
        assert_eq!(values[1], 1.5);
        assert_eq!(values[4], 0.0);
        assert_eq!(subtree_values(&game, &joint)[4], 1.0);
    }
}
