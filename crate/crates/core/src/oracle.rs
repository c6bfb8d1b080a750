//! Exact best responses and exploitability.
//!
//! The best response works on any [`GameView`], so the same code measures full-game
//! exploitability and local exploitability inside a restricted game.

use crate::error::{OracleError, StrategyError};
use crate::game::{GameView, NodeKind, Player};
use crate::strategy::{BehaviorStrategy, JointStrategy};
use crate::value::expected_value;

/// Default enumeration cap for [`brute_force_best_response`].
pub const BRUTE_FORCE_CAP: u128 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseResult {
    pub player: Player,
    /// Chosen local action per infoset; defined everywhere, including unreachable infosets.
    pub actions: Vec<usize>,
    pub strategy: BehaviorStrategy,
    /// Value of the response against the opponent strategy, for `player`.
    pub value: f64,
    /// Nodes traversed while computing the response.
    pub visited: u64,
}

fn check_opponent<V: GameView + ?Sized>(
    view: &V,
    opponent: &BehaviorStrategy,
    player: Player,
) -> Result<(), StrategyError> {
    if opponent.player() != player.opponent() {
        return Err(StrategyError::WrongPlayer {
            expected: player.opponent(),
            got: opponent.player(),
        });
    }
    opponent.validate_for(view)
}

/// Pure best response of `player` to `opponent`.
///
/// Counterfactual action values are backed up bottom-up, with the player's infosets resolved in
/// decreasing order of their own decision depth so that every history of an infoset is complete
/// before its action is chosen. Ties go to the lowest action index; infosets that the opponent
/// never reaches still get an action by the same rule, so the result is total.
pub fn best_response<V: GameView + ?Sized>(
    view: &V,
    opponent: &BehaviorStrategy,
    player: Player,
) -> Result<BestResponseResult, OracleError> {
    check_opponent(view, opponent, player)?;
    let tree = view.tree();
    let preorder = view.preorder();
    let sign = player.sign();

    const OUTSIDE: u32 = u32::MAX;
    let mut reach = vec![0.0; tree.num_nodes()];
    let mut depth = vec![OUTSIDE; tree.num_nodes()];
    reach[tree.root()] = 1.0;
    depth[tree.root()] = 0;
    let mut max_depth = 0;
    for &n in preorder {
        let (r, d) = (reach[n], depth[n]);
        match tree.kind(n) {
            NodeKind::Terminal { .. } => {}
            NodeKind::Chance { probs } => {
                for (&c, &p) in tree.children(n).iter().zip(probs.iter()) {
                    reach[c] = r * p;
                    depth[c] = d;
                }
            }
            &NodeKind::Decision { player: actor, infoset } => {
                for a in 0..view.action_count(actor, infoset) {
                    let c = view.decision_child(n, actor, infoset, a);
                    if actor == player {
                        reach[c] = r;
                        depth[c] = d + 1;
                        max_depth = max_depth.max(d + 1);
                    } else {
                        reach[c] = r * opponent.probs(infoset)[a];
                        depth[c] = d;
                    }
                }
            }
        }
    }

    // deepest own-depth first, reverse preorder within a depth
    let mut starts = vec![0usize; max_depth as usize + 2];
    for &n in preorder {
        starts[(max_depth - depth[n]) as usize + 1] += 1;
    }
    for i in 1..starts.len() {
        starts[i] += starts[i - 1];
    }
    let mut order = vec![0; preorder.len()];
    for &n in preorder.iter().rev() {
        let bucket = (max_depth - depth[n]) as usize;
        order[starts[bucket]] = n;
        starts[bucket] += 1;
    }

    const UNDECIDED: usize = usize::MAX;
    let mut choice = vec![UNDECIDED; view.infoset_count(player)];
    let mut values = vec![0.0; tree.num_nodes()];
    let mut totals = Vec::new();
    for &n in &order {
        values[n] = match tree.kind(n) {
            NodeKind::Terminal { payoff } => reach[n] * sign * payoff,
            NodeKind::Chance { .. } => tree.children(n).iter().map(|&c| values[c]).sum(),
            &NodeKind::Decision { player: actor, infoset } if actor != player => (0..view
                .action_count(actor, infoset))
                .map(|a| values[view.decision_child(n, actor, infoset, a)])
                .sum(),
            &NodeKind::Decision { infoset, .. } => {
                if choice[infoset] == UNDECIDED {
                    let width = view.action_count(player, infoset);
                    totals.clear();
                    totals.resize(width, 0.0);
                    for &h in tree.infoset(player, infoset).nodes() {
                        if depth[h] == OUTSIDE {
                            continue;
                        }
                        for (a, total) in totals.iter_mut().enumerate() {
                            *total += values[view.decision_child(h, player, infoset, a)];
                        }
                    }
                    choice[infoset] = argmax(&totals);
                }
                values[view.decision_child(n, player, infoset, choice[infoset])]
            }
        };
    }
    for c in choice.iter_mut().filter(|c| **c == UNDECIDED) {
        *c = 0;
    }

    let strategy = BehaviorStrategy::pure(view, player, &choice)?;
    Ok(BestResponseResult {
        player,
        actions: choice,
        strategy,
        value: values[tree.root()],
        visited: preorder.len() as u64,
    })
}

/// First index of the maximum.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Test oracle: enumerates every pure strategy of `player` and evaluates each one.
pub fn brute_force_best_response<V: GameView + ?Sized>(
    view: &V,
    opponent: &BehaviorStrategy,
    player: Player,
    cap: u128,
) -> Result<BestResponseResult, OracleError> {
    check_opponent(view, opponent, player)?;
    let widths: Vec<usize> = (0..view.infoset_count(player))
        .map(|s| view.action_count(player, s))
        .collect();
    let count = widths
        .iter()
        .try_fold(1u128, |acc, &w| acc.checked_mul(w as u128))
        .unwrap_or(u128::MAX);
    if count > cap {
        return Err(OracleError::CapExceeded { count, cap });
    }

    let uniform = JointStrategy::uniform(view);
    let base = uniform.with(player.opponent(), opponent.clone());
    let mut actions = vec![0usize; widths.len()];
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut visited = 0u64;
    loop {
        let candidate = BehaviorStrategy::pure(view, player, &actions)?;
        let value = player.sign() * expected_value(view, &base.with(player, candidate));
        visited += view.num_nodes() as u64;
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, actions.clone()));
        }
        // mixed-radix increment, last infoset fastest
        let mut i = widths.len();
        loop {
            if i == 0 {
                let (value, actions) = best.expect("at least one pure strategy");
                let strategy = BehaviorStrategy::pure(view, player, &actions)?;
                return Ok(BestResponseResult {
                    player,
                    actions,
                    strategy,
                    value,
                    visited,
                });
            }
            i -= 1;
            actions[i] += 1;
            if actions[i] < widths[i] {
                break;
            }
            actions[i] = 0;
        }
    }
}

/// Both best responses to a joint strategy and the resulting exploitability.
#[derive(Debug, Clone)]
pub struct ExploitabilityReport {
    pub value: f64,
    pub best_responses: [BestResponseResult; 2],
    pub visited: u64,
}

pub fn exploitability_report<V: GameView + ?Sized>(
    view: &V,
    joint: &JointStrategy,
) -> Result<ExploitabilityReport, OracleError> {
    let br1 = best_response(view, joint.get(Player::Two), Player::One)?;
    let br2 = best_response(view, joint.get(Player::One), Player::Two)?;
    // v_1(pi) + v_2(pi) = 0, so the two gaps sum to the two best-response values
    let value = br1.value + br2.value;
    let visited = br1.visited + br2.visited;
    Ok(ExploitabilityReport {
        value,
        best_responses: [br1, br2],
        visited,
    })
}

/// `e(pi) = sum_i [ v_i(BR_i(pi_-i), pi_-i) - v_i(pi) ]`.
pub fn exploitability<V: GameView + ?Sized>(view: &V, joint: &JointStrategy) -> Result<f64, OracleError> {
    exploitability_report(view, joint).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{matching_pennies, paper_example};

    fn uniform(player: Player) -> BehaviorStrategy {
        BehaviorStrategy::uniform(&paper_example(), player)
    }

    #[test]
    fn circle_best_response_to_uniform() {
        let game = paper_example();
        let br = best_response(&game, &uniform(Player::Two), Player::One).unwrap();
        assert_eq!(br.actions, vec![0]);
        assert_eq!(br.value, 1.5);
        assert_eq!(br.visited, 7);
    }

    #[test]
    fn square_best_response_to_uniform() {
        let game = paper_example();
        let br = best_response(&game, &uniform(Player::One), Player::Two).unwrap();
        assert_eq!(br.actions, vec![1]);
        assert_eq!(br.value, 0.0);
    }

    #[test]
    fn square_best_response_to_left() {
        let game = paper_example();
        let left = BehaviorStrategy::pure(&game, Player::One, &[0]).unwrap();
        let br = best_response(&game, &left, Player::Two).unwrap();
        assert_eq!(br.actions, vec![1]);
        assert_eq!(br.value, -1.0);
    }

    #[test]
    fn equilibrium_has_zero_exploitability() {
        let game = paper_example();
        let joint = JointStrategy::new(
            BehaviorStrategy::pure(&game, Player::One, &[0]).unwrap(),
            BehaviorStrategy::pure(&game, Player::Two, &[1]).unwrap(),
        )
        .unwrap();
        assert!(exploitability(&game, &joint).unwrap().abs() < 1e-12);
    }

    #[test]
    fn uniform_paper_example_exploitability() {
        let game = paper_example();
        let e = exploitability(&game, &JointStrategy::uniform(&game)).unwrap();
        assert!((e - 1.5).abs() < 1e-12);
    }

    #[test]
    fn matching_pennies_uniform_is_equilibrium() {
        let game = matching_pennies();
        let e = exploitability(&game, &JointStrategy::uniform(&game)).unwrap();
        assert!(e.abs() < 1e-12);
    }

    #[test]
    fn brute_force_agrees_on_paper_example() {
        let game = paper_example();
        let br = brute_force_best_response(&game, &uniform(Player::Two), Player::One, BRUTE_FORCE_CAP).unwrap();
        assert_eq!(br.value, 1.5);
        assert_eq!(br.actions, vec![0]);
    }

    #[test]
    fn brute_force_single_infoset_is_argmax() {
        let game = matching_pennies();
        let tails = BehaviorStrategy::pure(&game, Player::One, &[1]).unwrap();
        let br = brute_force_best_response(&game, &tails, Player::Two, 10).unwrap();
        // player two wins by mismatching
        assert_eq!(br.actions, vec![0]);
        assert_eq!(br.value, 1.0);
    }

    #[test]
    fn brute_force_respects_cap() {
        let game = crate::zoo::kuhn(1).unwrap();
        let opp = BehaviorStrategy::uniform(&game, Player::Two);
        let err = brute_force_best_response(&game, &opp, Player::One, 10).unwrap_err();
        assert_eq!(err, OracleError::CapExceeded { count: 64, cap: 10 });
    }

    #[test]
    fn wrong_opponent_is_rejected() {
        let game = paper_example();
        let err = best_response(&game, &uniform(Player::One), Player::One).unwrap_err();
        assert!(matches!(err, OracleError::Strategy(StrategyError::WrongPlayer { .. })));
    }
}
