//! Populations of admitted actions and the restricted games they induce.

use serde::{Deserialize, Serialize};

use crate::error::{OracleError, RestrictionError, StrategyError};
use crate::game::{GameTree, GameView, NodeId, NodeKind, Player};
use crate::oracle::{exploitability_report, BestResponseResult};
use crate::strategy::{BehaviorStrategy, JointStrategy};

/// Admitted actions per infoset for both players, in the order they were admitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Population {
    admitted: [Vec<Vec<usize>>; 2],
    generation: u64,
}

impl Population {
    /// Admits the best responses of both players to the uniform joint strategy.
    pub fn init(game: &GameTree) -> Result<Self, OracleError> {
        let report = exploitability_report(game, &JointStrategy::uniform(game))?;
        let [br1, br2] = &report.best_responses;
        Ok(Self::from_best_responses(br1, br2))
    }

    /// Population holding exactly the two given (full-game) best responses.
    pub fn from_best_responses(br1: &BestResponseResult, br2: &BestResponseResult) -> Self {
        let singletons = |br: &BestResponseResult| br.actions.iter().map(|&a| vec![a]).collect();
        Self {
            admitted: [singletons(br1), singletons(br2)],
            generation: 0,
        }
    }

    /// Every action admitted everywhere.
    pub fn full(game: &GameTree) -> Self {
        let all = |p: Player| {
            game.infosets(p)
                .iter()
                .map(|s| (0..s.num_actions()).collect())
                .collect()
        };
        Self {
            admitted: [all(Player::One), all(Player::Two)],
            generation: 0,
        }
    }

    pub fn admitted(&self, player: Player, infoset: usize) -> &[usize] {
        &self.admitted[player.index()][infoset]
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn advance_generation(&mut self) {
        self.generation += 1;
    }

    /// Total number of admitted actions over both players.
    pub fn size(&self) -> usize {
        self.admitted.iter().flatten().map(Vec::len).sum()
    }

    /// Adds the response's action at every infoset; true iff some infoset gained an action.
    pub fn merge_best_response(&mut self, br: &BestResponseResult) -> Result<bool, RestrictionError> {
        let sets = &mut self.admitted[br.player.index()];
        if sets.len() != br.actions.len() {
            return Err(RestrictionError::Mismatch(format!(
                "best response covers {} infosets, population has {}",
                br.actions.len(),
                sets.len()
            )));
        }
        let mut changed = false;
        for (set, &a) in sets.iter_mut().zip(&br.actions) {
            if !set.contains(&a) {
                set.push(a);
                changed = true;
            }
        }
        Ok(changed)
    }

    /// True if every admitted set of `other` is contained in the matching set of `self`.
    pub fn contains(&self, other: &Population) -> bool {
        self.admitted.iter().zip(&other.admitted).all(|(mine, theirs)| {
            mine.len() == theirs.len()
                && mine
                    .iter()
                    .zip(theirs)
                    .all(|(m, t)| t.iter().all(|a| m.contains(a)))
        })
    }

    /// Checks shape against `game` and that every infoset has at least one admitted action.
    pub fn validate_for(&self, game: &GameTree) -> Result<(), RestrictionError> {
        for player in Player::BOTH {
            let sets = &self.admitted[player.index()];
            if sets.len() != game.infoset_count(player) {
                return Err(RestrictionError::Mismatch(format!(
                    "{player:?} has {} infosets in the population, {} in the game",
                    sets.len(),
                    game.infoset_count(player)
                )));
            }
            for (s, set) in sets.iter().enumerate() {
                if set.is_empty() {
                    return Err(RestrictionError::NoAdmittedActions { player, infoset: s });
                }
                let width = game.infoset(player, s).num_actions();
                if set.iter().any(|&a| a >= width) {
                    return Err(RestrictionError::Mismatch(format!(
                        "{player:?} infoset {s} admits an action outside 0..{width}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The game restricted to a population's admitted actions.
///
/// Local action `a` at an infoset is the `a`-th admitted action in admission order. Only nodes
/// reachable through admitted actions are traversed.
#[derive(Debug, Clone)]
pub struct RestrictedView<'g> {
    game: &'g GameTree,
    population: Population,
    preorder: Vec<NodeId>,
}

impl<'g> RestrictedView<'g> {
    pub fn new(game: &'g GameTree, population: Population) -> Result<Self, RestrictionError> {
        population.validate_for(game)?;
        let mut preorder = Vec::new();
        let mut stack = vec![game.root()];
        while let Some(n) = stack.pop() {
            preorder.push(n);
            match game.kind(n) {
                NodeKind::Terminal { .. } => {}
                NodeKind::Chance { .. } => stack.extend(game.children(n).iter().rev()),
                &NodeKind::Decision { player, infoset } => {
                    let children = game.children(n);
                    stack.extend(population.admitted(player, infoset).iter().rev().map(|&a| children[a]));
                }
            }
        }
        Ok(Self {
            game,
            population,
            preorder,
        })
    }

    pub fn population(&self) -> &Population {
        &self.population
    }
}

impl GameView for RestrictedView<'_> {
    fn tree(&self) -> &GameTree {
        self.game
    }

    fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    fn action_count(&self, player: Player, infoset: usize) -> usize {
        self.population.admitted(player, infoset).len()
    }

    fn full_action(&self, player: Player, infoset: usize, local: usize) -> usize {
        self.population.admitted(player, infoset)[local]
    }
}

/// Full-game strategy that keeps the restricted probabilities on admitted actions and puts zero
/// everywhere else.
pub fn expand_strategy(
    restricted: &BehaviorStrategy,
    population: &Population,
    game: &GameTree,
) -> Result<BehaviorStrategy, RestrictionError> {
    let player = restricted.player();
    let n = game.infoset_count(player);
    if restricted.num_infosets() != n {
        return Err(StrategyError::InfosetCount {
            expected: n,
            got: restricted.num_infosets(),
        }
        .into());
    }
    let rows = (0..n)
        .map(|s| {
            let width = game.infoset(player, s).num_actions();
            let admitted = population.admitted(player, s);
            if admitted.is_empty() {
                return Ok(vec![1.0 / width as f64; width]);
            }
            let probs = restricted.probs(s);
            if probs.len() != admitted.len() {
                return Err(StrategyError::ActionCount {
                    infoset: s,
                    expected: admitted.len(),
                    got: probs.len(),
                });
            }
            let mut row = vec![0.0; width];
            for (&a, &p) in admitted.iter().zip(probs) {
                row[a] = p;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BehaviorStrategy::from_rows(player, rows)?)
}

pub fn expand_joint(
    restricted: &JointStrategy,
    population: &Population,
    game: &GameTree,
) -> Result<JointStrategy, RestrictionError> {
    let [p1, p2] = Player::BOTH.map(|p| expand_strategy(restricted.get(p), population, game));
    Ok(JointStrategy::new(p1?, p2?)?)
}

/// Projects a full-game strategy onto the admitted actions. Rows whose mass already lies on
/// admitted actions are copied exactly; others are renormalized (uniform if no admitted mass).
pub fn restrict_strategy(
    full: &BehaviorStrategy,
    population: &Population,
) -> Result<BehaviorStrategy, RestrictionError> {
    let player = full.player();
    let rows = (0..full.num_infosets())
        .map(|s| {
            let probs = full.probs(s);
            let admitted = population.admitted(player, s);
            let mut row: Vec<f64> = admitted.iter().map(|&a| probs[a]).collect();
            let outside = (0..probs.len()).any(|a| probs[a] != 0.0 && !admitted.contains(&a));
            if outside {
                let total = row.clone();
                crate::regret::normalize_into(&total, &mut row);
            }
            row
        })
        .collect();
    Ok(BehaviorStrategy::from_rows(player, rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::best_response;
    use crate::value::expected_value;
    use crate::zoo::{kuhn, paper_example};

    #[test]
    fn paper_example_initial_population() {
        let game = paper_example();
        let pop = Population::init(&game).unwrap();
        assert_eq!(pop.admitted(Player::One, 0), &[0]);
        assert_eq!(pop.admitted(Player::Two, 0), &[1]);
        assert_eq!(pop.size(), 2);
    }

    #[test]
    fn paper_example_second_merge_is_unchanged() {
        let game = paper_example();
        let mut pop = Population::init(&game).unwrap();
        let view = RestrictedView::new(&game, pop.clone()).unwrap();
        assert_eq!(view.action_count(Player::One, 0), 1);
        // the restricted game has a single profile, (L, Y)
        let joint = expand_joint(&JointStrategy::uniform(&view), &pop, &game).unwrap();
        assert_eq!(expected_value(&game, &joint), 1.0);
        for p in Player::BOTH {
            let br = best_response(&game, joint.get(p.opponent()), p).unwrap();
            assert!(!pop.merge_best_response(&br).unwrap());
        }
    }

    #[test]
    fn merge_grows_one_infoset_and_is_idempotent() {
        let game = paper_example();
        let mut pop = Population::init(&game).unwrap();
        let before = pop.clone();
        let mut br = best_response(&game, &BehaviorStrategy::uniform(&game, Player::Two), Player::One).unwrap();
        br.actions = vec![1];
        assert!(pop.merge_best_response(&br).unwrap());
        assert_eq!(pop.admitted(Player::One, 0), &[0, 1]);
        assert_eq!(pop.size(), before.size() + 1);
        let once = pop.clone();
        assert!(!pop.merge_best_response(&br).unwrap());
        assert_eq!(pop, once);
        assert!(pop.contains(&before));
        assert!(!before.contains(&pop));
    }

    #[test]
    fn full_population_view_is_the_game() {
        let game = kuhn(2).unwrap();
        let view = RestrictedView::new(&game, Population::full(&game)).unwrap();
        assert_eq!(view.preorder(), game.preorder());
    }

    #[test]
    fn restricted_view_is_smaller() {
        let game = kuhn(2).unwrap();
        let view = RestrictedView::new(&game, Population::init(&game).unwrap()).unwrap();
        assert!(view.num_nodes() < game.num_nodes());
        for w in view.preorder().windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn expand_examples() {
        let game = paper_example();
        let pop = Population::init(&game).unwrap();
        let restricted = BehaviorStrategy::from_rows(Player::One, vec![vec![1.0]]).unwrap();
        let full = expand_strategy(&restricted, &pop, &game).unwrap();
        assert_eq!(full.probs(0), &[1.0, 0.0]);
        assert_eq!(restrict_strategy(&full, &pop).unwrap(), restricted);

        let all = Population::full(&game);
        let s = BehaviorStrategy::from_rows(Player::Two, vec![vec![0.3, 0.7]]).unwrap();
        assert_eq!(expand_strategy(&s, &all, &game).unwrap(), s);
    }

    #[test]
    fn empty_infoset_is_rejected() {
        let game = paper_example();
        let mut pop = Population::init(&game).unwrap();
        pop.admitted[1][0].clear();
        assert_eq!(
            RestrictedView::new(&game, pop).unwrap_err(),
            RestrictionError::NoAdmittedActions {
                player: Player::Two,
                infoset: 0
            }
        );
    }

    #[test]
    fn population_json_round_trip() {
        let game = kuhn(1).unwrap();
        let pop = Population::init(&game).unwrap();
        let text = serde_json::to_string(&pop).unwrap();
        assert_eq!(serde_json::from_str::<Population>(&text).unwrap(), pop);
    }
}
