use std::collections::HashMap;

use crate::error::GameError;
use crate::game::{GameBuilder, GameTree, NodeId, NodeKind, Player};

/// A game whose actions were duplicated, with the map back to the original infosets.
#[derive(Debug, Clone)]
pub struct DummyGame {
    pub game: GameTree,
    pub copies: usize,
    /// `base_infoset[player][s]` is the original infoset behind duplicated infoset `s`.
    pub base_infoset: [Vec<usize>; 2],
}

impl DummyGame {
    /// Original action behind a duplicated action index.
    pub fn base_action(&self, action: usize) -> usize {
        action / self.copies
    }
}

/// Offers every action `copies` times. Copies lead to payoff-identical but distinct subtrees, and
/// since betting actions are public, every later infoset also records which copies were played.
pub fn duplicate_actions(base: &GameTree, copies: usize) -> Result<DummyGame, GameError> {
    if copies == 0 {
        return Err(GameError::InvalidParameters("copies must be positive".into()));
    }
    let mut b = GameBuilder::new();
    let mut origin: [HashMap<String, usize>; 2] = Default::default();
    let root = copy_node(base, base.root(), copies, &mut b, &mut String::new(), &mut origin)?;
    let game = b.build(root)?;
    let base_infoset = Player::BOTH.map(|p| {
        game.infosets(p)
            .iter()
            .map(|s| origin[p.index()][s.key()])
            .collect()
    });
    Ok(DummyGame {
        game,
        copies,
        base_infoset,
    })
}

fn copy_node(
    base: &GameTree,
    node: NodeId,
    copies: usize,
    b: &mut GameBuilder,
    path: &mut String,
    origin: &mut [HashMap<String, usize>; 2],
) -> Result<NodeId, GameError> {
    match base.kind(node) {
        NodeKind::Terminal { payoff } => Ok(b.terminal(*payoff)),
        NodeKind::Chance { probs } => {
            let mut outcomes = Vec::with_capacity(probs.len());
            for (&c, &p) in base.children(node).iter().zip(probs.iter()) {
                outcomes.push((p, copy_node(base, c, copies, b, path, origin)?));
            }
            Ok(b.chance(outcomes))
        }
        &NodeKind::Decision { player, infoset } => {
            let info = base.infoset(player, infoset);
            let mut labels = Vec::with_capacity(info.num_actions() * copies);
            let mut children = Vec::with_capacity(info.num_actions() * copies);
            for (a, label) in info.actions().iter().enumerate() {
                for i in 0..copies {
                    labels.push(format!("{label}~{i}"));
                    let len = path.len();
                    path.push_str(&i.to_string());
                    let child = copy_node(base, base.children(node)[a], copies, b, path, origin);
                    path.truncate(len);
                    children.push(child?);
                }
            }
            let key = format!("{}#{}", info.key(), path);
            origin[player.index()].insert(key.clone(), infoset);
            b.decision(player, &key, &labels, children)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{validate_perfect_recall, GameView};
    use crate::zoo::kuhn;

    #[test]
    fn dummy_kuhn_triples_every_action_set() {
        let base = kuhn(1).unwrap();
        let dummy = duplicate_actions(&base, 3).unwrap();
        assert!(validate_perfect_recall(&dummy.game).is_valid());
        for p in Player::BOTH {
            for (s, &orig) in dummy.base_infoset[p.index()].iter().enumerate() {
                assert_eq!(
                    dummy.game.action_count(p, s),
                    3 * base.action_count(p, orig)
                );
            }
        }
        // root opening infosets are unchanged in number, deeper ones multiply
        assert_eq!(dummy.game.infoset_count(Player::One), 3 + 3 * 3 * 3);
    }

    #[test]
    fn single_copy_is_isomorphic() {
        let base = kuhn(2).unwrap();
        let same = duplicate_actions(&base, 1).unwrap();
        assert_eq!(same.game.num_nodes(), base.num_nodes());
        assert_eq!(same.game.total_infosets(), base.total_infosets());
    }
}
