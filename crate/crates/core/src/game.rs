//! Explicit two-player zero-sum extensive-form game trees.
//!
//! A [`GameTree`] is materialized once by a [`GameBuilder`] and is immutable afterwards. Nodes are
//! renumbered in depth-first preorder, so every parent has a smaller id than its children and a
//! forward scan over the node array is a valid top-down traversal. Payoffs are stored for player
//! one only; player two receives the negation.
//!
//! Traversal code throughout the crate is written against [`GameView`], which both the full tree
//! and restricted games implement.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::GameError;

/// Tolerance used when checking that chance distributions sum to one.
pub const CHANCE_TOLERANCE: f64 = 1e-12;

pub type NodeId = usize;

/// One of the two strategic players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// Multiplier turning a player-one payoff into this player's payoff.
    pub fn sign(self) -> f64 {
        match self {
            Player::One => 1.0,
            Player::Two => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    /// Payoff to player one.
    Terminal { payoff: f64 },
    Chance { probs: Box<[f64]> },
    Decision { player: Player, infoset: usize },
}

#[derive(Debug, Clone)]
pub struct Node {
    kind: NodeKind,
    children: Box<[NodeId]>,
    parent: Option<NodeId>,
    parent_action: usize,
}

impl Node {
    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    /// Index of the edge leading from the parent to this node.
    pub fn parent_action(&self) -> usize {
        self.parent_action
    }
}

#[derive(Debug, Clone)]
pub struct Infoset {
    key: String,
    actions: Vec<String>,
    nodes: Vec<NodeId>,
    parent_sequence: Option<(usize, usize)>,
}

impl Infoset {
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// Histories belonging to this infoset, in preorder.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// The acting player's previous (infoset, action) pair, or `None` at their first decision.
    pub fn parent_sequence(&self) -> Option<(usize, usize)> {
        self.parent_sequence
    }
}

#[derive(Debug, Clone)]
pub struct GameTree {
    nodes: Vec<Node>,
    infosets: [Vec<Infoset>; 2],
    preorder: Vec<NodeId>,
    payoff_min: f64,
    payoff_max: f64,
}

impl GameTree {
    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn kind(&self, id: NodeId) -> &NodeKind {
        &self.nodes[id].kind
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn infoset_count(&self, player: Player) -> usize {
        self.infosets[player.index()].len()
    }

    pub fn total_infosets(&self) -> usize {
        self.infosets[0].len() + self.infosets[1].len()
    }

    pub fn infoset(&self, player: Player, infoset: usize) -> &Infoset {
        &self.infosets[player.index()][infoset]
    }

    pub fn infosets(&self, player: Player) -> &[Infoset] {
        &self.infosets[player.index()]
    }

    pub fn find_infoset(&self, player: Player, key: &str) -> Option<usize> {
        self.infosets[player.index()]
            .iter()
            .position(|s| s.key == key)
    }

    /// Smallest and largest terminal payoff for player one.
    pub fn payoff_range(&self) -> (f64, f64) {
        (self.payoff_min, self.payoff_max)
    }

    /// Payoff range Δ.
    pub fn delta(&self) -> f64 {
        self.payoff_max - self.payoff_min
    }

    pub fn terminals(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.nodes.iter().enumerate().filter_map(|(id, n)| match n.kind {
            NodeKind::Terminal { payoff } => Some((id, payoff)),
            _ => None,
        })
    }

    /// Maximum number of actions at any infoset of `player`.
    pub fn max_actions(&self, player: Player) -> usize {
        self.infosets(player)
            .iter()
            .map(Infoset::num_actions)
            .max()
            .unwrap_or(0)
    }

    /// Sequence of (infoset, action) pairs `player` took on the way to `node`.
    pub fn own_sequence(&self, player: Player, node: NodeId) -> Vec<(usize, usize)> {
        let mut seq = Vec::new();
        let mut cur = node;
        while let Some(parent) = self.nodes[cur].parent {
            if let NodeKind::Decision { player: p, infoset } = self.nodes[parent].kind {
                if p == player {
                    seq.push((infoset, self.nodes[cur].parent_action));
                }
            }
            cur = parent;
        }
        seq.reverse();
        seq
    }
}

/// Read access to a (possibly restricted) game, used by every traversal in the crate.
///
/// Action indices handed to strategies are *local* to the view; `full_action` maps them back to
/// the edge index in the underlying tree. Chance nodes are never restricted.
pub trait GameView {
    fn tree(&self) -> &GameTree;

    /// Nodes reachable in this view, in preorder.
    fn preorder(&self) -> &[NodeId];

    fn action_count(&self, player: Player, infoset: usize) -> usize;

    fn full_action(&self, player: Player, infoset: usize, local: usize) -> usize;

    fn infoset_count(&self, player: Player) -> usize {
        self.tree().infoset_count(player)
    }

    fn decision_child(&self, node: NodeId, player: Player, infoset: usize, local: usize) -> NodeId {
        self.tree().children(node)[self.full_action(player, infoset, local)]
    }

    fn num_nodes(&self) -> usize {
        self.preorder().len()
    }
}

impl GameView for GameTree {
    fn tree(&self) -> &GameTree {
        self
    }

    fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    fn action_count(&self, player: Player, infoset: usize) -> usize {
        self.infosets[player.index()][infoset].actions.len()
    }

    fn full_action(&self, _player: Player, _infoset: usize, local: usize) -> usize {
        local
    }

    fn decision_child(&self, node: NodeId, _player: Player, _infoset: usize, local: usize) -> NodeId {
        self.nodes[node].children[local]
    }
}

#[derive(Debug)]
enum Pending {
    Terminal(f64),
    Chance(Vec<f64>, Vec<NodeId>),
    Decision(Player, usize, Vec<NodeId>),
}

struct PendingInfoset {
    key: String,
    actions: Vec<String>,
}

/// Bottom-up constructor: children are created before their parent, then [`GameBuilder::build`]
/// renumbers everything in preorder from the chosen root.
#[derive(Default)]
pub struct GameBuilder {
    nodes: Vec<Pending>,
    infosets: [Vec<PendingInfoset>; 2],
    lookup: [HashMap<String, usize>; 2],
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terminal(&mut self, payoff: f64) -> NodeId {
        self.nodes.push(Pending::Terminal(payoff));
        self.nodes.len() - 1
    }

    pub fn chance(&mut self, outcomes: Vec<(f64, NodeId)>) -> NodeId {
        let (probs, children) = outcomes.into_iter().unzip();
        self.nodes.push(Pending::Chance(probs, children));
        self.nodes.len() - 1
    }

    /// Adds a decision node in the infoset named `key`. Histories sharing a key must offer the
    /// same action labels in the same order.
    pub fn decision<S: AsRef<str>>(
        &mut self,
        player: Player,
        key: &str,
        labels: &[S],
        children: Vec<NodeId>,
    ) -> Result<NodeId, GameError> {
        if labels.len() != children.len() {
            return Err(GameError::InconsistentInfoset { key: key.to_owned() });
        }
        let p = player.index();
        let infoset = match self.lookup[p].get(key) {
            Some(&s) => {
                let known = &self.infosets[p][s].actions;
                if known.len() != labels.len()
                    || known.iter().zip(labels).any(|(a, b)| a != b.as_ref())
                {
                    return Err(GameError::InconsistentInfoset { key: key.to_owned() });
                }
                s
            }
            None => {
                let s = self.infosets[p].len();
                self.infosets[p].push(PendingInfoset {
                    key: key.to_owned(),
                    actions: labels.iter().map(|l| l.as_ref().to_owned()).collect(),
                });
                self.lookup[p].insert(key.to_owned(), s);
                s
            }
        };
        self.nodes.push(Pending::Decision(player, infoset, children));
        Ok(self.nodes.len() - 1)
    }

    pub fn build(self, root: NodeId) -> Result<GameTree, GameError> {
        let GameBuilder {
            nodes: pending,
            infosets: pending_infosets,
            ..
        } = self;
        if root >= pending.len() {
            return Err(GameError::UnknownNode(root));
        }
        // preorder renumbering; a node seen twice means the graph is not a tree
        let mut new_id = vec![usize::MAX; pending.len()];
        let mut order = Vec::with_capacity(pending.len());
        let mut parent_of = Vec::with_capacity(pending.len());
        let mut stack = vec![(root, None::<NodeId>, 0usize)];
        while let Some((old, parent, action)) = stack.pop() {
            if old >= pending.len() {
                return Err(GameError::UnknownNode(old));
            }
            if new_id[old] != usize::MAX {
                return Err(GameError::SharedNode(old));
            }
            new_id[old] = order.len();
            order.push(old);
            parent_of.push((parent, action));
            let children: &[NodeId] = match &pending[old] {
                Pending::Terminal(_) => &[],
                Pending::Chance(_, c) | Pending::Decision(_, _, c) => c,
            };
            if children.is_empty() && !matches!(pending[old], Pending::Terminal(_)) {
                return Err(GameError::EmptyActions(old));
            }
            let me = new_id[old];
            for (a, &c) in children.iter().enumerate().rev() {
                stack.push((c, Some(me), a));
            }
        }
        if let Some(orphan) = new_id.iter().position(|&id| id == usize::MAX) {
            return Err(GameError::Unreachable(orphan));
        }

        // infosets renumbered by first appearance in preorder
        let mut infoset_id: [Vec<usize>; 2] = [
            vec![usize::MAX; pending_infosets[0].len()],
            vec![usize::MAX; pending_infosets[1].len()],
        ];
        let mut infosets: [Vec<Infoset>; 2] = [Vec::new(), Vec::new()];
        let mut pending_infosets = pending_infosets.map(|v| v.into_iter().map(Some).collect::<Vec<_>>());

        let mut nodes = Vec::with_capacity(order.len());
        let mut payoff_min = f64::INFINITY;
        let mut payoff_max = f64::NEG_INFINITY;
        let mut pending = pending.into_iter().map(Some).collect::<Vec<_>>();
        for (id, &old) in order.iter().enumerate() {
            let (parent, parent_action) = parent_of[id];
            let remap = |c: Vec<NodeId>| -> Box<[NodeId]> { c.into_iter().map(|o| new_id[o]).collect() };
            let node = match pending[old].take().expect("each node visited once") {
                Pending::Terminal(payoff) => {
                    payoff_min = payoff_min.min(payoff);
                    payoff_max = payoff_max.max(payoff);
                    Node {
                        kind: NodeKind::Terminal { payoff },
                        children: Box::new([]),
                        parent,
                        parent_action,
                    }
                }
                Pending::Chance(probs, children) => {
                    let sum: f64 = probs.iter().sum();
                    if probs.iter().any(|&p| !(p >= 0.0)) || (sum - 1.0).abs() > CHANCE_TOLERANCE {
                        return Err(GameError::BadChance { node: id, sum });
                    }
                    Node {
                        kind: NodeKind::Chance {
                            probs: probs.into_boxed_slice(),
                        },
                        children: remap(children),
                        parent,
                        parent_action,
                    }
                }
                Pending::Decision(player, old_s, children) => {
                    let p = player.index();
                    if infoset_id[p][old_s] == usize::MAX {
                        infoset_id[p][old_s] = infosets[p].len();
                        let pi = pending_infosets[p][old_s].take().expect("fresh infoset");
                        infosets[p].push(Infoset {
                            key: pi.key,
                            actions: pi.actions,
                            nodes: Vec::new(),
                            parent_sequence: None,
                        });
                    }
                    let s = infoset_id[p][old_s];
                    infosets[p][s].nodes.push(id);
                    Node {
                        kind: NodeKind::Decision { player, infoset: s },
                        children: remap(children),
                        parent,
                        parent_action,
                    }
                }
            };
            nodes.push(node);
        }

        let mut tree = GameTree {
            preorder: (0..nodes.len()).collect(),
            nodes,
            infosets,
            payoff_min,
            payoff_max,
        };
        for player in Player::BOTH {
            for s in 0..tree.infoset_count(player) {
                let first = tree.infosets[player.index()][s].nodes[0];
                let seq = tree.own_sequence(player, first);
                tree.infosets[player.index()][s].parent_sequence = seq.last().copied();
            }
        }
        Ok(tree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecallViolation {
    pub player: Player,
    pub infoset: usize,
    pub key: String,
}

/// Result of [`validate_perfect_recall`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecallReport {
    pub violations: Vec<RecallViolation>,
}

impl RecallReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that all histories of every infoset share the acting player's own sequence of
/// (infoset, action) pairs. Structural errors are caught earlier by [`GameBuilder::build`].
pub fn validate_perfect_recall(game: &GameTree) -> RecallReport {
    let mut violations = Vec::new();
    for player in Player::BOTH {
        for (s, infoset) in game.infosets(player).iter().enumerate() {
            let reference = game.own_sequence(player, infoset.nodes[0]);
            if infoset.nodes[1..]
                .iter()
                .any(|&h| game.own_sequence(player, h) != reference)
            {
                violations.push(RecallViolation {
                    player,
                    infoset: s,
                    key: infoset.key.clone(),
                });
            }
        }
    }
    RecallReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_renumbers_in_preorder() {
        let mut b = GameBuilder::new();
        let l = b.terminal(1.0);
        let r = b.terminal(-2.0);
        let root = b.decision(Player::One, "root", &["l", "r"], vec![l, r]).unwrap();
        let game = b.build(root).unwrap();
        assert_eq!(game.num_nodes(), 3);
        assert!(matches!(game.kind(0), NodeKind::Decision { .. }));
        assert_eq!(game.children(0), &[1, 2]);
        assert_eq!(game.node(2).parent(), Some(0));
        assert_eq!(game.node(2).parent_action(), 1);
        assert_eq!(game.delta(), 3.0);
    }

    #[test]
    fn shared_child_is_rejected() {
        let mut b = GameBuilder::new();
        let z = b.terminal(0.0);
        let root = b.decision(Player::One, "r", &["a", "b"], vec![z, z]).unwrap();
        assert_eq!(b.build(root).unwrap_err(), GameError::SharedNode(z));
    }

    #[test]
    fn orphan_node_is_rejected() {
        let mut b = GameBuilder::new();
        let z = b.terminal(0.0);
        let orphan = b.terminal(1.0);
        let root = b.decision(Player::One, "r", &["a"], vec![z]).unwrap();
        assert_eq!(b.build(root).unwrap_err(), GameError::Unreachable(orphan));
    }

    #[test]
    fn empty_action_set_is_structural() {
        let mut b = GameBuilder::new();
        let root = b.decision::<&str>(Player::One, "r", &[], vec![]).unwrap();
        assert_eq!(b.build(root).unwrap_err(), GameError::EmptyActions(root));
    }

    #[test]
    fn chance_must_sum_to_one() {
        let mut b = GameBuilder::new();
        let a = b.terminal(0.0);
        let c = b.terminal(0.0);
        let root = b.chance(vec![(0.5, a), (0.4, c)]);
        assert!(matches!(b.build(root), Err(GameError::BadChance { .. })));
    }

    #[test]
    fn infoset_labels_must_agree() {
        let mut b = GameBuilder::new();
        let z = [b.terminal(0.0), b.terminal(0.0), b.terminal(0.0), b.terminal(0.0)];
        b.decision(Player::Two, "s", &["x", "y"], vec![z[0], z[1]]).unwrap();
        let err = b.decision(Player::Two, "s", &["x", "z"], vec![z[2], z[3]]).unwrap_err();
        assert_eq!(err, GameError::InconsistentInfoset { key: "s".into() });
    }

    #[test]
    fn merged_own_prefixes_violate_recall() {
        // player one acts twice; the second decision merges histories after different first moves
        let mut b = GameBuilder::new();
        let leaves: Vec<_> = (0..4).map(|i| b.terminal(i as f64)).collect();
        let after_a = b.decision(Player::One, "forgetful", &["x", "y"], vec![leaves[0], leaves[1]]).unwrap();
        let after_b = b.decision(Player::One, "forgetful", &["x", "y"], vec![leaves[2], leaves[3]]).unwrap();
        let root = b.decision(Player::One, "first", &["a", "b"], vec![after_a, after_b]).unwrap();
        let game = b.build(root).unwrap();
        let report = validate_perfect_recall(&game);
        assert!(!report.is_valid());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].key, "forgetful");
        assert_eq!(report.violations[0].player, Player::One);
    }

    #[test]
    fn opponent_moves_do_not_break_recall() {
        let mut b = GameBuilder::new();
        let leaves: Vec<_> = (0..4).map(|i| b.terminal(i as f64)).collect();
        let x = b.decision(Player::Two, "s", &["x", "y"], vec![leaves[0], leaves[1]]).unwrap();
        let y = b.decision(Player::Two, "s", &["x", "y"], vec![leaves[2], leaves[3]]).unwrap();
        let root = b.decision(Player::One, "r", &["l", "r"], vec![x, y]).unwrap();
        let game = b.build(root).unwrap();
        assert!(validate_perfect_recall(&game).is_valid());
        assert_eq!(game.infoset(Player::Two, 0).nodes(), &[1, 4]);
        assert_eq!(game.infoset(Player::Two, 0).parent_sequence(), None);
    }
}
