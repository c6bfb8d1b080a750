use crate::error::GameError;
use crate::game::{GameBuilder, GameTree, NodeId, Player};

use super::duplicate_actions;

const RANKS: [char; 3] = ['J', 'Q', 'K'];
const RAISE_SIZE: [i32; 2] = [2, 4];
const MAX_RAISES: u8 = 2;

/// Leduc hold'em: a six-card deck (two suits of J, Q, K), one private card each, one public card,
/// two betting rounds with raise sizes 2 and 4 and at most two raises per round.
///
/// Suits never matter, so chance deals ranks directly with the matching probabilities. With
/// `dummy` every action is offered three times (the original plus two payoff-identical copies).
pub fn leduc(dummy: bool) -> Result<GameTree, GameError> {
    let mut b = GameBuilder::new();
    let mut deals = Vec::with_capacity(9);
    for r1 in 0..3 {
        for r2 in 0..3 {
            let p = (1.0 / 3.0) * (if r1 == r2 { 1.0 } else { 2.0 } / 5.0);
            let state = Betting {
                ranks: [r1, r2],
                board: None,
                contrib: [1, 1],
                raises: 0,
                acted: 0,
                to_act: Player::One,
                history: String::new(),
            };
            deals.push((p, state.build(&mut b)?));
        }
    }
    let root = b.chance(deals);
    let base = b.build(root)?;
    if dummy {
        Ok(duplicate_actions(&base, 3)?.game)
    } else {
        Ok(base)
    }
}

#[derive(Clone)]
struct Betting {
    ranks: [usize; 2],
    board: Option<usize>,
    contrib: [i32; 2],
    raises: u8,
    acted: u8,
    to_act: Player,
    history: String,
}

impl Betting {
    fn round(&self) -> usize {
        usize::from(self.board.is_some())
    }

    fn key(&self) -> String {
        let mut key = String::new();
        key.push(RANKS[self.ranks[self.to_act.index()]]);
        if let Some(board) = self.board {
            key.push(RANKS[board]);
        }
        key.push('|');
        key.push_str(&self.history);
        key
    }

    fn build(&self, b: &mut GameBuilder) -> Result<NodeId, GameError> {
        let me = self.to_act.index();
        let other = 1 - me;
        let facing = self.contrib[me] < self.contrib[other];
        let mut labels = Vec::with_capacity(3);
        let mut children = Vec::with_capacity(3);

        if facing {
            labels.push("f");
            let loss = self.contrib[me] as f64;
            children.push(b.terminal(-self.to_act.sign() * loss));
        }

        labels.push("c");
        let mut called = self.clone();
        called.contrib[me] = self.contrib[other];
        called.history.push('c');
        children.push(if self.acted > 0 {
            called.end_round(b)?
        } else {
            called.pass_turn().build(b)?
        });

        if self.raises < MAX_RAISES {
            labels.push("r");
            let mut raised = self.clone();
            raised.contrib[me] = self.contrib[other] + RAISE_SIZE[self.round()];
            raised.raises += 1;
            raised.history.push('r');
            children.push(raised.pass_turn().build(b)?);
        }

        b.decision(self.to_act, &self.key(), &labels, children)
    }

    fn pass_turn(mut self) -> Self {
        self.acted += 1;
        self.to_act = self.to_act.opponent();
        self
    }

    fn end_round(&self, b: &mut GameBuilder) -> Result<NodeId, GameError> {
        match self.board {
            Some(board) => Ok(b.terminal(self.showdown(board))),
            None => {
                let mut outcomes = Vec::with_capacity(3);
                for board in 0..3 {
                    let left = 2 - self.ranks.iter().filter(|&&r| r == board).count();
                    if left == 0 {
                        continue;
                    }
                    let next = Betting {
                        board: Some(board),
                        raises: 0,
                        acted: 0,
                        to_act: Player::One,
                        history: format!("{}/", self.history),
                        ..self.clone()
                    };
                    outcomes.push((left as f64 / 4.0, next.build(b)?));
                }
                Ok(b.chance(outcomes))
            }
        }
    }

    fn showdown(&self, board: usize) -> f64 {
        let stake = self.contrib[0] as f64;
        let [r1, r2] = self.ranks;
        let strength = |r: usize| if r == board { 10 + r } else { r };
        match strength(r1).cmp(&strength(r2)) {
            std::cmp::Ordering::Greater => stake,
            std::cmp::Ordering::Less => -stake,
            std::cmp::Ordering::Equal => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{validate_perfect_recall, GameView, NodeKind};

    #[test]
    fn base_leduc_is_valid() {
        let game = leduc(false).unwrap();
        assert!(validate_perfect_recall(&game).is_valid());
        assert_eq!(game.payoff_range(), (-13.0, 13.0));
    }

    #[test]
    fn opening_infoset_offers_check_and_raise() {
        let game = leduc(false).unwrap();
        let s = game.find_infoset(Player::One, "K|").unwrap();
        assert_eq!(game.infoset(Player::One, s).actions(), &["c", "r"]);
        let s = game.find_infoset(Player::Two, "J|r").unwrap();
        assert_eq!(game.infoset(Player::Two, s).actions(), &["f", "c", "r"]);
        // second raise exhausts the cap
        let s = game.find_infoset(Player::One, "Q|rr").unwrap();
        assert_eq!(game.action_count(Player::One, s), 2);
    }

    #[test]
    fn board_chance_excludes_dealt_pair() {
        let game = leduc(false).unwrap();
        // the first chance node below a pair of kings can only deal J or Q
        let deal = game.children(game.root())[8];
        let mut node = deal;
        // walk check, check to the board deal
        for _ in 0..2 {
            node = game.children(node)[0];
        }
        match game.kind(node) {
            NodeKind::Chance { probs } => assert_eq!(&probs[..], &[0.5, 0.5]),
            other => panic!("expected chance node, got {other:?}"),
        }
    }
}
