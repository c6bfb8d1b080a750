use crate::error::GameError;
use crate::game::{GameBuilder, GameTree, NodeId, Player};

/// Oshi Zumo: each round both players secretly bid at least `min_bid` coins (a player holding
/// fewer than `min_bid` coins bids 0) and the higher bid pushes the token one cell toward the
/// opponent. The board has `2 * half_board + 1` cells with the token in the middle; pushing it
/// onto the opponent's edge cell (a net `half_board` pushes) wins `+1`. Bids are paid regardless
/// of the outcome, and the game is a draw once neither player can bid.
///
/// The simultaneous bid is modeled as player one bidding first, with player two's infoset not
/// revealing that bid. Both bids are public afterwards.
pub fn oshi_zumo(coins: u32, half_board: u32, min_bid: u32) -> Result<GameTree, GameError> {
    if min_bid < 1 || coins < min_bid || half_board < 1 {
        return Err(GameError::InvalidParameters(
            "oshi zumo requires coins >= min_bid >= 1 and half_board >= 1".into(),
        ));
    }
    let rules = Rules {
        half_board: half_board as i32,
        min_bid,
    };
    let mut b = GameBuilder::new();
    let root = rules.round(&mut b, [coins, coins], 0, &mut String::new())?;
    b.build(root)
}

struct Rules {
    half_board: i32,
    min_bid: u32,
}

impl Rules {
    fn bids(&self, coins: u32) -> Vec<u32> {
        if coins < self.min_bid {
            vec![0]
        } else {
            (self.min_bid..=coins).collect()
        }
    }

    fn round(
        &self,
        b: &mut GameBuilder,
        coins: [u32; 2],
        position: i32,
        history: &mut String,
    ) -> Result<NodeId, GameError> {
        if position >= self.half_board {
            return Ok(b.terminal(1.0));
        }
        if position <= -self.half_board {
            return Ok(b.terminal(-1.0));
        }
        if coins.iter().all(|&c| c < self.min_bid) {
            return Ok(b.terminal(0.0));
        }
        let bids1 = self.bids(coins[0]);
        let bids2 = self.bids(coins[1]);
        let labels1: Vec<String> = bids1.iter().map(u32::to_string).collect();
        let labels2: Vec<String> = bids2.iter().map(u32::to_string).collect();
        let key1 = format!("p1|{history}");
        let key2 = format!("p2|{history}");
        let mut p1_children = Vec::with_capacity(bids1.len());
        for &bid1 in &bids1 {
            let mut p2_children = Vec::with_capacity(bids2.len());
            for &bid2 in &bids2 {
                let next_position = position + (bid1 > bid2) as i32 - (bid2 > bid1) as i32;
                let len = history.len();
                history.push_str(&format!("({bid1},{bid2})"));
                let child = self.round(b, [coins[0] - bid1, coins[1] - bid2], next_position, history);
                history.truncate(len);
                p2_children.push(child?);
            }
            p1_children.push(b.decision(Player::Two, &key2, &labels2, p2_children)?);
        }
        b.decision(Player::One, &key1, &labels1, p1_children)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{validate_perfect_recall, NodeKind};

    #[test]
    fn single_coin_game_is_a_forced_draw() {
        let game = oshi_zumo(1, 1, 1).unwrap();
        // root (p1 bids 1) -> p2 bids 1 -> both broke, token unmoved
        assert_eq!(game.num_nodes(), 3);
        assert_eq!(game.infoset(Player::One, 0).actions(), &["1"]);
        assert_eq!(game.infoset(Player::Two, 0).actions(), &["1"]);
        assert_eq!(game.kind(2), &NodeKind::Terminal { payoff: 0.0 });
    }

    #[test]
    fn tied_bids_leave_the_token() {
        // with one cell each side a single push wins, so only ties continue
        let game = oshi_zumo(2, 1, 1).unwrap();
        assert!(validate_perfect_recall(&game).is_valid());
        let p2 = game.children(game.root())[0];
        // (1,1) tie: both keep one coin, play continues
        let tie = game.children(p2)[0];
        assert!(matches!(game.kind(tie), NodeKind::Decision { .. }));
    }

    #[test]
    fn broke_player_bids_zero() {
        let game = oshi_zumo(3, 3, 2).unwrap();
        // after (3, 2) player one is broke and player two holds one coin (< min bid)
        let s = game.find_infoset(Player::One, "p1|(2,3)");
        assert!(s.is_none(), "both players drop below the minimum bid");
        let s = game.find_infoset(Player::One, "p1|(2,2)");
        assert!(s.is_none());
        let game = oshi_zumo(4, 3, 2).unwrap();
        let s = game.find_infoset(Player::Two, "p2|(2,4)").unwrap();
        assert_eq!(game.infoset(Player::Two, s).actions(), &["0"]);
        let s = game.find_infoset(Player::One, "p1|(2,4)").unwrap();
        assert_eq!(game.infoset(Player::One, s).actions(), &["2"]);
        let s = game.find_infoset(Player::One, "p1|(4,2)").unwrap();
        assert_eq!(game.infoset(Player::One, s).actions(), &["0"]);
    }
}
