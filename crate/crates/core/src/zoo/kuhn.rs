use crate::error::GameError;
use crate::game::{GameBuilder, GameTree, NodeId, Player};

const CARDS: [char; 3] = ['J', 'Q', 'K'];

/// Kuhn poker with `pot` chips behind each player's ante of one.
///
/// `pot == 1` is the standard game. With a larger pot the opening bet may be any size from one to
/// `pot`; the other player can only fold or call it, so each betting sequence holds one bet.
pub fn kuhn(pot: u32) -> Result<GameTree, GameError> {
    if pot < 1 {
        return Err(GameError::InvalidParameters("kuhn pot must be at least 1".into()));
    }
    let mut b = GameBuilder::new();
    let mut deals = Vec::with_capacity(6);
    for c1 in 0..3 {
        for c2 in 0..3 {
            if c1 != c2 {
                let node = first_action(&mut b, pot, c1, c2)?;
                deals.push((1.0 / 6.0, node));
            }
        }
    }
    let root = b.chance(deals);
    b.build(root)
}

fn opening_labels(pot: u32) -> Vec<String> {
    std::iter::once("check".to_owned())
        .chain((1..=pot).map(|s| format!("bet{s}")))
        .collect()
}

fn showdown(c1: usize, c2: usize, stake: f64) -> f64 {
    if c1 > c2 {
        stake
    } else {
        -stake
    }
}

fn first_action(b: &mut GameBuilder, pot: u32, c1: usize, c2: usize) -> Result<NodeId, GameError> {
    let mut children = Vec::with_capacity(pot as usize + 1);
    // check
    let mut after_check = vec![b.terminal(showdown(c1, c2, 1.0))];
    for size in 1..=pot {
        let stake = 1.0 + size as f64;
        let fold = b.terminal(-1.0);
        let call = b.terminal(showdown(c1, c2, stake));
        let key = format!("{}|check.bet{size}", CARDS[c1]);
        after_check.push(b.decision(Player::One, &key, &["fold", "call"], vec![fold, call])?);
    }
    let key = format!("{}|check", CARDS[c2]);
    children.push(b.decision(Player::Two, &key, &opening_labels(pot), after_check)?);
    // bet
    for size in 1..=pot {
        let stake = 1.0 + size as f64;
        let fold = b.terminal(1.0);
        let call = b.terminal(showdown(c1, c2, stake));
        let key = format!("{}|bet{size}", CARDS[c2]);
        children.push(b.decision(Player::Two, &key, &["fold", "call"], vec![fold, call])?);
    }
    let key = format!("{}|", CARDS[c1]);
    b.decision(Player::One, &key, &opening_labels(pot), children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{validate_perfect_recall, GameView};

    #[test]
    fn standard_kuhn_has_twelve_infosets() {
        let game = kuhn(1).unwrap();
        assert_eq!(game.infoset_count(Player::One), 6);
        assert_eq!(game.infoset_count(Player::Two), 6);
        assert!(validate_perfect_recall(&game).is_valid());
    }

    #[test]
    fn root_deals_six_ordered_pairs() {
        let game = kuhn(1).unwrap();
        assert_eq!(game.children(game.root()).len(), 6);
        assert_eq!(game.num_nodes(), 1 + 6 * 9);
    }

    #[test]
    fn larger_pot_offers_every_bet_size() {
        let game = kuhn(4).unwrap();
        let root_infoset = game.find_infoset(Player::One, "Q|").unwrap();
        assert_eq!(game.action_count(Player::One, root_infoset), 5);
        // 3 opening infosets + 3 cards x 4 sizes facing a check-bet
        assert_eq!(game.infoset_count(Player::One), 3 + 12);
        assert_eq!(game.infoset_count(Player::Two), 3 + 12);
        assert_eq!(game.payoff_range(), (-5.0, 5.0));
    }
}
