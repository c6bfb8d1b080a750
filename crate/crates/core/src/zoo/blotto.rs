use crate::error::GameError;
use crate::game::{GameBuilder, GameTree, NodeId, Player};

/// Sequential Colonel Blotto with perfect information.
///
/// Each player owns forces of strength `0..forces`. Over `rounds` placements the players alternate
/// (player one first) committing an unused force; each consecutive pair of placements is a battle
/// worth the difference in strength to player one. The payoff is the sum of battle results.
pub fn sequential_blotto(rounds: u32, forces: u32) -> Result<GameTree, GameError> {
    if rounds == 0 || rounds % 2 != 0 || rounds > forces || forces > 64 {
        return Err(GameError::InvalidParameters(
            "sequential blotto requires an even, positive number of rounds <= forces <= 64".into(),
        ));
    }
    let mut b = GameBuilder::new();
    let root = place(&mut b, rounds, forces, [0, 0], 0, None, &mut Vec::new())?;
    b.build(root)
}

fn place(
    b: &mut GameBuilder,
    remaining: u32,
    forces: u32,
    used: [u64; 2],
    score: i64,
    pending: Option<u32>,
    history: &mut Vec<u32>,
) -> Result<NodeId, GameError> {
    if remaining == 0 {
        return Ok(b.terminal(score as f64));
    }
    let player = if pending.is_none() { Player::One } else { Player::Two };
    let p = player.index();
    let options: Vec<u32> = (0..forces).filter(|f| used[p] & (1 << f) == 0).collect();
    let labels: Vec<String> = options.iter().map(u32::to_string).collect();
    let key = history.iter().map(u32::to_string).collect::<Vec<_>>().join(".");
    let mut children = Vec::with_capacity(options.len());
    for &force in &options {
        let mut next_used = used;
        next_used[p] |= 1 << force;
        let (next_score, next_pending) = match pending {
            None => (score, Some(force)),
            Some(first) => (score + first as i64 - force as i64, None),
        };
        history.push(force);
        let child = place(b, remaining - 1, forces, next_used, next_score, next_pending, history);
        history.pop();
        children.push(child?);
    }
    b.decision(player, &key, &labels, children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::validate_perfect_recall;

    #[test]
    fn single_battle_pays_strength_difference() {
        let game = sequential_blotto(2, 2).unwrap();
        let payoffs: Vec<f64> = game.terminals().map(|(_, v)| v).collect();
        assert_eq!(payoffs, vec![0.0, -1.0, 1.0, 0.0]);
        assert_eq!(game.infoset_count(Player::One), 1);
        assert_eq!(game.infoset_count(Player::Two), 2);
    }

    #[test]
    fn responder_observes_the_commitment() {
        let game = sequential_blotto(2, 3).unwrap();
        assert_eq!(game.terminals().count(), 9);
        assert_eq!(game.infoset_count(Player::Two), 3);
        assert!(validate_perfect_recall(&game).is_valid());
    }

    #[test]
    fn forces_are_used_once() {
        let game = sequential_blotto(4, 4).unwrap();
        // 4 * 4 * 3 * 3 placements
        assert_eq!(game.terminals().count(), 144);
    }
}
