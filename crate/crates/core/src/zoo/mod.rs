//! Benchmark games.
//!
//! Every constructor returns a fully materialized [`GameTree`]. Infoset keys are human-readable
//! (private information, `|`, then the public action history) so populations and strategies can
//! be inspected by name.

mod blotto;
mod dummy;
mod kuhn;
mod leduc;
mod oshi_zumo;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::game::{GameBuilder, GameTree, Player};

pub use blotto::sequential_blotto;
pub use dummy::{duplicate_actions, DummyGame};
pub use kuhn::kuhn;
pub use leduc::leduc;
pub use oshi_zumo::oshi_zumo;

/// Two-move example: player one picks `L`/`R`, player two picks `X`/`Y` without seeing it.
///
/// Leaf payoffs for player one are `(L,X)=2`, `(L,Y)=1`, `(R,X)=3`, `(R,Y)=-1`; the unique
/// equilibrium is the pure profile `(L, Y)`.
pub fn paper_example() -> GameTree {
    let mut b = GameBuilder::new();
    let square = |b: &mut GameBuilder, x: f64, y: f64| {
        let lx = b.terminal(x);
        let ly = b.terminal(y);
        b.decision(Player::Two, "square", &["X", "Y"], vec![lx, ly])
            .expect("consistent labels")
    };
    let l = square(&mut b, 2.0, 1.0);
    let r = square(&mut b, 3.0, -1.0);
    let root = b
        .decision(Player::One, "circle", &["L", "R"], vec![l, r])
        .expect("consistent labels");
    b.build(root).expect("valid tree")
}

/// Matching pennies as a two-move game with a hidden first move.
pub fn matching_pennies() -> GameTree {
    let mut b = GameBuilder::new();
    let responder = |b: &mut GameBuilder, first: usize| {
        let leaves = (0..2)
            .map(|second| b.terminal(if first == second { 1.0 } else { -1.0 }))
            .collect();
        b.decision(Player::Two, "guess", &["H", "T"], leaves)
            .expect("consistent labels")
    };
    let h = responder(&mut b, 0);
    let t = responder(&mut b, 1);
    let root = b
        .decision(Player::One, "coin", &["H", "T"], vec![h, t])
        .expect("consistent labels");
    b.build(root).expect("valid tree")
}

/// A game family plus its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GameSpec {
    PaperExample,
    MatchingPennies,
    Kuhn { pot: u32, dummy: bool },
    Leduc { dummy: bool },
    OshiZumo { coins: u32, half_board: u32, min_bid: u32 },
    SequentialBlotto { rounds: u32, forces: u32 },
}

impl GameSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GameSpec::PaperExample => "paper-example",
            GameSpec::MatchingPennies => "matching-pennies",
            GameSpec::Kuhn { .. } => "kuhn",
            GameSpec::Leduc { .. } => "leduc",
            GameSpec::OshiZumo { .. } => "oshi-zumo",
            GameSpec::SequentialBlotto { .. } => "sequential-blotto",
        }
    }

    /// Family with default parameters, or `None` for an unknown family name.
    pub fn default_for(family: &str) -> Option<GameSpec> {
        Some(match family.replace('_', "-").as_str() {
            "paper-example" => GameSpec::PaperExample,
            "matching-pennies" => GameSpec::MatchingPennies,
            "kuhn" => GameSpec::Kuhn {
                pot: 1,
                dummy: false,
            },
            "leduc" => GameSpec::Leduc { dummy: false },
            "oshi-zumo" => GameSpec::OshiZumo {
                coins: 4,
                half_board: 2,
                min_bid: 1,
            },
            "sequential-blotto" | "blotto" => GameSpec::SequentialBlotto {
                rounds: 2,
                forces: 4,
            },
            _ => return None,
        })
    }

    /// Overrides one parameter. Keys: `pot`, `dummy`, `coins`, `half_board` (or `k`),
    /// `min_bid` (or `m`), `rounds`, `forces`.
    pub fn set_param(&mut self, key: &str, value: &str) -> Result<(), GameError> {
        let family = self.family();
        let bad = || GameError::InvalidParameters(format!("{key}={value} for {family}"));
        let int = || value.parse::<u32>().map_err(|_| bad());
        let flag = || value.parse::<bool>().map_err(|_| bad());
        match (&mut *self, key.replace('-', "_").as_str()) {
            (GameSpec::Kuhn { pot, .. }, "pot") => *pot = int()?,
            (GameSpec::Kuhn { dummy, .. } | GameSpec::Leduc { dummy }, "dummy") => *dummy = flag()?,
            (GameSpec::OshiZumo { coins, .. }, "coins") => *coins = int()?,
            (GameSpec::OshiZumo { half_board, .. }, "half_board" | "k") => *half_board = int()?,
            (GameSpec::OshiZumo { min_bid, .. }, "min_bid" | "m") => *min_bid = int()?,
            (GameSpec::SequentialBlotto { rounds, .. }, "rounds" | "n") => *rounds = int()?,
            (GameSpec::SequentialBlotto { forces, .. }, "forces") => *forces = int()?,
            _ => return Err(bad()),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), GameError> {
        let fail = |msg: &str| Err(GameError::InvalidParameters(msg.to_owned()));
        match *self {
            GameSpec::Kuhn { pot, .. } if pot < 1 => fail("kuhn pot must be at least 1"),
            GameSpec::OshiZumo {
                coins,
                half_board,
                min_bid,
            } if min_bid < 1 || coins < min_bid || half_board < 1 => {
                fail("oshi zumo requires coins >= min_bid >= 1 and half_board >= 1")
            }
            GameSpec::SequentialBlotto { rounds, forces }
                if rounds == 0 || rounds % 2 != 0 || rounds > forces =>
            {
                fail("sequential blotto requires an even, positive number of rounds <= forces")
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<GameTree, GameError> {
        self.validate()?;
        match *self {
            GameSpec::PaperExample => Ok(paper_example()),
            GameSpec::MatchingPennies => Ok(matching_pennies()),
            GameSpec::Kuhn { pot, dummy: false } => kuhn(pot),
            GameSpec::Kuhn { pot, dummy: true } => Ok(duplicate_actions(&kuhn(pot)?, 3)?.game),
            GameSpec::Leduc { dummy } => leduc(dummy),
            GameSpec::OshiZumo {
                coins,
                half_board,
                min_bid,
            } => oshi_zumo(coins, half_board, min_bid),
            GameSpec::SequentialBlotto { rounds, forces } => sequential_blotto(rounds, forces),
        }
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family())?;
        match self {
            GameSpec::PaperExample | GameSpec::MatchingPennies => Ok(()),
            GameSpec::Kuhn { pot, dummy } => write!(f, ":pot={pot},dummy={dummy}"),
            GameSpec::Leduc { dummy } => write!(f, ":dummy={dummy}"),
            GameSpec::OshiZumo {
                coins,
                half_board,
                min_bid,
            } => write!(f, ":coins={coins},half_board={half_board},min_bid={min_bid}"),
            GameSpec::SequentialBlotto { rounds, forces } => {
                write!(f, ":rounds={rounds},forces={forces}")
            }
        }
    }
}

/// Parses `family` or `family:key=value,key=value`.
impl FromStr for GameSpec {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, params) = s.split_once(':').unwrap_or((s, ""));
        let mut spec = GameSpec::default_for(family.trim())
            .ok_or_else(|| GameError::InvalidParameters(format!("unknown game family {family:?}")))?;
        for kv in params.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| GameError::InvalidParameters(format!("expected key=value, got {kv:?}")))?;
            spec.set_param(k.trim(), v.trim())?;
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::validate_perfect_recall;

    #[test]
    fn spec_round_trips_through_text() {
        for text in [
            "paper-example",
            "kuhn:pot=4,dummy=true",
            "leduc:dummy=false",
            "oshi-zumo:coins=4,half_board=2,min_bid=1",
            "sequential-blotto:rounds=2,forces=3",
        ] {
            let spec: GameSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn spec_rejects_bad_parameters() {
        assert!("kuhn:pot=0".parse::<GameSpec>().is_err());
        assert!("oshi_zumo:coins=1,m=2".parse::<GameSpec>().is_err());
        assert!("blotto:rounds=3,forces=5".parse::<GameSpec>().is_err());
        assert!("blotto:rounds=6,forces=4".parse::<GameSpec>().is_err());
        assert!("chess".parse::<GameSpec>().is_err());
        assert!("kuhn:coins=3".parse::<GameSpec>().is_err());
    }

    #[test]
    fn paper_example_shape() {
        let game = paper_example();
        assert_eq!(game.num_nodes(), 7);
        assert_eq!(game.total_infosets(), 2);
        assert_eq!(game.delta(), 4.0);
        assert!(validate_perfect_recall(&game).is_valid());
    }
}
