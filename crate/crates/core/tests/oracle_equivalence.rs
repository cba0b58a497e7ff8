//! The dynamic program against full enumeration on generated games.

use proptest::prelude::*;
use qmv_power::{
    build_qmv, oracle_all, Engine, Fraction, QmvOptions, Roster, RuleExpr, Voter, VotingGame,
    WeightedRule,
};

#[derive(Debug, Clone)]
enum Shape {
    Population(u64),
    Seats(u64),
    Double {
        pop: u64,
        seats: u64,
        blocking: Option<u64>,
    },
    Either {
        pop: u64,
        seats: u64,
    },
}

fn voters() -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec(
        (0u64..80, prop_oneof![4 => Just(1u64), 1 => 1u64..5]),
        1..=12,
    )
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        (1u64..=100).prop_map(Shape::Population),
        (1u64..=100).prop_map(Shape::Seats),
        (1u64..=100, 1u64..=100, prop::option::of(1u64..=12)).prop_map(|(pop, seats, blocking)| {
            Shape::Double {
                pop,
                seats,
                blocking,
            }
        }),
        (1u64..=100, 1u64..=100).prop_map(|(pop, seats)| Shape::Either { pop, seats }),
    ]
}

/// Quotas are percentages of the totals, so every shape fits every roster.
fn build(weights: &[(u64, u64)], shape: &Shape) -> Option<VotingGame> {
    let roster = Roster::new(
        weights
            .iter()
            .enumerate()
            .map(|(k, &(p, s))| Voter::new(format!("v{k}"), format!("v{k}"), p).with_seats(s))
            .collect(),
    )
    .ok()?;
    let (tp, ts) = (roster.total_pop(), roster.total_seats());
    let pct = |x: u64, total: u64| (x * total).div_ceil(100).max(1);
    let game = match *shape {
        Shape::Population(x) => {
            VotingGame::new(roster, RuleExpr::Rule(WeightedRule::population(pct(x, tp))))
        }
        Shape::Seats(x) => VotingGame::new(roster, RuleExpr::Rule(WeightedRule::seats(pct(x, ts)))),
        Shape::Double {
            pop,
            seats,
            blocking,
        } => build_qmv(
            roster,
            QmvOptions {
                pop_fraction: Fraction::new(pop, 100).ok()?,
                seat_fraction: Fraction::new(seats, 100).ok()?,
                blocking_members: blocking.unwrap_or(1).min(ts),
                include_blocking: blocking.is_some(),
            },
        ),
        Shape::Either { pop, seats } => VotingGame::new(
            roster,
            RuleExpr::or([
                RuleExpr::Rule(WeightedRule::population(pct(pop, tp))),
                RuleExpr::Rule(WeightedRule::seats(pct(seats, ts))),
            ]),
        ),
    };
    game.ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engine_matches_enumeration(weights in voters(), shape in shape()) {
        let Some(game) = build(&weights, &shape) else { return Ok(()) };
        let exact = oracle_all(&game, 12).unwrap();
        let dp = Engine::default().compute_all(&game).unwrap();
        prop_assert_eq!(&dp.banzhaf, &exact.banzhaf);
        prop_assert_eq!(&dp.shapley_shubik, &exact.shapley_shubik);
        let seq = Engine::sequential().compute_all(&game).unwrap();
        prop_assert_eq!(seq, dp);
    }

    #[test]
    fn swing_tables_cover_half_the_coalitions(weights in voters(), shape in shape()) {
        let Some(game) = build(&weights, &shape) else { return Ok(()) };
        for voter in 0..game.n() {
            let table = Engine::default().swing_table(&game, voter).unwrap();
            prop_assert_eq!(table.total(), 1u128 << (game.n() - 1));
        }
    }
}
