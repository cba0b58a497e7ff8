#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use qmv_power::{
    build_qmv, Fraction, IndexFamily, PowerResult, QmvOptions, Roster, RuleExpr, Voter, VotingGame,
    WeightedRule,
};
use rand::Rng;

/// EU27 rows as published: (id, banzhaf %, shapley-shubik %), in ranking order.
pub const EU27_PUBLISHED: [(&str, f64, f64); 27] = [
    ("DE", 12.21, 18.14),
    ("FR", 10.08, 13.60),
    ("IT", 8.77, 11.48),
    ("ES", 7.69, 9.27),
    ("PL", 6.21, 6.64),
    ("RO", 3.94, 3.81),
    ("NL", 3.79, 3.60),
    ("BE", 3.08, 2.62),
    ("CZ", 2.97, 2.47),
    ("SE", 2.93, 2.43),
    ("PT", 2.93, 2.42),
    ("GR", 2.92, 2.41),
    ("HU", 2.82, 2.28),
    ("AT", 2.76, 2.21),
    ("BG", 2.45, 1.78),
    ("DK", 2.39, 1.70),
    ("FI", 2.34, 1.65),
    ("SK", 2.33, 1.63),
    ("IE", 2.30, 1.59),
    ("HR", 2.14, 1.37),
    ("LT", 2.02, 1.21),
    ("SI", 1.93, 1.08),
    ("LV", 1.90, 1.05),
    ("EE", 1.84, 0.96),
    ("CY", 1.78, 0.89),
    ("LU", 1.75, 0.85),
    ("MT", 1.74, 0.83),
];

/// Bloc rows of the EU27 coalition table: (preset, banzhaf %, shapley-shubik %).
pub const EU27_BLOCS: [(&str, f64, f64); 4] = [
    ("franco_german", 18.35, 41.09),
    ("weimar", 21.74, 49.60),
    ("founders", 37.99, 58.64),
    ("v4", 14.93, 14.36),
];

pub fn pct(x: &BigRational) -> f64 {
    let scaled = x * BigRational::from_integer(BigInt::from(10_000_000_000i64));
    scaled.to_integer().to_f64().unwrap() / 1e8
}

pub fn ratio(num: u64, den: u64) -> Fraction {
    Fraction::new(num, den).unwrap()
}

/// A random game with up to `max_n` voters: population-only, seats-only,
/// double-majority, or double majority with a blocking clause.
pub fn random_game<R: Rng>(rng: &mut R, max_n: usize) -> VotingGame {
    loop {
        let n = rng.gen_range(1..=max_n);
        let voters: Vec<Voter> = (0..n)
            .map(|k| {
                let pop = if rng.gen_bool(0.1) {
                    0
                } else {
                    rng.gen_range(1..=60)
                };
                let seats = if rng.gen_bool(0.8) {
                    1
                } else {
                    rng.gen_range(1..=4)
                };
                Voter::new(format!("v{k}"), format!("voter {k}"), pop).with_seats(seats)
            })
            .collect();
        let Ok(roster) = Roster::new(voters) else {
            continue;
        };
        let frac = |rng: &mut R| ratio(rng.gen_range(1..=20), 20);
        let game = match rng.gen_range(0..4) {
            0 | 1 => {
                let total = if rng.gen_bool(0.5) {
                    roster.total_pop()
                } else {
                    roster.total_seats()
                };
                if total == 0 {
                    continue;
                }
                let q = rng.gen_range(1..=total);
                let rule = if total == roster.total_pop() {
                    WeightedRule::population(q)
                } else {
                    WeightedRule::seats(q)
                };
                VotingGame::new(roster, RuleExpr::Rule(rule))
            }
            k => {
                let options = QmvOptions {
                    pop_fraction: frac(rng),
                    seat_fraction: frac(rng),
                    blocking_members: rng.gen_range(1..=n as u64),
                    include_blocking: k == 3,
                };
                build_qmv(roster, options)
            }
        };
        if let Ok(g) = game {
            return g;
        }
    }
}

/// Efficiency, symmetry and local monotonicity of both index families.
pub fn check_axioms(game: &VotingGame, result: &PowerResult) -> Result<(), String> {
    let voters = game.roster().voters();
    for family in IndexFamily::ALL {
        let Some(idx) = result.index(family) else {
            continue;
        };
        let sum: BigRational = idx.iter().fold(BigRational::zero(), |a, b| a + b);
        if !sum.is_one() {
            return Err(format!("{}: indices sum to {sum}", family.label()));
        }
        for (i, a) in voters.iter().enumerate() {
            for (j, b) in voters.iter().enumerate() {
                let dominates = a.pop_weight >= b.pop_weight && a.seat_weight >= b.seat_weight;
                if dominates && idx[i] < idx[j] {
                    return Err(format!(
                        "{}: {} outweighs {} but has less power",
                        family.label(),
                        a.id,
                        b.id
                    ));
                }
                let same = a.pop_weight == b.pop_weight && a.seat_weight == b.seat_weight;
                if same && idx[i] != idx[j] {
                    return Err(format!("{}: {} and {} differ", family.label(), a.id, b.id));
                }
            }
        }
    }
    Ok(())
}
