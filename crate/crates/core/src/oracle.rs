//! Brute-force reference indices over all `2^n` coalitions.
//!
//! Coalitions are visited in Gray-code order so each step adds or removes
//! one voter and the coalition totals update in O(1). The winning status
//! of every coalition is stored in a bitset; a second pass over all masks
//! counts swings directly from the definition. Nothing here is shared with
//! the DP engine beyond the game's own characteristic function.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::VotingGame;
use crate::power::{factorials, ratio, BanzhafPower, PowerResult};

pub const DEFAULT_LIMIT: usize = 22;

/// Hard ceiling regardless of the requested limit (the win bitset is `2^n` bits).
const MAX_VOTERS: usize = 32;

struct Enumeration {
    n: usize,
    wins: Vec<u64>,
}

impl Enumeration {
    fn run(game: &VotingGame, limit: usize) -> Result<Self> {
        let n = game.n();
        if n > limit || n > MAX_VOTERS {
            return Err(Error::OracleLimit {
                n,
                limit: limit.min(MAX_VOTERS),
            });
        }
        let voters = game.roster().voters();
        let size = 1u64 << n;
        let mut wins = vec![0u64; (size as usize).div_ceil(64)];
        let (mut seats, mut pop) = (0u64, 0u64);
        let mut mask = 0u64;
        let mut record = |mask: u64, seats: u64, pop: u64| {
            if game.wins(seats, pop) {
                wins[(mask / 64) as usize] |= 1 << (mask % 64);
            }
        };
        record(mask, seats, pop);
        for step in 1..size {
            let flip = step.trailing_zeros() as usize;
            let v = &voters[flip];
            mask ^= 1 << flip;
            if mask >> flip & 1 == 1 {
                seats += v.seat_weight;
                pop += v.pop_weight;
            } else {
                seats -= v.seat_weight;
                pop -= v.pop_weight;
            }
            record(mask, seats, pop);
        }
        Ok(Enumeration { n, wins })
    }

    fn wins(&self, mask: u64) -> bool {
        self.wins[(mask / 64) as usize] >> (mask % 64) & 1 == 1
    }

    /// Visits every `(voter, losing coalition without voter)` pair that the voter turns winning.
    fn for_each_swing(&self, mut f: impl FnMut(usize, u32)) {
        for mask in 0..1u64 << self.n {
            if self.wins(mask) {
                continue;
            }
            let size = mask.count_ones();
            for i in 0..self.n {
                if mask >> i & 1 == 0 && self.wins(mask | 1 << i) {
                    f(i, size);
                }
            }
        }
    }
}

pub fn oracle_banzhaf(game: &VotingGame, limit: usize) -> Result<PowerResult> {
    let e = Enumeration::run(game, limit)?;
    let mut scores = vec![0u64; e.n];
    e.for_each_swing(|i, _| scores[i] += 1);
    let mut out = PowerResult::empty(game);
    out.banzhaf = Some(BanzhafPower::from_scores(
        scores.into_iter().map(BigUint::from).collect(),
    )?);
    Ok(out)
}

pub fn oracle_shapley(game: &VotingGame, limit: usize) -> Result<PowerResult> {
    let e = Enumeration::run(game, limit)?;
    let n = e.n;
    let fact = factorials(n);
    let mut pivots = vec![BigUint::zero(); n];
    // A swing into a coalition of size s is pivotal in s! (n-1-s)! orderings.
    e.for_each_swing(|i, s| {
        let s = s as usize;
        pivots[i] += &fact[s] * &fact[n - 1 - s];
    });
    if pivots.iter().all(Zero::is_zero) {
        return Err(Error::Normalization);
    }
    let mut out = PowerResult::empty(game);
    out.shapley_shubik = Some(
        pivots
            .into_iter()
            .map(|p| ratio(p, fact[n].clone()))
            .collect(),
    );
    Ok(out)
}

/// Both families from a single enumeration.
pub fn oracle_all(game: &VotingGame, limit: usize) -> Result<PowerResult> {
    let e = Enumeration::run(game, limit)?;
    let n = e.n;
    let mut by_size = vec![vec![0u64; n]; n];
    e.for_each_swing(|i, s| by_size[i][s as usize] += 1);
    let fact = factorials(n);
    let scores: Vec<BigUint> = by_size
        .iter()
        .map(|row| BigUint::from(row.iter().sum::<u64>()))
        .collect();
    let pivots: Vec<BigUint> = by_size
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(s, &c)| BigUint::from(c) * &fact[s] * &fact[n - 1 - s])
                .sum()
        })
        .collect();
    let mut out = PowerResult::empty(game);
    out.banzhaf = Some(BanzhafPower::from_scores(scores)?);
    out.shapley_shubik = Some(
        pivots
            .into_iter()
            .map(|p| ratio(p, fact[n].clone()))
            .collect(),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Roster, Voter, WeightedRule};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pop_game(weights: &[u64], quota: u64) -> VotingGame {
        let voters = weights
            .iter()
            .enumerate()
            .map(|(k, &w)| Voter::new(format!("P{k}"), format!("P{k}"), w))
            .collect();
        VotingGame::new(
            Roster::new(voters).unwrap(),
            WeightedRule::population(quota).into(),
        )
        .unwrap()
    }

    #[test]
    fn three_voter_game() {
        let g = pop_game(&[50, 49, 1], 51);
        let b = oracle_banzhaf(&g, DEFAULT_LIMIT).unwrap().banzhaf.unwrap();
        assert_eq!(b.scores, [3u32, 1, 1].map(BigUint::from));
        let s = oracle_shapley(&g, DEFAULT_LIMIT)
            .unwrap()
            .shapley_shubik
            .unwrap();
        assert_eq!(s, [q(2, 3), q(1, 6), q(1, 6)]);
    }

    #[test]
    fn eec_luxembourg_scores_zero() {
        let voters = [
            ("FR", 4),
            ("DE", 4),
            ("IT", 4),
            ("BE", 2),
            ("NL", 2),
            ("LU", 1),
        ]
        .into_iter()
        .map(|(id, w)| Voter::new(id, id, w).with_seats(w))
        .collect();
        let g =
            VotingGame::new(Roster::new(voters).unwrap(), WeightedRule::seats(12).into()).unwrap();
        let b = oracle_banzhaf(&g, DEFAULT_LIMIT).unwrap().banzhaf.unwrap();
        assert!(b.scores[5].is_zero());
    }

    #[test]
    fn symmetric_scores_equal() {
        let b = oracle_banzhaf(&pop_game(&[3; 7], 12), DEFAULT_LIMIT)
            .unwrap()
            .banzhaf
            .unwrap();
        assert!(b.scores.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn dictator() {
        let s = oracle_shapley(&pop_game(&[10, 1, 1, 1], 10), DEFAULT_LIMIT)
            .unwrap()
            .shapley_shubik
            .unwrap();
        assert_eq!(s, [q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn refuses_large_games() {
        let g = pop_game(&[1; 23], 12);
        assert_eq!(
            oracle_banzhaf(&g, DEFAULT_LIMIT).unwrap_err(),
            Error::OracleLimit { n: 23, limit: 22 }
        );
        assert!(oracle_banzhaf(&pop_game(&[1; 10], 6), 9).is_err());
    }

    #[test]
    fn combined_matches_separate() {
        let g = pop_game(&[9, 8, 6, 4, 2, 1, 1], 16);
        let all = oracle_all(&g, DEFAULT_LIMIT).unwrap();
        assert_eq!(
            all.banzhaf,
            oracle_banzhaf(&g, DEFAULT_LIMIT).unwrap().banzhaf
        );
        assert_eq!(
            all.shapley_shubik,
            oracle_shapley(&g, DEFAULT_LIMIT).unwrap().shapley_shubik
        );
    }
}
