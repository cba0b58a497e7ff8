//! Power index results shared by the DP engine and the brute-force oracle.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{VotingGame, WeightedRule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterInfo {
    pub id: String,
    pub name: String,
    pub pop_weight: u64,
    pub seat_weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameMeta {
    pub n: usize,
    pub total_pop: u64,
    pub total_seats: u64,
    pub rules: Vec<WeightedRule>,
    pub expr: String,
    pub blocking: bool,
}

impl GameMeta {
    pub fn of(game: &VotingGame) -> Self {
        let roster = game.roster();
        GameMeta {
            n: game.n(),
            total_pop: roster.total_pop(),
            total_seats: roster.total_seats(),
            rules: game.expr().rules(),
            expr: game.expr().to_string(),
            blocking: game.qmv_options().is_some_and(|o| o.include_blocking),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BanzhafPower {
    /// Number of coalitions in which each voter is critical.
    pub scores: Vec<BigUint>,
    /// `score / 2^(n-1)`
    pub values: Vec<BigRational>,
    /// `score / sum of scores`
    pub indices: Vec<BigRational>,
}

impl BanzhafPower {
    pub fn from_scores(scores: Vec<BigUint>) -> Result<Self> {
        let n = scores.len();
        let total: BigUint = scores.iter().sum();
        if total.is_zero() {
            return Err(Error::Normalization);
        }
        let half_space = BigInt::one() << (n - 1);
        let total = BigInt::from(total);
        let values = scores
            .iter()
            .map(|s| BigRational::new(BigInt::from(s.clone()), half_space.clone()))
            .collect();
        let indices = scores
            .iter()
            .map(|s| BigRational::new(BigInt::from(s.clone()), total.clone()))
            .collect();
        Ok(BanzhafPower {
            scores,
            values,
            indices,
        })
    }
}

/// Per-voter indices in roster order, as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerResult {
    pub voters: Vec<VoterInfo>,
    pub meta: GameMeta,
    pub banzhaf: Option<BanzhafPower>,
    pub shapley_shubik: Option<Vec<BigRational>>,
}

impl PowerResult {
    pub(crate) fn empty(game: &VotingGame) -> Self {
        PowerResult {
            voters: game
                .roster()
                .voters()
                .iter()
                .map(|v| VoterInfo {
                    id: v.id.clone(),
                    name: v.name.clone(),
                    pop_weight: v.pop_weight,
                    seat_weight: v.seat_weight,
                })
                .collect(),
            meta: GameMeta::of(game),
            banzhaf: None,
            shapley_shubik: None,
        }
    }

    pub fn n(&self) -> usize {
        self.voters.len()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.voters.iter().position(|v| v.id == id)
    }

    pub fn banzhaf_index(&self, id: &str) -> Option<&BigRational> {
        let k = self.position(id)?;
        self.banzhaf.as_ref().map(|b| &b.indices[k])
    }

    pub fn shapley(&self, id: &str) -> Option<&BigRational> {
        let k = self.position(id)?;
        self.shapley_shubik.as_ref().map(|s| &s[k])
    }

    pub fn index(&self, family: IndexFamily) -> Option<&[BigRational]> {
        match family {
            IndexFamily::Banzhaf => self.banzhaf.as_ref().map(|b| b.indices.as_slice()),
            IndexFamily::ShapleyShubik => self.shapley_shubik.as_deref(),
        }
    }

    /// Id of the voter with the largest index; ties go to the earliest voter.
    pub fn argmax(&self, family: IndexFamily) -> Option<&str> {
        let idx = self.index(family)?;
        let mut best = 0;
        for k in 1..idx.len() {
            if idx[k] > idx[best] {
                best = k;
            }
        }
        self.voters.get(best).map(|v| v.id.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexFamily {
    Banzhaf,
    ShapleyShubik,
}

impl IndexFamily {
    pub const ALL: [IndexFamily; 2] = [IndexFamily::Banzhaf, IndexFamily::ShapleyShubik];

    pub fn label(self) -> &'static str {
        match self {
            IndexFamily::Banzhaf => "banzhaf",
            IndexFamily::ShapleyShubik => "shapley_shubik",
        }
    }
}

impl std::fmt::Display for IndexFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

pub(crate) fn factorials(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for k in 1..=n {
        let next = &out[k - 1] * BigUint::from(k);
        out.push(next);
    }
    out
}

pub(crate) fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
