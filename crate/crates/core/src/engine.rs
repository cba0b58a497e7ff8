//! Exact Banzhaf and Shapley-Shubik indices by dynamic programming.
//!
//! For each voter `i` the engine counts the coalitions `S` of the other
//! voters by `(|S|, excess seats, population)`, where excess seats are
//! `seats(S) - |S|` and are non-zero only when blocs are present. Every
//! rule in a game depends only on the seat and population totals, so a
//! cell of this table is either entirely swing or entirely not, and the
//! winning status of each `(seats, pop)` point is evaluated once per game.
//!
//! Counts are kept in `u128`: a cell never exceeds `2^(n-1)`, so the table
//! is exact for up to 128 voters. Factorial weights and indices use big
//! integers and rationals.
//!
//! The population axis saturates at the largest population quota. Every
//! population rule answers the same for all totals at or above it, so the
//! last cell aggregates all heavier coalitions without changing any value.

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{VotingGame, WeightKind};
use crate::power::{factorials, ratio, BanzhafPower, PowerResult};

/// Default per-table memory budget, enough for 2 * 10^5 population cells at n = 36.
pub const DEFAULT_MEMORY_BUDGET: usize = 128 << 20;

const MAX_PLAYERS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engine {
    pub memory_budget: usize,
    pub parallel: bool,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            memory_budget: DEFAULT_MEMORY_BUDGET,
            parallel: true,
        }
    }
}

/// Coalitions of all voters except one, counted by size, excess seats and
/// (saturated) population.
#[derive(Debug, Clone)]
pub struct SwingTable {
    voter: usize,
    sizes: usize,
    excess_cells: usize,
    pop_cells: usize,
    counts: Vec<u128>,
}

impl SwingTable {
    pub fn voter(&self) -> usize {
        self.voter
    }

    /// Coalition sizes covered: `0..sizes`.
    pub fn sizes(&self) -> usize {
        self.sizes
    }

    pub fn excess_cells(&self) -> usize {
        self.excess_cells
    }

    pub fn pop_cells(&self) -> usize {
        self.pop_cells
    }

    pub fn count(&self, size: usize, excess: usize, pop: usize) -> u128 {
        self.counts[(size * self.excess_cells + excess) * self.pop_cells + pop]
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    /// Non-zero cells as `(size, seats, pop, count)`.
    pub fn cells(&self) -> impl Iterator<Item = (usize, u64, u64, u128)> + '_ {
        let per_size = self.excess_cells * self.pop_cells;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(k, &c)| {
                let t = k / per_size;
                let e = (k % per_size) / self.pop_cells;
                let w = k % self.pop_cells;
                (t, (t + e) as u64, w as u64, c)
            })
    }
}

/// Winning status of every `(seats, saturated pop)` point.
struct WinGrid {
    pop_cap: u64,
    pop_cells: usize,
    wins: Vec<bool>,
}

impl WinGrid {
    fn new(game: &VotingGame) -> Self {
        let pop_cap = game.expr().max_quota(WeightKind::Population).unwrap_or(0);
        let pop_cells = pop_cap as usize + 1;
        let seat_cells = game.roster().total_seats() as usize + 1;
        let mut wins = Vec::with_capacity(seat_cells * pop_cells);
        for s in 0..seat_cells as u64 {
            wins.extend((0..=pop_cap).map(|w| game.wins(s, w)));
        }
        WinGrid {
            pop_cap,
            pop_cells,
            wins,
        }
    }

    fn clamp(&self, pop: u64) -> usize {
        pop.min(self.pop_cap) as usize
    }

    fn wins(&self, seats: u64, pop: usize) -> bool {
        self.wins[seats as usize * self.pop_cells + pop]
    }
}

/// Swing counts of one voter, bucketed by the size of the coalition joined.
struct Swings {
    by_size: Vec<u128>,
}

impl Swings {
    fn score(&self) -> u128 {
        self.by_size.iter().sum()
    }
}

impl Engine {
    pub fn sequential() -> Self {
        Engine {
            parallel: false,
            ..Default::default()
        }
    }

    pub fn with_memory_budget(mut self, bytes: usize) -> Self {
        self.memory_budget = bytes;
        self
    }

    pub fn banzhaf(&self, game: &VotingGame) -> Result<PowerResult> {
        let swings = self.all_swings(game)?;
        let mut out = PowerResult::empty(game);
        out.banzhaf = Some(banzhaf_from(&swings)?);
        Ok(out)
    }

    pub fn shapley_shubik(&self, game: &VotingGame) -> Result<PowerResult> {
        let swings = self.all_swings(game)?;
        let mut out = PowerResult::empty(game);
        out.shapley_shubik = Some(shapley_from(&swings)?);
        Ok(out)
    }

    /// Both index families from one set of swing tables.
    pub fn compute_all(&self, game: &VotingGame) -> Result<PowerResult> {
        let swings = self.all_swings(game)?;
        let mut out = PowerResult::empty(game);
        out.banzhaf = Some(banzhaf_from(&swings)?);
        out.shapley_shubik = Some(shapley_from(&swings)?);
        Ok(out)
    }

    pub fn swing_table(&self, game: &VotingGame, voter: usize) -> Result<SwingTable> {
        assert!(voter < game.n(), "voter position {voter} out of range");
        self.check_budget(game)?;
        let grid = WinGrid::new(game);
        Ok(build_table(game, voter, &grid))
    }

    fn check_budget(&self, game: &VotingGame) -> Result<()> {
        let n = game.n();
        let roster = game.roster();
        let excess_cells = (roster.total_seats() - n as u64) as usize + 1;
        let pop_cells = game
            .expr()
            .max_quota(WeightKind::Population)
            .map_or(1, |q| q as usize + 1);
        let bytes = n as u128
            * excess_cells as u128
            * pop_cells as u128
            * std::mem::size_of::<u128>() as u128;
        if n > MAX_PLAYERS || bytes > self.memory_budget as u128 {
            return Err(Error::Resource {
                players: n,
                excess_seats: excess_cells,
                pop_cells,
                bytes,
                budget: self.memory_budget,
            });
        }
        Ok(())
    }

    fn all_swings(&self, game: &VotingGame) -> Result<Vec<Swings>> {
        self.check_budget(game)?;
        let grid = WinGrid::new(game);
        let one = |i: usize| classify(game, &build_table(game, i, &grid), &grid);
        let swings = if self.parallel {
            (0..game.n()).into_par_iter().map(one).collect()
        } else {
            (0..game.n()).map(one).collect()
        };
        Ok(swings)
    }
}

fn build_table(game: &VotingGame, voter: usize, grid: &WinGrid) -> SwingTable {
    let voters = game.roster().voters();
    let n = voters.len();
    let others: Vec<(usize, usize)> = voters
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != voter)
        .map(|(_, v)| (grid.clamp(v.pop_weight), (v.seat_weight - 1) as usize))
        .collect();
    let excess_cells = others.iter().map(|&(_, x)| x).sum::<usize>() + 1;
    let pop_cells = grid.pop_cells;
    let cap = pop_cells - 1;
    let layer = excess_cells * pop_cells;

    let mut counts = vec![0u128; n * layer];
    counts[0] = 1;
    let mut excess_seen = 0;
    for (added, &(pop, extra)) in others.iter().enumerate() {
        // Sizes only grow, so walking t downwards reads each layer before it is written.
        for t in (0..=added).rev() {
            let (lower, upper) = counts.split_at_mut((t + 1) * layer);
            let src = &lower[t * layer..];
            let dst = &mut upper[..layer];
            for e in 0..=excess_seen {
                let from = &src[e * pop_cells..(e + 1) * pop_cells];
                let to = &mut dst[(e + extra) * pop_cells..(e + extra + 1) * pop_cells];
                // pop <= cap; sources from `split` on land in the saturated cell.
                let split = cap - pop + 1;
                for w in 0..split {
                    to[w + pop] += from[w];
                }
                let saturated: u128 = from[split..].iter().sum();
                to[cap] += saturated;
            }
        }
        excess_seen += extra;
    }
    SwingTable {
        voter,
        sizes: n,
        excess_cells,
        pop_cells,
        counts,
    }
}

fn classify(game: &VotingGame, table: &SwingTable, grid: &WinGrid) -> Swings {
    let me = &game.roster().voters()[table.voter];
    let mut by_size = vec![0u128; table.sizes];
    for (t, seats, pop, count) in table.cells() {
        let pop = pop as usize;
        if !grid.wins(seats, pop)
            && grid.wins(
                seats + me.seat_weight,
                grid.clamp(pop as u64 + me.pop_weight),
            )
        {
            by_size[t] += count;
        }
    }
    Swings { by_size }
}

fn banzhaf_from(swings: &[Swings]) -> Result<BanzhafPower> {
    BanzhafPower::from_scores(swings.iter().map(|s| BigUint::from(s.score())).collect())
}

/// `phi_i = sum_t swings_i(t) * t! (n-1-t)! / n!`
fn shapley_from(swings: &[Swings]) -> Result<Vec<BigRational>> {
    let n = swings.len();
    let fact = factorials(n);
    let numerators: Vec<BigUint> = swings
        .iter()
        .map(|s| {
            s.by_size
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(t, &c)| BigUint::from(c) * &fact[t] * &fact[n - 1 - t])
                .sum()
        })
        .collect();
    if numerators.iter().all(|x| x == &BigUint::ZERO) {
        return Err(Error::Normalization);
    }
    Ok(numerators
        .into_iter()
        .map(|x| ratio(x, fact[n].clone()))
        .collect())
}

pub fn banzhaf(game: &VotingGame) -> Result<PowerResult> {
    Engine::default().banzhaf(game)
}

pub fn shapley_shubik(game: &VotingGame) -> Result<PowerResult> {
    Engine::default().shapley_shubik(game)
}

pub fn compute_all(game: &VotingGame) -> Result<PowerResult> {
    Engine::default().compute_all(game)
}
