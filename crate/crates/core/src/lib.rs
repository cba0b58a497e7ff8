//! Exact voting power in weighted voting games with several quota rules,
//! such as qualified-majority voting in the Council of the EU.
//!
//! A game is a [`Roster`] of voters with population and seat weights plus a
//! [`RuleExpr`] over weighted rules. [`Engine`] computes exact Banzhaf and
//! Shapley-Shubik indices by dynamic programming over coalition size, seat
//! count and (saturated) population; [`oracle`] provides brute-force
//! enumeration for cross-checking small games.
//!
//! ```
//! use qmv_power::{build_qmv, compute_all, QmvOptions, Roster, Voter};
//!
//! let roster = Roster::new(vec![
//!     Voter::new("A", "A", 50),
//!     Voter::new("B", "B", 30),
//!     Voter::new("C", "C", 20),
//! ])
//! .unwrap();
//! let game = build_qmv(roster, QmvOptions::default()).unwrap();
//! let power = compute_all(&game).unwrap();
//! // A is in every winning coalition: {A, B}, {A, C}, {A, B, C}.
//! assert_eq!(power.banzhaf_index("A").unwrap().to_string(), "3/5");
//! ```

pub mod artifacts;
pub mod data;
pub mod engine;
pub mod error;
pub mod game;
pub mod oracle;
pub mod power;
pub mod report;
pub mod scenarios;

pub use engine::{banzhaf, compute_all, shapley_shubik, Engine, SwingTable};
pub use error::{Error, Result};
pub use game::{
    build_qmv, merge_blocs, quota_from_fraction, Bloc, BlocPartition, Fraction, QmvOptions, Roster,
    RuleExpr, Voter, VotingGame, WeightKind, WeightedRule,
};
pub use oracle::{oracle_all, oracle_banzhaf, oracle_shapley};
pub use power::{BanzhafPower, IndexFamily, PowerResult};
pub use scenarios::{compare, detect_paradox, Scenario};
