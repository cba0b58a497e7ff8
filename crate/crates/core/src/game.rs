//! Voters, weighted threshold rules and their AND/OR composition.
//!
//! A [`VotingGame`] is a simple game whose characteristic function is a
//! monotone Boolean combination of weighted threshold rules. Every rule
//! looks only at one of two coalition totals (population weight or seat
//! weight), so a coalition's value is a function of `(seats, pop)` alone.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Voter {
    pub id: String,
    pub name: String,
    /// Population in the roster's quantised units.
    pub pop_weight: u64,
    /// Number of member states represented (1 unless the voter is a bloc).
    pub seat_weight: u64,
}

impl Voter {
    pub fn new(id: impl Into<String>, name: impl Into<String>, pop_weight: u64) -> Self {
        Voter {
            id: id.into(),
            name: name.into(),
            pop_weight,
            seat_weight: 1,
        }
    }

    pub fn with_seats(mut self, seat_weight: u64) -> Self {
        self.seat_weight = seat_weight;
        self
    }
}

/// Non-empty ordered list of voters with unique ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roster {
    voters: Vec<Voter>,
    total_pop: u64,
    total_seats: u64,
}

impl Roster {
    pub fn new(voters: Vec<Voter>) -> Result<Self> {
        if voters.is_empty() {
            return Err(Error::Invalid("roster has no voters".into()));
        }
        let mut seen = HashSet::with_capacity(voters.len());
        let mut total_pop = 0u64;
        let mut total_seats = 0u64;
        for v in &voters {
            if v.id.is_empty() {
                return Err(Error::Invalid("voter id is empty".into()));
            }
            if !seen.insert(v.id.as_str()) {
                return Err(Error::DuplicateVoter(v.id.clone()));
            }
            if v.seat_weight == 0 {
                return Err(Error::Invalid(format!(
                    "voter `{}` has seat weight 0 (must be at least 1)",
                    v.id
                )));
            }
            total_pop = total_pop
                .checked_add(v.pop_weight)
                .ok_or_else(|| Error::Invalid("total population weight overflows u64".into()))?;
            total_seats = total_seats
                .checked_add(v.seat_weight)
                .ok_or_else(|| Error::Invalid("total seat weight overflows u64".into()))?;
        }
        Ok(Roster {
            voters,
            total_pop,
            total_seats,
        })
    }

    pub fn voters(&self) -> &[Voter] {
        &self.voters
    }

    pub fn len(&self) -> usize {
        self.voters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.voters.is_empty()
    }

    pub fn total_pop(&self) -> u64 {
        self.total_pop
    }

    pub fn total_seats(&self) -> u64 {
        self.total_seats
    }

    pub fn total(&self, kind: WeightKind) -> u64 {
        match kind {
            WeightKind::Population => self.total_pop,
            WeightKind::Seats => self.total_seats,
        }
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.voters.iter().position(|v| v.id == id)
    }

    pub fn get(&self, id: &str) -> Option<&Voter> {
        self.voters.iter().find(|v| v.id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.voters.iter().map(|v| v.id.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Population,
    Seats,
}

impl WeightKind {
    pub fn of(self, voter: &Voter) -> u64 {
        match self {
            WeightKind::Population => voter.pop_weight,
            WeightKind::Seats => voter.seat_weight,
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightKind::Population => "pop",
            WeightKind::Seats => "seats",
        })
    }
}

/// `sum of weight_kind over the coalition >= quota`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightedRule {
    pub weight_kind: WeightKind,
    pub quota: u64,
}

impl WeightedRule {
    pub fn population(quota: u64) -> Self {
        WeightedRule {
            weight_kind: WeightKind::Population,
            quota,
        }
    }

    pub fn seats(quota: u64) -> Self {
        WeightedRule {
            weight_kind: WeightKind::Seats,
            quota,
        }
    }

    pub fn passes(&self, seats: u64, pop: u64) -> bool {
        match self.weight_kind {
            WeightKind::Population => pop >= self.quota,
            WeightKind::Seats => seats >= self.quota,
        }
    }
}

impl fmt::Display for WeightedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} >= {}", self.weight_kind, self.quota)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleExpr {
    Rule(WeightedRule),
    All(Vec<RuleExpr>),
    Any(Vec<RuleExpr>),
}

impl RuleExpr {
    pub fn and(children: impl IntoIterator<Item = RuleExpr>) -> Self {
        RuleExpr::All(children.into_iter().collect())
    }

    pub fn or(children: impl IntoIterator<Item = RuleExpr>) -> Self {
        RuleExpr::Any(children.into_iter().collect())
    }

    /// Value of the expression for a coalition with the given totals.
    pub fn eval(&self, seats: u64, pop: u64) -> bool {
        match self {
            RuleExpr::Rule(r) => r.passes(seats, pop),
            RuleExpr::All(cs) => cs.iter().all(|c| c.eval(seats, pop)),
            RuleExpr::Any(cs) => cs.iter().any(|c| c.eval(seats, pop)),
        }
    }

    /// Leaves in left-to-right order.
    pub fn rules(&self) -> Vec<WeightedRule> {
        let mut out = Vec::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut Vec<WeightedRule>) {
        match self {
            RuleExpr::Rule(r) => out.push(*r),
            RuleExpr::All(cs) | RuleExpr::Any(cs) => cs.iter().for_each(|c| c.collect_rules(out)),
        }
    }

    /// Largest quota among leaves of `kind`, if any leaf has that kind.
    pub fn max_quota(&self, kind: WeightKind) -> Option<u64> {
        self.rules()
            .into_iter()
            .filter(|r| r.weight_kind == kind)
            .map(|r| r.quota)
            .max()
    }

    fn check_shape(&self) -> Result<()> {
        match self {
            RuleExpr::Rule(_) => Ok(()),
            RuleExpr::All(cs) | RuleExpr::Any(cs) => {
                if cs.len() < 2 {
                    return Err(Error::InvalidGame(
                        "AND/OR nodes need at least two children".into(),
                    ));
                }
                cs.iter().try_for_each(RuleExpr::check_shape)
            }
        }
    }
}

impl From<WeightedRule> for RuleExpr {
    fn from(r: WeightedRule) -> Self {
        RuleExpr::Rule(r)
    }
}

impl fmt::Display for RuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (cs, op) = match self {
            RuleExpr::Rule(r) => return write!(f, "{r}"),
            RuleExpr::All(cs) => (cs, " & "),
            RuleExpr::Any(cs) => (cs, " | "),
        };
        for (k, c) in cs.iter().enumerate() {
            if k > 0 {
                f.write_str(op)?;
            }
            match c {
                RuleExpr::Rule(_) => write!(f, "{c}")?,
                _ => write!(f, "({c})")?,
            }
        }
        Ok(())
    }
}

/// Exact fraction in `(0, 1]`, written `num/den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::Invalid(format!(
                "fraction {num}/{den} is not in (0, 1]"
            )));
        }
        Ok(Fraction { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// True iff `part / total >= self`.
    pub fn reached_by(&self, part: u64, total: u64) -> bool {
        part as u128 * self.den as u128 >= self.num as u128 * total as u128
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("`{s}` is not a fraction of the form num/den"));
        let (n, d) = s.trim().split_once('/').ok_or_else(bad)?;
        let num = n.trim().parse::<u64>().map_err(|_| bad())?;
        let den = d.trim().parse::<u64>().map_err(|_| bad())?;
        Fraction::new(num, den)
    }
}

/// Smallest `q` with `q / total >= fraction`, i.e. `ceil(fraction * total)`.
pub fn quota_from_fraction(total: u64, fraction: Fraction) -> u64 {
    let num = fraction.num as u128 * total as u128;
    let den = fraction.den as u128;
    // ceil(num / den) <= total, so the cast back is lossless.
    num.div_ceil(den) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QmvOptions {
    pub pop_fraction: Fraction,
    pub seat_fraction: Fraction,
    pub blocking_members: u64,
    pub include_blocking: bool,
}

impl Default for QmvOptions {
    fn default() -> Self {
        QmvOptions {
            pop_fraction: Fraction { num: 65, den: 100 },
            seat_fraction: Fraction { num: 55, den: 100 },
            blocking_members: 4,
            include_blocking: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VotingGame {
    roster: Roster,
    expr: RuleExpr,
    qmv: Option<QmvOptions>,
}

impl VotingGame {
    pub fn new(roster: Roster, expr: RuleExpr) -> Result<Self> {
        expr.check_shape()?;
        for rule in expr.rules() {
            let total = roster.total(rule.weight_kind);
            if rule.quota == 0 || rule.quota > total {
                return Err(Error::InvalidGame(format!(
                    "quota {} for `{}` rule is outside 1..={total}",
                    rule.quota, rule.weight_kind
                )));
            }
        }
        if expr.eval(0, 0) {
            return Err(Error::InvalidGame("the empty coalition wins".into()));
        }
        if !expr.eval(roster.total_seats(), roster.total_pop()) {
            return Err(Error::InvalidGame("the grand coalition loses".into()));
        }
        Ok(VotingGame {
            roster,
            expr,
            qmv: None,
        })
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn expr(&self) -> &RuleExpr {
        &self.expr
    }

    /// Options used when the game came from [`build_qmv`].
    pub fn qmv_options(&self) -> Option<&QmvOptions> {
        self.qmv.as_ref()
    }

    pub fn n(&self) -> usize {
        self.roster.len()
    }

    /// Value of the coalition with these totals.
    pub fn wins(&self, seats: u64, pop: u64) -> bool {
        self.expr.eval(seats, pop)
    }

    /// Characteristic function over a set of voter ids.
    pub fn evaluate<'a, I>(&self, coalition: I) -> Result<bool>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut members = HashSet::new();
        let (mut seats, mut pop) = (0u64, 0u64);
        for id in coalition {
            let voter = self
                .roster
                .get(id)
                .ok_or_else(|| Error::UnknownVoter(id.to_string()))?;
            if members.insert(id) {
                seats += voter.seat_weight;
                pop += voter.pop_weight;
            }
        }
        Ok(self.wins(seats, pop))
    }

    /// Characteristic function over roster positions; positions must be distinct.
    pub fn evaluate_positions(&self, coalition: &[usize]) -> bool {
        let voters = self.roster.voters();
        let (seats, pop) = coalition.iter().fold((0, 0), |(s, p), &k| {
            (s + voters[k].seat_weight, p + voters[k].pop_weight)
        });
        self.wins(seats, pop)
    }
}

/// `(pop >= q1 & seats >= q2)`, or with `| seats >= total_seats - (blocking_members - 1)` appended.
pub fn build_qmv(roster: Roster, options: QmvOptions) -> Result<VotingGame> {
    if roster.total_pop() == 0 {
        return Err(Error::InvalidGame(
            "total population weight is 0; the population rule is degenerate".into(),
        ));
    }
    let pop_rule = WeightedRule::population(quota_from_fraction(
        roster.total_pop(),
        options.pop_fraction,
    ));
    let seat_rule = WeightedRule::seats(quota_from_fraction(
        roster.total_seats(),
        options.seat_fraction,
    ));
    let majority = RuleExpr::and([pop_rule.into(), seat_rule.into()]);
    let expr = if options.include_blocking {
        if options.blocking_members == 0 || options.blocking_members > roster.total_seats() {
            return Err(Error::InvalidGame(format!(
                "blocking minority of {} members is outside 1..={}",
                options.blocking_members,
                roster.total_seats()
            )));
        }
        let block_rule = WeightedRule::seats(roster.total_seats() - (options.blocking_members - 1));
        RuleExpr::or([majority, block_rule.into()])
    } else {
        majority
    };
    let mut game = VotingGame::new(roster, expr)?;
    game.qmv = Some(options);
    Ok(game)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bloc {
    /// Voter id the merged bloc takes.
    pub id: String,
    pub name: String,
    pub members: Vec<String>,
}

impl Bloc {
    pub fn new<S: Into<String>>(
        id: impl Into<String>,
        name: impl Into<String>,
        members: impl IntoIterator<Item = S>,
    ) -> Self {
        Bloc {
            id: id.into(),
            name: name.into(),
            members: members.into_iter().map(Into::into).collect(),
        }
    }
}

/// Disjoint blocs; voters not listed stay singletons.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlocPartition {
    pub blocs: Vec<Bloc>,
}

impl BlocPartition {
    pub fn new(blocs: Vec<Bloc>) -> Self {
        BlocPartition { blocs }
    }

    pub fn is_empty(&self) -> bool {
        self.blocs.is_empty()
    }

    /// Pairwise disjointness and non-emptiness, independent of any roster.
    pub fn check_disjoint(&self) -> Result<()> {
        let mut owner: HashMap<&str, &str> = HashMap::new();
        for bloc in &self.blocs {
            if bloc.members.is_empty() {
                return Err(Error::Invalid(format!("bloc `{}` has no members", bloc.id)));
            }
            for m in &bloc.members {
                if let Some(first) = owner.insert(m.as_str(), bloc.id.as_str()) {
                    return Err(Error::OverlappingBlocs {
                        id: m.clone(),
                        first: first.to_string(),
                        second: bloc.id.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self, roster: &Roster) -> Result<()> {
        self.check_disjoint()?;
        let mut merged_ids = HashSet::new();
        for bloc in &self.blocs {
            for m in &bloc.members {
                if roster.get(m).is_none() {
                    return Err(Error::UnknownVoter(m.clone()));
                }
            }
            if !merged_ids.insert(bloc.id.as_str()) {
                return Err(Error::DuplicateVoter(bloc.id.clone()));
            }
        }
        let absorbed: HashSet<&str> = self
            .blocs
            .iter()
            .flat_map(|b| b.members.iter().map(String::as_str))
            .collect();
        for bloc in &self.blocs {
            if roster.get(&bloc.id).is_some() && !absorbed.contains(bloc.id.as_str()) {
                return Err(Error::DuplicateVoter(bloc.id.clone()));
            }
        }
        Ok(())
    }
}

/// Replaces each bloc by one voter carrying the summed weights.
///
/// The merged voter takes the roster position of the bloc's first member.
pub fn merge_blocs(roster: &Roster, partition: &BlocPartition) -> Result<Roster> {
    partition.validate(roster)?;
    if partition.is_empty() {
        return Ok(roster.clone());
    }
    let mut bloc_of: HashMap<&str, usize> = HashMap::new();
    for (k, bloc) in partition.blocs.iter().enumerate() {
        for m in &bloc.members {
            bloc_of.insert(m.as_str(), k);
        }
    }
    let mut emitted = vec![false; partition.blocs.len()];
    let mut voters = Vec::with_capacity(roster.len());
    for v in roster.voters() {
        match bloc_of.get(v.id.as_str()) {
            None => voters.push(v.clone()),
            Some(&k) if !emitted[k] => {
                emitted[k] = true;
                let bloc = &partition.blocs[k];
                let members = bloc.members.iter().filter_map(|m| roster.get(m));
                let (pop, seats) =
                    members.fold((0, 0), |(p, s), m| (p + m.pop_weight, s + m.seat_weight));
                voters.push(Voter {
                    id: bloc.id.clone(),
                    name: bloc.name.clone(),
                    pop_weight: pop,
                    seat_weight: seats,
                });
            }
            Some(_) => {}
        }
    }
    Roster::new(voters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eec() -> VotingGame {
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
        VotingGame::new(Roster::new(voters).unwrap(), WeightedRule::seats(12).into()).unwrap()
    }

    #[test]
    fn eec_benelux_loses() {
        let g = eec();
        assert!(!g.evaluate(["BE", "NL", "LU"]).unwrap());
        assert!(g.evaluate(["FR", "DE", "IT"]).unwrap());
        assert!(!g.evaluate(["FR", "DE", "LU", "BE"]).unwrap());
    }

    #[test]
    fn evaluate_rejects_unknown_id() {
        assert_eq!(
            eec().evaluate(["XX"]),
            Err(Error::UnknownVoter("XX".into()))
        );
    }

    #[test]
    fn quotas_from_fractions() {
        let f = Fraction::new(55, 100).unwrap();
        assert_eq!(quota_from_fraction(27, f), 15);
        assert_eq!(quota_from_fraction(33, f), 19);
        assert_eq!(quota_from_fraction(36, f), 20);
        assert_eq!(quota_from_fraction(20, Fraction::new(50, 100).unwrap()), 10);
        assert_eq!(quota_from_fraction(1, Fraction::new(1, 1).unwrap()), 1);
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(
            "65/100".parse::<Fraction>().unwrap(),
            Fraction::new(65, 100).unwrap()
        );
        assert_eq!(" 1 / 2 ".parse::<Fraction>().unwrap().num(), 1);
        assert!("0/5".parse::<Fraction>().is_err());
        assert!("6/5".parse::<Fraction>().is_err());
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("0.65".parse::<Fraction>().is_err());
    }

    #[test]
    fn single_voter_is_dictator() {
        let roster = Roster::new(vec![Voter::new("A", "Alpha", 37)]).unwrap();
        let g = build_qmv(roster, QmvOptions::default()).unwrap();
        assert_eq!(g.expr().rules()[0], WeightedRule::population(25));
        assert!(g.evaluate(["A"]).unwrap());
        assert!(!g.evaluate([]).unwrap());
    }

    #[test]
    fn zero_population_is_rejected() {
        let roster = Roster::new(vec![Voter::new("A", "Alpha", 0)]).unwrap();
        assert!(matches!(
            build_qmv(roster, QmvOptions::default()),
            Err(Error::InvalidGame(_))
        ));
    }

    #[test]
    fn blocking_rule_quota() {
        let voters = (0..27)
            .map(|k| Voter::new(format!("V{k}"), "v", 1 + k))
            .collect();
        let roster = Roster::new(voters).unwrap();
        let g = build_qmv(
            roster,
            QmvOptions {
                include_blocking: true,
                ..Default::default()
            },
        )
        .unwrap();
        let rules = g.expr().rules();
        assert_eq!(rules[1], WeightedRule::seats(15));
        assert_eq!(rules[2], WeightedRule::seats(24));
        assert_eq!(
            g.expr().to_string(),
            "(pop >= 246 & seats >= 15) | seats >= 24"
        );
    }

    #[test]
    fn game_validation() {
        let roster = Roster::new(vec![Voter::new("A", "a", 1), Voter::new("B", "b", 1)]).unwrap();
        assert!(VotingGame::new(roster.clone(), WeightedRule::population(3).into()).is_err());
        assert!(VotingGame::new(roster.clone(), WeightedRule::population(0).into()).is_err());
        assert!(VotingGame::new(
            roster.clone(),
            RuleExpr::and([WeightedRule::seats(1).into()])
        )
        .is_err());
        assert!(VotingGame::new(roster, WeightedRule::seats(2).into()).is_ok());
    }

    #[test]
    fn roster_validation() {
        assert!(Roster::new(vec![]).is_err());
        assert_eq!(
            Roster::new(vec![Voter::new("A", "a", 1), Voter::new("A", "b", 2)]),
            Err(Error::DuplicateVoter("A".into()))
        );
        assert!(Roster::new(vec![Voter::new("A", "a", 1).with_seats(0)]).is_err());
    }

    #[test]
    fn merge_places_bloc_at_first_member() {
        let roster = Roster::new(vec![
            Voter::new("A", "a", 10),
            Voter::new("B", "b", 20),
            Voter::new("C", "c", 30),
            Voter::new("D", "d", 40),
        ])
        .unwrap();
        let p = BlocPartition::new(vec![Bloc::new("bd", "B+D", ["D", "B"])]);
        let merged = merge_blocs(&roster, &p).unwrap();
        let ids: Vec<_> = merged.ids().collect();
        assert_eq!(ids, ["A", "bd", "C"]);
        assert_eq!(merged.get("bd").unwrap().pop_weight, 60);
        assert_eq!(merged.get("bd").unwrap().seat_weight, 2);
        assert_eq!(merged.total_pop(), roster.total_pop());
        assert_eq!(merged.total_seats(), roster.total_seats());
        assert_eq!(
            merge_blocs(&roster, &BlocPartition::default()).unwrap(),
            roster
        );
    }

    #[test]
    fn merge_errors() {
        let roster = Roster::new(vec![
            Voter::new("A", "a", 10),
            Voter::new("B", "b", 20),
            Voter::new("C", "c", 30),
        ])
        .unwrap();
        let overlap = BlocPartition::new(vec![
            Bloc::new("x", "x", ["A", "B"]),
            Bloc::new("y", "y", ["B", "C"]),
        ]);
        assert!(matches!(
            merge_blocs(&roster, &overlap),
            Err(Error::OverlappingBlocs { ref id, .. }) if id == "B"
        ));
        let unknown = BlocPartition::new(vec![Bloc::new("x", "x", ["A", "Z"])]);
        assert_eq!(
            merge_blocs(&roster, &unknown),
            Err(Error::UnknownVoter("Z".into()))
        );
        let clash = BlocPartition::new(vec![Bloc::new("C", "x", ["A", "B"])]);
        assert_eq!(
            merge_blocs(&roster, &clash),
            Err(Error::DuplicateVoter("C".into()))
        );
        // A bloc may reuse the id of one of its own members.
        let reuse = BlocPartition::new(vec![Bloc::new("A", "x", ["A", "B"])]);
        assert_eq!(merge_blocs(&roster, &reuse).unwrap().len(), 2);
    }
}
