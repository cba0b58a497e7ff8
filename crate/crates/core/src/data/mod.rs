//! Population tables, scenario files and the bundled fixtures.
//!
//! Population CSV (UTF-8, `\n` or `\r\n` line endings):
//!
//! ```text
//! # free comment
//! # unit: centi-percent of EU27 population
//! id,name,pop[,seats]
//! DE,Germany,1881
//! ```
//!
//! The header line is optional; without it each row may carry 3 or 4
//! fields. Names may not contain commas. Weights are non-negative
//! integers, seats default to 1.
//!
//! Scenario file: one `key = value` per line, `#` comments, keys
//! `name`, `members`, `bloc.<name>`, `pop_fraction`, `seat_fraction`,
//! `blocking_members` and `include_blocking`. Id lists are
//! space-separated and fractions are written `num/den`.

pub mod derivation;

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::game::{Bloc, BlocPartition, Fraction, QmvOptions, Roster, Voter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationRow {
    pub id: String,
    pub name: String,
    pub pop_weight: u64,
    pub seat_weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationTable {
    pub unit: Option<String>,
    rows: Vec<PopulationRow>,
}

impl PopulationTable {
    pub fn new(unit: Option<String>, rows: Vec<PopulationRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Invalid("population table has no rows".into()));
        }
        let mut seen = HashSet::new();
        for r in &rows {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::DuplicateVoter(r.id.clone()));
            }
            if r.seat_weight == 0 {
                return Err(Error::Invalid(format!("row `{}` has seat weight 0", r.id)));
            }
        }
        Ok(PopulationTable { unit, rows })
    }

    pub fn rows(&self) -> &[PopulationRow] {
        &self.rows
    }

    pub fn get(&self, id: &str) -> Option<&PopulationRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn total_pop(&self) -> u64 {
        self.rows.iter().map(|r| r.pop_weight).sum()
    }

    /// Roster of the listed ids, in the order given.
    pub fn roster(&self, members: &[String]) -> Result<Roster> {
        let voters = members
            .iter()
            .map(|id| {
                let r = self
                    .get(id)
                    .ok_or_else(|| Error::UnknownVoter(id.clone()))?;
                Ok(Voter::new(&r.id, &r.name, r.pop_weight).with_seats(r.seat_weight))
            })
            .collect::<Result<Vec<_>>>()?;
        Roster::new(voters)
    }

    /// Roster of every row in table order.
    pub fn full_roster(&self) -> Result<Roster> {
        let ids: Vec<String> = self.rows.iter().map(|r| r.id.clone()).collect();
        self.roster(&ids)
    }

    /// Canonical CSV; the seats column is written only when some seat weight differs from 1.
    pub fn to_csv(&self) -> String {
        let seats = self.rows.iter().any(|r| r.seat_weight != 1);
        let mut out = String::new();
        if let Some(unit) = &self.unit {
            let _ = writeln!(out, "# unit: {unit}");
        }
        out.push_str(if seats {
            "id,name,pop,seats\n"
        } else {
            "id,name,pop\n"
        });
        for r in &self.rows {
            let _ = write!(out, "{},{},{}", r.id, r.name, r.pop_weight);
            if seats {
                let _ = write!(out, ",{}", r.seat_weight);
            }
            out.push('\n');
        }
        out
    }
}

impl FromStr for PopulationTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        load_population_table(s)
    }
}

const UNIT_PREFIX: &str = "unit:";

/// Splits on commas, yielding `(1-based column, trimmed field)`.
fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for part in line.split(',') {
        let lead = part.len() - part.trim_start().len();
        out.push((start + lead + 1, part.trim()));
        start += part.len() + 1;
    }
    out
}

fn is_id(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '#' || c == '=')
}

fn parse_weight(line: usize, (col, text): (usize, &str), what: &str) -> Result<u64> {
    if let Some(rest) = text.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Validation {
                line,
                reason: format!("{what} weight {text} is negative"),
            });
        }
    }
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(
            line,
            col,
            format!("{what} `{text}` is not an integer"),
        ));
    }
    text.parse::<u64>()
        .map_err(|_| Error::parse(line, col, format!("{what} `{text}` is out of range")))
}

pub fn load_population_table(text: &str) -> Result<PopulationTable> {
    let mut unit = None;
    let mut header: Option<usize> = None;
    let mut seen_content = false;
    let mut rows: Vec<PopulationRow> = Vec::new();
    let mut lines_of: Vec<usize> = Vec::new();

    for (k, raw) in text.split('\n').enumerate() {
        let line_no = k + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(u) = comment.trim().strip_prefix(UNIT_PREFIX) {
                if unit.is_some() {
                    return Err(Error::Validation {
                        line: line_no,
                        reason: "unit declared twice".into(),
                    });
                }
                unit = Some(u.trim().to_string());
            }
            continue;
        }
        let fs = fields(line);
        let names: Vec<&str> = fs.iter().map(|&(_, f)| f).collect();
        if !seen_content {
            seen_content = true;
            if names == ["id", "name", "pop"] || names == ["id", "name", "pop", "seats"] {
                header = Some(names.len());
                continue;
            }
        }
        let expected_ok = match header {
            Some(n) => fs.len() == n,
            None => fs.len() == 3 || fs.len() == 4,
        };
        if !expected_ok {
            let want = header.map_or("3 or 4".to_string(), |n| n.to_string());
            let col = fs.get(3.min(fs.len() - 1)).map_or(1, |f| f.0);
            return Err(Error::parse(
                line_no,
                col,
                format!("expected {want} fields, found {}", fs.len()),
            ));
        }
        let (id_col, id) = fs[0];
        if !is_id(id) {
            return Err(Error::parse(line_no, id_col, format!("invalid id `{id}`")));
        }
        let (name_col, name) = fs[1];
        if name.is_empty() {
            return Err(Error::parse(line_no, name_col, "empty name"));
        }
        let pop_weight = parse_weight(line_no, fs[2], "population")?;
        let seat_weight = match fs.get(3) {
            Some(&f) => parse_weight(line_no, f, "seat")?,
            None => 1,
        };
        if seat_weight == 0 {
            return Err(Error::Validation {
                line: line_no,
                reason: format!("seat weight of `{id}` must be at least 1"),
            });
        }
        if let Some(prev) = rows.iter().position(|r| r.id == id) {
            return Err(Error::Validation {
                line: line_no,
                reason: format!("duplicate id `{id}` (first on line {})", lines_of[prev]),
            });
        }
        rows.push(PopulationRow {
            id: id.to_string(),
            name: name.to_string(),
            pop_weight,
            seat_weight,
        });
        lines_of.push(line_no);
    }
    PopulationTable::new(unit, rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub name: String,
    pub members: Vec<String>,
    pub blocs: Vec<Bloc>,
    pub options: QmvOptions,
}

impl ScenarioConfig {
    pub fn partition(&self) -> BlocPartition {
        BlocPartition::new(self.blocs.clone())
    }

    pub fn bloc(&self, name: &str) -> Option<&Bloc> {
        self.blocs.iter().find(|b| b.id == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "members = {}", self.members.join(" "));
        for b in &self.blocs {
            let _ = writeln!(out, "bloc.{} = {}", b.id, b.members.join(" "));
        }
        let o = &self.options;
        let _ = writeln!(out, "pop_fraction = {}", o.pop_fraction);
        let _ = writeln!(out, "seat_fraction = {}", o.seat_fraction);
        let _ = writeln!(out, "blocking_members = {}", o.blocking_members);
        let _ = writeln!(out, "include_blocking = {}", o.include_blocking);
        out
    }
}

impl FromStr for ScenarioConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        load_scenario_config(s)
    }
}

fn id_list(line: usize, col: usize, value: &str) -> Result<Vec<String>> {
    let ids: Vec<String> = value.split_whitespace().map(str::to_string).collect();
    if ids.is_empty() {
        return Err(Error::parse(line, col, "empty id list"));
    }
    let mut seen = HashSet::new();
    for id in &ids {
        if !is_id(id) || id.contains(',') {
            return Err(Error::parse(line, col, format!("invalid id `{id}`")));
        }
        if !seen.insert(id.as_str()) {
            return Err(Error::Validation {
                line,
                reason: format!("id `{id}` listed twice"),
            });
        }
    }
    Ok(ids)
}

pub fn load_scenario_config(text: &str) -> Result<ScenarioConfig> {
    let mut name = None;
    let mut members: Option<(usize, Vec<String>)> = None;
    let mut blocs: Vec<(usize, Bloc)> = Vec::new();
    let mut options = QmvOptions::default();
    let mut seen_keys: HashSet<String> = HashSet::new();

    for (k, raw) in text.split('\n').enumerate() {
        let line_no = k + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Error::parse(line_no, 1, "expected `key = value`"));
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        let value_col = eq + 2 + (line[eq + 1..].len() - line[eq + 1..].trim_start().len());
        if !seen_keys.insert(key.to_string()) {
            return Err(Error::Validation {
                line: line_no,
                reason: format!("key `{key}` given twice"),
            });
        }
        let fraction = |v: &str| {
            v.parse::<Fraction>()
                .map_err(|e| Error::parse(line_no, value_col, e.to_string()))
        };
        match key {
            "name" => {
                if value.is_empty() {
                    return Err(Error::parse(line_no, value_col, "empty scenario name"));
                }
                name = Some(value.to_string());
            }
            "members" => members = Some((line_no, id_list(line_no, value_col, value)?)),
            "pop_fraction" => options.pop_fraction = fraction(value)?,
            "seat_fraction" => options.seat_fraction = fraction(value)?,
            "blocking_members" => {
                options.blocking_members = match value.parse::<u64>() {
                    Ok(v) if v >= 1 => v,
                    _ => {
                        return Err(Error::parse(
                            line_no,
                            value_col,
                            format!("blocking_members `{value}` is not a positive integer"),
                        ))
                    }
                }
            }
            "include_blocking" => {
                options.include_blocking = match value {
                    "true" => true,
                    "false" => false,
                    _ => {
                        return Err(Error::parse(
                            line_no,
                            value_col,
                            format!("include_blocking must be true or false, not `{value}`"),
                        ))
                    }
                }
            }
            _ => match key.strip_prefix("bloc.") {
                Some(bloc) if is_id(bloc) && !bloc.contains('.') => {
                    let ids = id_list(line_no, value_col, value)?;
                    blocs.push((line_no, Bloc::new(bloc, bloc, ids)));
                }
                _ => {
                    return Err(Error::parse(line_no, 1, format!("unknown key `{key}`")));
                }
            },
        }
    }

    let name = name.ok_or_else(|| Error::Invalid("scenario has no `name`".into()))?;
    let (_, members) = members.ok_or_else(|| Error::Invalid("scenario has no `members`".into()))?;
    let member_set: HashSet<&str> = members.iter().map(String::as_str).collect();
    for (line, bloc) in &blocs {
        if let Some(m) = bloc
            .members
            .iter()
            .find(|m| !member_set.contains(m.as_str()))
        {
            return Err(Error::Validation {
                line: *line,
                reason: format!("bloc `{}` lists `{m}`, which is not a member", bloc.id),
            });
        }
    }
    let blocs: Vec<Bloc> = blocs.into_iter().map(|(_, b)| b).collect();
    BlocPartition::new(blocs.clone()).check_disjoint()?;
    Ok(ScenarioConfig {
        name,
        members,
        blocs,
        options,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    Eu27,
    Eu33,
    Eu36,
    Eec1958,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [
        Fixture::Eu27,
        Fixture::Eu33,
        Fixture::Eu36,
        Fixture::Eec1958,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Eu27 => "eu27",
            Fixture::Eu33 => "eu33",
            Fixture::Eu36 => "eu36",
            Fixture::Eec1958 => "eec1958",
        }
    }

    pub fn population_csv(self) -> &'static str {
        match self {
            Fixture::Eu27 => include_str!("../../data/eu27.csv"),
            Fixture::Eu33 => include_str!("../../data/eu33.csv"),
            Fixture::Eu36 => include_str!("../../data/eu36.csv"),
            Fixture::Eec1958 => include_str!("../../data/eec1958.csv"),
        }
    }

    pub fn scenario_text(self) -> &'static str {
        match self {
            Fixture::Eu27 => include_str!("../../data/eu27.scenario"),
            Fixture::Eu33 => include_str!("../../data/eu33.scenario"),
            Fixture::Eu36 => include_str!("../../data/eu36.scenario"),
            Fixture::Eec1958 => include_str!("../../data/eec1958.scenario"),
        }
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown fixture `{s}`")))
    }
}

/// Bundled population table and scenario for a fixture.
pub fn fixture(which: Fixture) -> (PopulationTable, ScenarioConfig) {
    let table = load_population_table(which.population_csv())
        .unwrap_or_else(|e| panic!("bundled {} table is invalid: {e}", which.name()));
    let config = load_scenario_config(which.scenario_text())
        .unwrap_or_else(|e| panic!("bundled {} scenario is invalid: {e}", which.name()));
    (table, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn headerless_two_rows() {
        let t = load_population_table("A,Alpha,600\nB,Beta,400").unwrap();
        assert_eq!(t.rows().len(), 2);
        assert_eq!(t.total_pop(), 1000);
        assert_eq!(t.unit, None);
    }

    #[test]
    fn negative_weight_names_row() {
        let err = load_population_table("id,name,pop\nA,Alpha,600\nB,Beta,-5\n").unwrap_err();
        match err {
            Error::Validation { line, reason } => {
                assert_eq!(line, 3);
                assert!(reason.contains("negative"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_rows() {
        assert!(matches!(
            load_population_table("id,name,pop\nA,Alpha,6x0"),
            Err(Error::Parse {
                line: 2,
                column: 9,
                ..
            })
        ));
        assert!(matches!(
            load_population_table("id,name,pop\nA,Alpha,600,2"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            load_population_table("A,Alpha"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            load_population_table("A,Alpha,1\n\nA,Again,2"),
            Err(Error::Validation { line: 3, .. })
        ));
        assert!(matches!(
            load_population_table("A,Alpha,1,0"),
            Err(Error::Validation { line: 1, .. })
        ));
        assert!(load_population_table("# only a comment\n").is_err());
        assert!(load_population_table("id,name,pop\n").is_err());
    }

    #[test]
    fn comments_unit_and_crlf() {
        let t = load_population_table(
            "# unit: people\r\nid,name,pop,seats\r\n# x\r\nA, Alpha ,5,2\r\n",
        )
        .unwrap();
        assert_eq!(t.unit.as_deref(), Some("people"));
        assert_eq!(t.rows()[0].name, "Alpha");
        assert_eq!(t.rows()[0].seat_weight, 2);
    }

    #[test]
    fn scenario_defaults() {
        let c = load_scenario_config("name = x\nmembers = A B C\n").unwrap();
        assert_eq!(c.options, QmvOptions::default());
        assert!(c.blocs.is_empty());
        assert_eq!(c.members, ["A", "B", "C"]);
    }

    #[test]
    fn scenario_bloc_and_overrides() {
        let c = load_scenario_config(
            "# test\nname = v\nmembers = PL CZ HU SK DE\nbloc.v4 = PL CZ HU SK\n\
             pop_fraction = 13/20\nseat_fraction = 1/2\nblocking_members = 3\ninclude_blocking = true\n",
        )
        .unwrap();
        assert_eq!(c.partition().blocs.len(), 1);
        assert_eq!(c.bloc("v4").unwrap().members.len(), 4);
        assert_eq!(c.options.seat_fraction, Fraction::new(1, 2).unwrap());
        assert!(c.options.include_blocking);
        assert_eq!(c.options.blocking_members, 3);
    }

    #[test]
    fn scenario_errors() {
        let overlap =
            load_scenario_config("name = x\nmembers = X Y Z\nbloc.a = X Y\nbloc.b = Y Z\n");
        assert!(matches!(overlap, Err(Error::OverlappingBlocs { ref id, .. }) if id == "Y"));
        assert!(matches!(
            load_scenario_config("name = x\nmembers = A\ncolour = red\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            load_scenario_config("name = x\nmembers = A\nbloc.b = A Q\n"),
            Err(Error::Validation { line: 3, .. })
        ));
        assert!(load_scenario_config("name = x\nmembers = A\npop_fraction = 0.65\n").is_err());
        assert!(load_scenario_config("name = x\nmembers = A\ninclude_blocking = yes\n").is_err());
        assert!(load_scenario_config("name = x\nname = y\nmembers = A\n").is_err());
        assert!(load_scenario_config("members = A\n").is_err());
        assert!(load_scenario_config("name = x\nmembers = A A\n").is_err());
        assert!(load_scenario_config("name = x\nmembers =\n").is_err());
    }

    #[test]
    fn unknown_member_on_resolution() {
        let (table, _) = fixture(Fixture::Eu27);
        let c = load_scenario_config("name = x\nmembers = DE XX\n").unwrap();
        assert_eq!(
            table.roster(&c.members),
            Err(Error::UnknownVoter("XX".into()))
        );
    }

    #[test]
    fn fixtures_load() {
        let (t27, c27) = fixture(Fixture::Eu27);
        assert_eq!(t27.rows().len(), 27);
        assert_eq!(t27.total_pop(), 9999);
        assert_eq!(t27.get("DE").unwrap().pop_weight, 1881);
        assert_eq!(t27.get("FR").unwrap().pop_weight, 1518);
        assert_eq!(t27.get("MT").unwrap().pop_weight, 12);
        assert_eq!(c27.members.len(), 27);

        let (t33, c33) = fixture(Fixture::Eu33);
        assert_eq!(t33.get("RS").unwrap().pop_weight, 155);
        assert_eq!(c33.members.len(), 33);

        let (t36, c36) = fixture(Fixture::Eu36);
        assert_eq!(c36.members.len(), 36);
        assert_eq!(t36.rows().len(), 36);

        let (eec, c) = fixture(Fixture::Eec1958);
        let seats: Vec<u64> = eec.rows().iter().map(|r| r.seat_weight).collect();
        assert_eq!(seats, [4, 4, 4, 2, 2, 1]);
        assert_eq!(c.options.seat_fraction, Fraction::new(12, 17).unwrap());
    }

    #[test]
    fn fixtures_extend_without_touching_incumbents() {
        let (t27, _) = fixture(Fixture::Eu27);
        let (t33, _) = fixture(Fixture::Eu33);
        let (t36, _) = fixture(Fixture::Eu36);
        assert_eq!(&t33.rows()[..27], t27.rows());
        assert_eq!(&t36.rows()[..33], t33.rows());
    }

    #[test]
    fn ukraine_share_of_eu36() {
        let (t36, _) = fixture(Fixture::Eu36);
        let share = t36.get("UA").unwrap().pop_weight as f64 / t36.total_pop() as f64 * 100.0;
        assert!((share - 7.99).abs() < 0.05, "{share}");
    }

    #[test]
    fn fixture_names_parse() {
        assert_eq!("EU33".parse::<Fixture>().unwrap(), Fixture::Eu33);
        assert!("eu28".parse::<Fixture>().is_err());
    }

    fn row_strategy() -> impl Strategy<Value = PopulationRow> {
        (
            "[A-Z]{2,3}",
            "[A-Za-z][A-Za-z .'-]{0,20}[A-Za-z]",
            0u64..10_000_000,
            1u64..50,
        )
            .prop_map(|(id, name, pop_weight, seat_weight)| PopulationRow {
                id,
                name,
                pop_weight,
                seat_weight,
            })
    }

    proptest! {
        #[test]
        fn population_csv_round_trips(
            rows in prop::collection::vec(row_strategy(), 1..12),
            unit in proptest::option::of("[a-z][a-z -]{0,15}[a-z]"),
        ) {
            let mut seen = HashSet::new();
            let rows: Vec<_> = rows.into_iter().filter(|r| seen.insert(r.id.clone())).collect();
            let table = PopulationTable::new(unit, rows).unwrap();
            prop_assert_eq!(load_population_table(&table.to_csv()).unwrap(), table);
        }

        #[test]
        fn scenario_round_trips(
            ids in prop::collection::hash_set("[A-Z]{2}", 2..15),
            split in 0usize..15,
            num in 1u64..100,
            blocking in any::<bool>(),
            members_needed in 1u64..6,
        ) {
            let members: Vec<String> = ids.into_iter().collect();
            let split = split.min(members.len());
            let blocs = if split >= 1 {
                vec![Bloc::new("b1", "b1", members[..split].to_vec())]
            } else {
                vec![]
            };
            let config = ScenarioConfig {
                name: "prop".into(),
                members,
                blocs,
                options: QmvOptions {
                    pop_fraction: Fraction::new(num, 100).unwrap(),
                    seat_fraction: Fraction::new(1, 2).unwrap(),
                    blocking_members: members_needed,
                    include_blocking: blocking,
                },
            };
            prop_assert_eq!(load_scenario_config(&config.to_text()).unwrap(), config);
        }

        #[test]
        fn population_parser_never_panics(s in "\\PC{0,200}") {
            let _ = load_population_table(&s);
        }

        #[test]
        fn scenario_parser_never_panics(s in "\\PC{0,200}") {
            let _ = load_scenario_config(&s);
        }
    }
}
