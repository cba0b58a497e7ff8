//! Named scenarios, bloc presets, cross-scenario comparison and
//! new-member-paradox detection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::data::{fixture, Fixture, PopulationTable, ScenarioConfig};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::game::{build_qmv, merge_blocs, Bloc, BlocPartition, QmvOptions, Roster, VotingGame};
use crate::oracle;
use crate::power::{IndexFamily, PowerResult, VoterInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlocPreset {
    pub id: &'static str,
    pub name: &'static str,
    pub members: &'static [&'static str],
}

impl BlocPreset {
    pub fn to_bloc(&self) -> Bloc {
        Bloc::new(self.id, self.name, self.members.iter().copied())
    }
}

pub const PRESETS: [BlocPreset; 6] = [
    BlocPreset {
        id: "franco_german",
        name: "Franco-German axis",
        members: &["FR", "DE"],
    },
    BlocPreset {
        id: "weimar",
        name: "Weimar",
        members: &["FR", "DE", "PL"],
    },
    BlocPreset {
        id: "founders",
        name: "Founders",
        members: &["BE", "DE", "FR", "IT", "LU", "NL"],
    },
    BlocPreset {
        id: "v4",
        name: "V4",
        members: &["PL", "CZ", "HU", "SK"],
    },
    BlocPreset {
        id: "2004",
        name: "2004 entrants",
        members: &["CZ", "CY", "EE", "HU", "LV", "LT", "MT", "PL", "SK", "SI"],
    },
    BlocPreset {
        id: "nordic",
        name: "Nordic",
        members: &["DK", "EE", "FI", "LV", "LT", "SE"],
    },
];

pub fn preset(id: &str) -> Option<&'static BlocPreset> {
    PRESETS.iter().find(|p| p.id.eq_ignore_ascii_case(id))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub roster: Roster,
    pub options: QmvOptions,
    pub partition: Option<BlocPartition>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, roster: Roster, options: QmvOptions) -> Self {
        Scenario {
            name: name.into(),
            roster,
            options,
            partition: None,
        }
    }

    /// Resolves the config's members (and blocs) against a population table.
    pub fn from_config(table: &PopulationTable, config: &ScenarioConfig) -> Result<Self> {
        let roster = table.roster(&config.members)?;
        let partition = if config.blocs.is_empty() {
            None
        } else {
            let p = config.partition();
            p.validate(&roster)?;
            Some(p)
        };
        Ok(Scenario {
            name: config.name.clone(),
            roster,
            options: config.options,
            partition,
        })
    }

    pub fn fixture(which: Fixture) -> Self {
        let (table, config) = fixture(which);
        Scenario::from_config(&table, &config)
            .unwrap_or_else(|e| panic!("bundled {} scenario is invalid: {e}", which.name()))
    }

    /// Adds a bloc to the scenario's partition.
    pub fn with_bloc(mut self, bloc: Bloc) -> Result<Self> {
        if let Some(missing) = bloc.members.iter().find(|m| self.roster.get(m).is_none()) {
            return Err(Error::Invalid(format!(
                "bloc `{}` member `{missing}` is not in scenario `{}`",
                bloc.id, self.name
            )));
        }
        let mut partition = self.partition.take().unwrap_or_default();
        partition.blocs.push(bloc);
        partition.validate(&self.roster)?;
        self.partition = Some(partition);
        Ok(self)
    }

    pub fn with_preset(self, preset_id: &str) -> Result<Self> {
        let p = preset(preset_id)
            .ok_or_else(|| Error::Invalid(format!("unknown bloc preset `{preset_id}`")))?;
        self.with_bloc(p.to_bloc())
    }

    pub fn with_blocking(mut self, include_blocking: bool) -> Self {
        self.options.include_blocking = include_blocking;
        self
    }

    /// Roster after bloc merging.
    pub fn players(&self) -> Result<Roster> {
        match &self.partition {
            Some(p) => merge_blocs(&self.roster, p),
            None => Ok(self.roster.clone()),
        }
    }
}

pub fn scenario_game(s: &Scenario) -> Result<VotingGame> {
    build_qmv(s.players()?, s.options)
}

/// Indices of the scenario with one preset bloc merged; the bloc appears under the preset's id.
pub fn bloc_power(s: &Scenario, preset_id: &str) -> Result<PowerResult> {
    bloc_power_with(&Engine::default(), s, preset_id)
}

pub fn bloc_power_with(engine: &Engine, s: &Scenario, preset_id: &str) -> Result<PowerResult> {
    let merged = s.clone().with_preset(preset_id)?;
    engine.compute_all(&scenario_game(&merged)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexDiff {
    pub before: BigRational,
    pub after: BigRational,
    /// `after - before`, as a fraction (multiply by 100 for percentage points).
    pub pp_diff: BigRational,
    /// `pp_diff / before`; absent when `before` is zero.
    pub rel_diff: Option<BigRational>,
}

impl IndexDiff {
    fn new(before: BigRational, after: BigRational) -> Self {
        let pp_diff = &after - &before;
        let rel_diff = (!before.is_zero()).then(|| &pp_diff / &before);
        IndexDiff {
            before,
            after,
            pp_diff,
            rel_diff,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffRow {
    pub id: String,
    pub name: String,
    pub banzhaf: Option<IndexDiff>,
    pub shapley_shubik: Option<IndexDiff>,
}

impl DiffRow {
    pub fn family(&self, family: IndexFamily) -> Option<&IndexDiff> {
        match family {
            IndexFamily::Banzhaf => self.banzhaf.as_ref(),
            IndexFamily::ShapleyShubik => self.shapley_shubik.as_ref(),
        }
    }
}

/// Per-incumbent index changes between two results; rows follow the base roster order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffReport {
    pub rows: Vec<DiffRow>,
    pub entrants: Vec<VoterInfo>,
    pub departed: Vec<VoterInfo>,
}

impl DiffReport {
    pub fn row(&self, id: &str) -> Option<&DiffRow> {
        self.rows.iter().find(|r| r.id == id)
    }
}

pub fn compare(base: &PowerResult, target: &PowerResult) -> Result<DiffReport> {
    let mut rows = Vec::new();
    let mut departed = Vec::new();
    for (k, v) in base.voters.iter().enumerate() {
        let Some(j) = target.position(&v.id) else {
            departed.push(v.clone());
            continue;
        };
        let diff = |family: IndexFamily| match (base.index(family), target.index(family)) {
            (Some(b), Some(t)) => Some(IndexDiff::new(b[k].clone(), t[j].clone())),
            _ => None,
        };
        rows.push(DiffRow {
            id: v.id.clone(),
            name: v.name.clone(),
            banzhaf: diff(IndexFamily::Banzhaf),
            shapley_shubik: diff(IndexFamily::ShapleyShubik),
        });
    }
    if rows.is_empty() {
        return Err(Error::Invalid(
            "the compared results have no voter in common".into(),
        ));
    }
    let entrants = target
        .voters
        .iter()
        .filter(|v| base.position(&v.id).is_none())
        .cloned()
        .collect();
    Ok(DiffReport {
        rows,
        entrants,
        departed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gainer {
    pub id: String,
    pub family: IndexFamily,
    pub pp_diff: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParadoxReport {
    pub gainers: Vec<Gainer>,
    pub note: Option<String>,
}

impl ParadoxReport {
    pub fn is_empty(&self) -> bool {
        self.gainers.is_empty()
    }

    pub fn gainers_in(&self, family: IndexFamily) -> impl Iterator<Item = &str> {
        self.gainers
            .iter()
            .filter(move |g| g.family == family)
            .map(|g| g.id.as_str())
    }
}

/// Incumbents whose index strictly increased, grouped by family.
pub fn detect_paradox(report: &DiffReport) -> ParadoxReport {
    if report.entrants.is_empty() {
        return ParadoxReport {
            gainers: Vec::new(),
            note: Some("no entrants: not an enlargement, paradox check skipped".into()),
        };
    }
    let gainers = IndexFamily::ALL
        .into_iter()
        .flat_map(|family| {
            report.rows.iter().filter_map(move |r| {
                let d = r.family(family)?;
                d.pp_diff.is_positive().then(|| Gainer {
                    id: r.id.clone(),
                    family,
                    pp_diff: d.pp_diff.clone(),
                })
            })
        })
        .collect();
    ParadoxReport {
        gainers,
        note: None,
    }
}

/// A published `(banzhaf %, shapley-shubik %)` pair and where it appeared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedPair {
    pub source: &'static str,
    pub banzhaf_pct: f64,
    pub shapley_pct: f64,
}

/// The two conflicting EU27 values printed for the Nordic bloc.
pub const NORDIC_PUBLISHED: [PublishedPair; 2] = [
    PublishedPair {
        source: "table5",
        banzhaf_pct: 14.95,
        shapley_pct: 10.72,
    },
    PublishedPair {
        source: "fig6",
        banzhaf_pct: 17.55,
        shapley_pct: 13.35,
    },
];

pub const DISCREPANCY_TOLERANCE_PP: f64 = 0.20;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    pub bloc: String,
    pub n: usize,
    pub banzhaf: BigRational,
    pub shapley_shubik: BigRational,
    /// The DP engine produced the same rationals as the enumeration.
    pub engine_agrees: bool,
    pub candidates: Vec<PublishedPair>,
    /// Sources whose pair matches in both families within the tolerance.
    pub matches: Vec<&'static str>,
}

impl DiscrepancyReport {
    pub fn annotation(&self) -> String {
        let b = to_pct(&self.banzhaf);
        let s = to_pct(&self.shapley_shubik);
        let cands: Vec<String> = self
            .candidates
            .iter()
            .map(|c| format!("{} {:.2}/{:.2}", c.source, c.banzhaf_pct, c.shapley_pct))
            .collect();
        let verdict = match self.matches.as_slice() {
            [] => "matches neither".to_string(),
            [one] => format!("matches {one}"),
            many => format!("matches {}", many.join(" and ")),
        };
        format!(
            "{} bloc, exact enumeration over n = {}: banzhaf {b:.4}%, shapley-shubik {s:.4}%; \
             published {}; {verdict} within {DISCREPANCY_TOLERANCE_PP:.2} pp",
            self.bloc,
            self.n,
            cands.join(" vs "),
        )
    }
}

pub(crate) fn to_pct(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    // Scale before converting so tiny values keep their precision.
    let scaled = x * BigRational::from_integer(BigInt::from(1_000_000_000_000i64));
    scaled.to_integer().to_f64().unwrap_or(f64::NAN) / 1e10
}

/// Settles the Nordic-bloc value by full enumeration (n = 22 after merging).
pub fn resolve_nordic_discrepancy(oracle_limit: usize) -> Result<DiscrepancyReport> {
    let scenario = Scenario::fixture(Fixture::Eu27).with_preset("nordic")?;
    let game = scenario_game(&scenario)?;
    let exact = oracle::oracle_all(&game, oracle_limit)?;
    let dp = Engine::default().compute_all(&game)?;
    let banzhaf = exact
        .banzhaf_index("nordic")
        .cloned()
        .expect("bloc present");
    let shapley = exact.shapley("nordic").cloned().expect("bloc present");
    let (b, s) = (to_pct(&banzhaf), to_pct(&shapley));
    let matches = NORDIC_PUBLISHED
        .iter()
        .filter(|c| {
            (c.banzhaf_pct - b).abs() <= DISCREPANCY_TOLERANCE_PP
                && (c.shapley_pct - s).abs() <= DISCREPANCY_TOLERANCE_PP
        })
        .map(|c| c.source)
        .collect();
    Ok(DiscrepancyReport {
        bloc: "nordic".into(),
        n: game.n(),
        engine_agrees: dp.banzhaf == exact.banzhaf && dp.shapley_shubik == exact.shapley_shubik,
        banzhaf,
        shapley_shubik: shapley,
        candidates: NORDIC_PUBLISHED.to_vec(),
        matches,
    })
}
