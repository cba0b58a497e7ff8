//! Named tables and figure datasets for the EU27/EU33/EU36 analysis.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::data::Fixture;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::power::{IndexFamily, PowerResult};
use crate::report::{result_order, Cell, Column, Table};
use crate::scenarios::{
    bloc_power_with, compare, preset, resolve_nordic_discrepancy, scenario_game, Scenario,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Artifact {
    Table(u8),
    Fig(u8),
    NordicCheck,
}

impl Artifact {
    pub fn all() -> Vec<Artifact> {
        (1..=8)
            .map(Artifact::Table)
            .chain((1..=8).map(Artifact::Fig))
            .chain([Artifact::NordicCheck])
            .collect()
    }

    pub fn describe(self) -> &'static str {
        match self {
            Artifact::Table(1) => "EU27, five most populous members",
            Artifact::Table(2) => "EU27, medium-population members",
            Artifact::Table(3) => "EU27, small-population members",
            Artifact::Table(4) => "EU33, Western Balkan entrants",
            Artifact::Table(5) => "coalitions, EU27 vs EU33 with relative change",
            Artifact::Table(6) => "EU36, six most populous members",
            Artifact::Table(7) => "EU36, entrants",
            Artifact::Table(8) => "coalitions, EU27 vs EU36 with relative change",
            Artifact::Fig(1) => "EU27 with the Franco-German bloc",
            Artifact::Fig(2) => "EU27 with the Weimar bloc",
            Artifact::Fig(3) => "EU27 with the Founders bloc",
            Artifact::Fig(4) => "EU27 with the V4 bloc",
            Artifact::Fig(5) => "EU27 with the 2004-entrants bloc",
            Artifact::Fig(6) => "EU27 with the Nordic bloc",
            Artifact::Fig(7) => "change in pp, EU27 to EU33",
            Artifact::Fig(8) => "change in pp, EU27 to EU36",
            Artifact::NordicCheck => "exact Nordic-bloc value against both published numbers",
            _ => "",
        }
    }
}

impl fmt::Display for Artifact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Artifact::Table(k) => write!(f, "table{k}"),
            Artifact::Fig(k) => write!(f, "fig{k}"),
            Artifact::NordicCheck => f.write_str("nordic-check"),
        }
    }
}

impl FromStr for Artifact {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Artifact::all()
            .into_iter()
            .find(|a| a.to_string() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown artifact `{s}`")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EmitContext {
    pub engine: Engine,
    pub oracle_limit: usize,
}

impl Default for EmitContext {
    fn default() -> Self {
        EmitContext {
            engine: Engine::default(),
            oracle_limit: crate::oracle::DEFAULT_LIMIT,
        }
    }
}

/// Coalition rows of the before/after tables, in display order.
const COALITION_ROWS: [&str; 6] = [
    "franco_german",
    "weimar",
    "v4",
    "2004",
    "founders",
    "nordic",
];

/// Preset shown in each bloc figure.
const FIGURE_BLOCS: [&str; 6] = [
    "franco_german",
    "weimar",
    "founders",
    "v4",
    "2004",
    "nordic",
];

fn fixture_result(ctx: &EmitContext, which: Fixture) -> Result<PowerResult> {
    ctx.engine
        .compute_all(&scenario_game(&Scenario::fixture(which))?)
}

fn country_table(result: &PowerResult, positions: &[usize], title: String) -> Table {
    let total = result.meta.total_pop;
    let b = result.banzhaf.as_ref().expect("banzhaf computed");
    let s = result.shapley_shubik.as_ref().expect("shapley computed");
    let rows = positions
        .iter()
        .map(|&k| {
            let v = &result.voters[k];
            vec![
                Cell::Text(v.id.clone()),
                Cell::Text(v.name.clone()),
                Cell::Pct(BigRational::new(v.pop_weight.into(), total.into())),
                Cell::Pct(b.indices[k].clone()),
                Cell::Pct(s[k].clone()),
            ]
        })
        .collect();
    Table {
        title: Some(title),
        columns: vec![
            Column::data("id"),
            Column::all("country", "country"),
            Column::all("population", "population %"),
            Column::all("banzhaf", "banzhaf %"),
            Column::all("shapley_shubik", "shapley-shubik %"),
        ],
        rows,
        notes: Vec::new(),
    }
}

fn figure_columns() -> Vec<Column> {
    vec![
        Column::json_only("id"),
        Column::all("voter", "voter"),
        Column::all("banzhaf", "banzhaf"),
        Column::all("shapley", "shapley"),
    ]
}

fn bloc_figure(ctx: &EmitContext, preset_id: &str, title: String) -> Result<Table> {
    let r = bloc_power_with(&ctx.engine, &Scenario::fixture(Fixture::Eu27), preset_id)?;
    let b = r.banzhaf.as_ref().expect("banzhaf computed");
    let s = r.shapley_shubik.as_ref().expect("shapley computed");
    let rows = result_order(&r)
        .into_iter()
        .map(|k| {
            vec![
                Cell::Text(r.voters[k].id.clone()),
                Cell::Text(r.voters[k].name.clone()),
                Cell::Pct(b.indices[k].clone()),
                Cell::Pct(s[k].clone()),
            ]
        })
        .collect();
    Ok(Table {
        title: Some(title),
        columns: figure_columns(),
        rows,
        notes: Vec::new(),
    })
}

fn change_figure(ctx: &EmitContext, target: Fixture, title: String) -> Result<Table> {
    let before = fixture_result(ctx, Fixture::Eu27)?;
    let after = fixture_result(ctx, target)?;
    let diff = compare(&before, &after)?;
    let rows = result_order(&before)
        .into_iter()
        .filter_map(|k| diff.row(&before.voters[k].id))
        .map(|r| {
            let pp = |f: IndexFamily| {
                r.family(f)
                    .map_or(Cell::Empty, |d| Cell::Pct(d.pp_diff.clone()))
            };
            vec![
                Cell::Text(r.id.clone()),
                Cell::Text(r.name.clone()),
                pp(IndexFamily::Banzhaf),
                pp(IndexFamily::ShapleyShubik),
            ]
        })
        .collect();
    Ok(Table {
        title: Some(title),
        columns: figure_columns(),
        rows,
        notes: Vec::new(),
    })
}

fn coalition_table(ctx: &EmitContext, target: Fixture, title: String) -> Result<Table> {
    let base = Scenario::fixture(Fixture::Eu27);
    let enlarged = Scenario::fixture(target);
    let tag = target.name();
    let mut rows = Vec::new();
    for id in COALITION_ROWS {
        let p = preset(id).expect("preset exists");
        let before = bloc_power_with(&ctx.engine, &base, id)?;
        let after = bloc_power_with(&ctx.engine, &enlarged, id)?;
        let pick = |r: &PowerResult, f: IndexFamily| -> BigRational {
            let k = r.position(id).expect("bloc present");
            r.index(f).expect("computed")[k].clone()
        };
        let mut row = vec![Cell::Text(id.into()), Cell::Text(p.name.into())];
        let mut rel = Vec::new();
        let mut after_cells = Vec::new();
        for f in IndexFamily::ALL {
            let (b, a) = (pick(&before, f), pick(&after, f));
            rel.push(Cell::Pct((&a - &b) / &b));
            row.push(Cell::Pct(b));
            after_cells.push(Cell::Pct(a));
        }
        row.extend(after_cells);
        row.extend(rel);
        rows.push(row);
    }
    let columns = vec![
        Column::data("id"),
        Column::all("coalition", "coalition"),
        Column::all("eu27_banzhaf", "eu27 banz. %"),
        Column::all("eu27_shapley", "eu27 s-s %"),
        Column::all(format!("{tag}_banzhaf"), format!("{tag} banz. %")),
        Column::all(format!("{tag}_shapley"), format!("{tag} s-s %")),
        Column::all("rel_banzhaf", "rel. banz. %"),
        Column::all("rel_shapley", "rel. s-s %"),
    ];
    Ok(Table {
        title: Some(title),
        columns,
        rows,
        notes: Vec::new(),
    })
}

fn nordic_note(ctx: &EmitContext) -> String {
    match resolve_nordic_discrepancy(ctx.oracle_limit) {
        Ok(report) => report.annotation(),
        Err(e) => format!("nordic bloc check skipped: {e}"),
    }
}

pub fn emit(artifact: Artifact, ctx: &EmitContext) -> Result<Table> {
    let title = format!("{artifact}: {}", artifact.describe());
    match artifact {
        Artifact::Table(k @ 1..=3) => {
            let r = fixture_result(ctx, Fixture::Eu27)?;
            let order = result_order(&r);
            let range = match k {
                1 => 0..5,
                2 => 5..19,
                _ => 19..order.len(),
            };
            Ok(country_table(&r, &order[range], title))
        }
        Artifact::Table(k @ (4 | 7)) => {
            let (target, incumbents) = if k == 4 {
                (Fixture::Eu33, Fixture::Eu27)
            } else {
                (Fixture::Eu36, Fixture::Eu27)
            };
            let r = fixture_result(ctx, target)?;
            let before = Scenario::fixture(incumbents).roster;
            let entrants: Vec<usize> = result_order(&r)
                .into_iter()
                .filter(|&k| before.get(&r.voters[k].id).is_none())
                .collect();
            Ok(country_table(&r, &entrants, title))
        }
        Artifact::Table(6) => {
            let r = fixture_result(ctx, Fixture::Eu36)?;
            let order = result_order(&r);
            Ok(country_table(&r, &order[..6], title))
        }
        Artifact::Table(5) => {
            let mut t = coalition_table(ctx, Fixture::Eu33, title)?;
            t.notes.push(nordic_note(ctx));
            Ok(t)
        }
        Artifact::Table(8) => coalition_table(ctx, Fixture::Eu36, title),
        Artifact::Fig(k @ 1..=6) => bloc_figure(ctx, FIGURE_BLOCS[k as usize - 1], title),
        Artifact::Fig(7) => change_figure(ctx, Fixture::Eu33, title),
        Artifact::Fig(8) => change_figure(ctx, Fixture::Eu36, title),
        Artifact::NordicCheck => {
            let report = resolve_nordic_discrepancy(ctx.oracle_limit)?;
            let rows = report
                .candidates
                .iter()
                .map(|c| {
                    vec![
                        Cell::Text(c.source.into()),
                        Cell::Text(format!("{:.2}", c.banzhaf_pct)),
                        Cell::Text(format!("{:.2}", c.shapley_pct)),
                        Cell::Text(report.matches.contains(&c.source).to_string()),
                    ]
                })
                .chain([vec![
                    Cell::Text("exact".into()),
                    Cell::Pct(report.banzhaf.clone()),
                    Cell::Pct(report.shapley_shubik.clone()),
                    Cell::Text(String::new()),
                ]])
                .collect();
            Ok(Table {
                title: Some(title),
                columns: vec![
                    Column::all("source", "source"),
                    Column::all("banzhaf", "banzhaf %"),
                    Column::all("shapley", "shapley-shubik %"),
                    Column::all("matches", "matches"),
                ],
                rows,
                notes: vec![report.annotation()],
            })
        }
        _ => Err(Error::Invalid(format!("unknown artifact `{artifact}`"))),
    }
}
