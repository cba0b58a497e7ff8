//! Text, CSV and JSON rendering of results and comparison reports.
//!
//! Everything is first turned into a [`Table`] of exact cells; rounding to
//! a fixed number of decimals (half to even) happens only here.

use std::borrow::Cow;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::power::{IndexFamily, PowerResult};
use crate::scenarios::{DiffReport, ParadoxReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Invalid(format!("unknown format `{s}`"))),
        }
    }
}

/// Which index columns to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Families {
    pub banzhaf: bool,
    pub shapley_shubik: bool,
}

impl Families {
    pub const BOTH: Families = Families {
        banzhaf: true,
        shapley_shubik: true,
    };

    pub fn shows(&self, family: IndexFamily) -> bool {
        match family {
            IndexFamily::Banzhaf => self.banzhaf,
            IndexFamily::ShapleyShubik => self.shapley_shubik,
        }
    }
}

impl FromStr for Families {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "banzhaf" => Ok(Families {
                banzhaf: true,
                shapley_shubik: false,
            }),
            "ss" => Ok(Families {
                banzhaf: false,
                shapley_shubik: true,
            }),
            "both" => Ok(Families::BOTH),
            _ => Err(Error::Invalid(format!("unknown index selection `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    pub format: Format,
    pub decimals: u32,
    pub families: Families,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            format: Format::Text,
            decimals: 2,
            families: Families::BOTH,
        }
    }
}

impl RenderOptions {
    pub fn new(format: Format, decimals: u32) -> Result<Self> {
        if decimals > 10 {
            return Err(Error::Invalid(format!(
                "decimals must be in 0..=10, not {decimals}"
            )));
        }
        Ok(RenderOptions {
            format,
            decimals,
            ..Default::default()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Text(String),
    Int(BigInt),
    /// A fraction rendered as a percentage.
    Pct(BigRational),
    Empty,
}

impl Cell {
    fn pct(x: &BigRational) -> Cell {
        Cell::Pct(x.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    /// CSV header and JSON field name.
    pub key: Cow<'static, str>,
    /// Header in text output.
    pub header: Cow<'static, str>,
    pub in_text: bool,
    pub in_csv: bool,
}

impl Column {
    pub fn all(key: impl Into<Cow<'static, str>>, header: impl Into<Cow<'static, str>>) -> Self {
        Column {
            key: key.into(),
            header: header.into(),
            in_text: true,
            in_csv: true,
        }
    }

    pub fn json_only(key: &'static str) -> Self {
        Column {
            in_text: false,
            in_csv: false,
            ..Column::all(key, key)
        }
    }

    /// Shown in CSV and JSON but not in text.
    pub fn data(key: &'static str) -> Self {
        Column {
            in_text: false,
            ..Column::all(key, key)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub title: Option<String>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn column(&self, key: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.key == key)
    }

    pub fn render(&self, opts: &RenderOptions) -> String {
        match opts.format {
            Format::Text => self.render_text(opts.decimals),
            Format::Csv => self.render_csv(opts.decimals),
            Format::Json => self.render_json(opts.decimals),
        }
    }

    fn render_text(&self, decimals: u32) -> String {
        let cols: Vec<usize> = (0..self.columns.len())
            .filter(|&k| self.columns[k].in_text)
            .collect();
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| cols.iter().map(|&k| plain(&r[k], decimals)).collect())
            .collect();
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                cells
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([self.columns[k].header.chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        if let Some(t) = &self.title {
            let _ = writeln!(out, "{t}");
        }
        let left: Vec<bool> = cols
            .iter()
            .map(|&k| {
                self.rows
                    .iter()
                    .all(|r| matches!(r[k], Cell::Text(_) | Cell::Empty))
            })
            .collect();
        let line = |out: &mut String, row: Vec<&str>| {
            let mut s = String::new();
            for (j, cell) in row.iter().enumerate() {
                let sep = if j == 0 { "" } else { "  " };
                if left[j] {
                    let _ = write!(s, "{sep}{cell:<w$}", w = widths[j]);
                } else {
                    let _ = write!(s, "{sep}{cell:>w$}", w = widths[j]);
                }
            }
            let _ = writeln!(out, "{}", s.trim_end());
        };
        line(
            &mut out,
            cols.iter().map(|&k| &*self.columns[k].header).collect(),
        );
        for r in &cells {
            line(&mut out, r.iter().map(String::as_str).collect());
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }

    fn render_csv(&self, decimals: u32) -> String {
        let cols: Vec<usize> = (0..self.columns.len())
            .filter(|&k| self.columns[k].in_csv)
            .collect();
        let mut out = String::new();
        let header: Vec<&str> = cols.iter().map(|&k| &*self.columns[k].key).collect();
        let _ = writeln!(out, "{}", header.join(","));
        for r in &self.rows {
            let fields: Vec<String> = cols
                .iter()
                .map(|&k| csv_field(&plain(&r[k], decimals)))
                .collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        out
    }

    fn render_json(&self, decimals: u32) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut obj = Map::new();
                for (c, cell) in self.columns.iter().zip(r) {
                    obj.insert(c.key.to_string(), json_cell(cell, decimals));
                }
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        if let Some(t) = &self.title {
            doc.insert("title".into(), Value::String(t.clone()));
        }
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert(
            "notes".into(),
            Value::Array(self.notes.iter().cloned().map(Value::String).collect()),
        );
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json");
        s.push('\n');
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn plain(cell: &Cell, decimals: u32) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Int(i) => i.to_string(),
        Cell::Pct(x) => format_pct(x, decimals),
        Cell::Empty => String::new(),
    }
}

fn json_cell(cell: &Cell, decimals: u32) -> Value {
    match cell {
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Int(i) => Value::String(i.to_string()),
        Cell::Pct(x) => json!({
            "percent": format_pct(x, decimals),
            "num": x.numer().to_string(),
            "den": x.denom().to_string(),
        }),
        Cell::Empty => Value::Null,
    }
}

/// Rounds `x` to an integer, ties to even.
pub fn round_half_even(x: &BigRational) -> BigInt {
    let floor = x.floor();
    let frac = x - &floor;
    let half = BigRational::new(1.into(), 2.into());
    let base = floor.to_integer();
    if frac > half || (frac == half && base.is_odd()) {
        base + 1
    } else {
        base
    }
}

/// `x * 100` with `decimals` digits after the point, rounded half to even.
pub fn format_pct(x: &BigRational, decimals: u32) -> String {
    let scale = BigInt::from(10u32).pow(decimals);
    let scaled = x * BigRational::from_integer(BigInt::from(100) * &scale);
    let k = round_half_even(&scaled);
    let sign = if k.is_negative() { "-" } else { "" };
    let (int, frac) = k.abs().div_rem(&scale);
    if decimals == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>w$}", w = decimals as usize)
    }
}

/// Positions in display order: descending by `key`, ties kept in roster order.
fn sorted_desc(keys: &[Option<&BigRational>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[b].cmp(&keys[a]));
    order
}

/// Display order of a result: by Banzhaf index (Shapley-Shubik if absent).
pub fn result_order(result: &PowerResult) -> Vec<usize> {
    let idx = result
        .index(IndexFamily::Banzhaf)
        .or_else(|| result.index(IndexFamily::ShapleyShubik));
    let keys: Vec<Option<&BigRational>> = (0..result.n()).map(|k| idx.map(|v| &v[k])).collect();
    sorted_desc(&keys)
}

pub fn result_table(result: &PowerResult, families: Families, title: Option<String>) -> Table {
    let mut columns = vec![
        Column::data("id"),
        Column::all("name", "voter"),
        Column::all("pop_share", "pop %"),
        Column::data("seats"),
        Column::json_only("pop_weight"),
    ];
    let banzhaf = result.banzhaf.as_ref().filter(|_| families.banzhaf);
    let shapley = result
        .shapley_shubik
        .as_ref()
        .filter(|_| families.shapley_shubik);
    if banzhaf.is_some() {
        columns.push(Column::json_only("banzhaf_score"));
        columns.push(Column::json_only("banzhaf_value"));
        columns.push(Column::all("banzhaf", "banzhaf %"));
    }
    if shapley.is_some() {
        columns.push(Column::all("shapley_shubik", "shapley-shubik %"));
    }
    let total = BigInt::from(result.meta.total_pop.max(1));
    let rows = result_order(result)
        .into_iter()
        .map(|k| {
            let v = &result.voters[k];
            let mut row = vec![
                Cell::Text(v.id.clone()),
                Cell::Text(v.name.clone()),
                Cell::Pct(BigRational::new(v.pop_weight.into(), total.clone())),
                Cell::Int(v.seat_weight.into()),
                Cell::Int(v.pop_weight.into()),
            ];
            if let Some(b) = banzhaf {
                row.push(Cell::Int(b.scores[k].clone().into()));
                row.push(Cell::pct(&b.values[k]));
                row.push(Cell::pct(&b.indices[k]));
            }
            if let Some(s) = shapley {
                row.push(Cell::pct(&s[k]));
            }
            row
        })
        .collect();
    Table {
        title,
        columns,
        rows,
        notes: Vec::new(),
    }
}

pub fn describe(result: &PowerResult, name: &str) -> String {
    let m = &result.meta;
    format!(
        "{name}: n = {}, rule {}, blocking minority {}",
        m.n,
        m.expr,
        if m.blocking { "on" } else { "off" }
    )
}

pub fn render_result(result: &PowerResult, opts: &RenderOptions, title: Option<String>) -> String {
    result_table(result, opts.families, title).render(opts)
}

pub fn diff_table(report: &DiffReport, families: Families, title: Option<String>) -> Table {
    let mut columns = vec![Column::data("id"), Column::all("name", "voter")];
    let shown: Vec<IndexFamily> = IndexFamily::ALL
        .into_iter()
        .filter(|&f| families.shows(f))
        .collect();
    for f in &shown {
        let cols: [Column; 4] = match f {
            IndexFamily::Banzhaf => [
                Column::all("banzhaf_before", "banzhaf %"),
                Column::all("banzhaf_after", "after %"),
                Column::all("banzhaf_pp", "diff pp"),
                Column::all("banzhaf_rel", "rel %"),
            ],
            IndexFamily::ShapleyShubik => [
                Column::all("shapley_shubik_before", "shapley-shubik %"),
                Column::all("shapley_shubik_after", "after %"),
                Column::all("shapley_shubik_pp", "diff pp"),
                Column::all("shapley_shubik_rel", "rel %"),
            ],
        };
        columns.extend(cols);
    }
    let sort_family = if report.rows.iter().any(|r| r.banzhaf.is_some()) {
        IndexFamily::Banzhaf
    } else {
        IndexFamily::ShapleyShubik
    };
    let keys: Vec<Option<&BigRational>> = report
        .rows
        .iter()
        .map(|r| r.family(sort_family).map(|d| &d.before))
        .collect();
    let rows = sorted_desc(&keys)
        .into_iter()
        .map(|k| {
            let r = &report.rows[k];
            let mut row = vec![Cell::Text(r.id.clone()), Cell::Text(r.name.clone())];
            for &f in &shown {
                match r.family(f) {
                    Some(d) => row.extend([
                        Cell::pct(&d.before),
                        Cell::pct(&d.after),
                        Cell::pct(&d.pp_diff),
                        d.rel_diff.as_ref().map_or(Cell::Empty, Cell::pct),
                    ]),
                    None => row.extend(std::iter::repeat_n(Cell::Empty, 4)),
                }
            }
            row
        })
        .collect();
    let mut notes = Vec::new();
    if !report.entrants.is_empty() {
        let ids: Vec<&str> = report.entrants.iter().map(|v| v.id.as_str()).collect();
        notes.push(format!("entrants: {}", ids.join(" ")));
    }
    if !report.departed.is_empty() {
        let ids: Vec<&str> = report.departed.iter().map(|v| v.id.as_str()).collect();
        notes.push(format!("departed: {}", ids.join(" ")));
    }
    Table {
        title,
        columns,
        rows,
        notes,
    }
}

pub fn render_diff(report: &DiffReport, opts: &RenderOptions, title: Option<String>) -> String {
    diff_table(report, opts.families, title).render(opts)
}

pub fn paradox_table(paradox: &ParadoxReport, families: Families) -> Table {
    let rows = paradox
        .gainers
        .iter()
        .filter(|g| families.shows(g.family))
        .map(|g| {
            vec![
                Cell::Text(g.id.clone()),
                Cell::Text(g.family.label().into()),
                Cell::pct(&g.pp_diff),
            ]
        })
        .collect();
    let mut notes: Vec<String> = paradox.note.iter().cloned().collect();
    if paradox.note.is_none() && paradox.is_empty() {
        notes.push("no incumbent gains power: no new-member paradox".into());
    }
    Table {
        title: Some("new-member paradox: incumbents whose index increased".into()),
        columns: vec![
            Column::all("id", "voter"),
            Column::all("index", "index"),
            Column::all("pp_diff", "gain pp"),
        ],
        rows,
        notes,
    }
}

/// Sum of the rounded percentages in a CSV column.
pub fn csv_column_sum(csv: &str, key: &str) -> Option<f64> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next()?.split(',').collect();
    let k = header.iter().position(|h| *h == key)?;
    lines
        .map(|l| l.split(',').nth(k).and_then(|f| f.parse::<f64>().ok()))
        .sum()
}

/// Several tables in one document: a JSON array, or blank-line separated otherwise.
pub fn render_tables(tables: &[Table], opts: &RenderOptions) -> String {
    let parts: Vec<String> = tables.iter().map(|t| t.render(opts)).collect();
    match opts.format {
        Format::Json => {
            let docs: Vec<Value> = parts
                .iter()
                .map(|p| serde_json::from_str(p).expect("rendered json"))
                .collect();
            let mut s = serde_json::to_string_pretty(&docs).expect("json");
            s.push('\n');
            s
        }
        _ => parts.join("\n"),
    }
}

/// Checks that each index column of a rendered CSV sums to 100 up to rounding.
pub fn check_index_sums(csv: &str, keys: &[&str], decimals: u32) -> Result<()> {
    let rows = csv
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .count()
        .saturating_sub(1);
    let slack = rows as f64 * 0.5 * 10f64.powi(-(decimals as i32)) + 1e-9;
    for key in keys {
        if let Some(sum) = csv_column_sum(csv, key) {
            if (sum - 100.0).abs() > slack {
                return Err(Error::Invalid(format!(
                    "column `{key}` sums to {sum}, outside 100 +/- {slack}"
                )));
            }
        }
    }
    Ok(())
}
