//! Command-line front end: `compute`, `compare`, `presets` and `emit`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmv_power::artifacts::{emit, Artifact, EmitContext};
use qmv_power::data::{fixture, load_population_table, load_scenario_config, Fixture};
use qmv_power::report::{
    check_index_sums, describe, diff_table, paradox_table, render_tables, result_table, Cell,
    Column, Families, Format, RenderOptions, Table,
};
use qmv_power::scenarios::{preset, scenario_game, PRESETS};
use qmv_power::{
    compare, detect_paradox, oracle, Engine, Error, IndexFamily, PowerResult, Scenario,
};

/// Exit status for input and validation errors.
pub const EXIT_INPUT: i32 = 1;
/// Exit status when a memory budget or enumeration limit is exceeded.
pub const EXIT_RESOURCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qmv-power",
    version,
    about = "Exact Banzhaf and Shapley-Shubik indices for qualified-majority voting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Power indices of one scenario.
    Compute(ComputeArgs),
    /// Index changes between two scenarios.
    Compare(CompareArgs),
    /// List bundled scenarios and bloc presets.
    Presets(OutputArgs),
    /// Emit named table and figure datasets.
    Emit(EmitArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IndexArg {
    Banzhaf,
    Ss,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Digits after the decimal point (0 to 10).
    #[arg(long, default_value_t = 2)]
    decimals: u32,
}

#[derive(Debug, Args)]
struct GameArgs {
    /// Population CSV used for scenario files (defaults to the bundled EU36 table).
    #[arg(long)]
    population: Option<PathBuf>,
    /// Merge a bloc: a preset id or a bloc defined in the scenario file. Repeatable.
    #[arg(long = "bloc")]
    blocs: Vec<String>,
    #[arg(long, value_enum, default_value = "both")]
    index: IndexArg,
    #[arg(long = "blocking-minority", value_enum)]
    blocking_minority: Option<Toggle>,
    /// Largest n for which `--verify` enumerates all coalitions.
    #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
    oracle_limit: usize,
    /// Cross-check against full enumeration when n is within the oracle limit.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Bundled scenario name (eu27, eu33, eu36, eec1958) or path to a scenario file.
    #[arg(long)]
    scenario: String,
    #[command(flatten)]
    game: GameArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    base: String,
    #[arg(long)]
    target: String,
    /// Also list incumbents whose power increased.
    #[arg(long)]
    paradox: bool,
    #[command(flatten)]
    game: GameArgs,
}

#[derive(Debug, Args)]
struct EmitArgs {
    /// Artifacts to emit (table1..table8, fig1..fig8, nordic-check) or `all`.
    #[arg(required = true)]
    artifacts: Vec<String>,
    /// Write one file per artifact into this directory instead of standard output.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
    oracle_limit: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the command line `args` (including the program name), writing data to
/// `out` and diagnostics to `err`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Compute(a) => cmd_compute(a, out, err),
        Command::Compare(a) => cmd_compare(a, out, err),
        Command::Presets(a) => cmd_presets(a, out),
        Command::Emit(a) => cmd_emit(a, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_resource() {
                EXIT_RESOURCE
            } else {
                EXIT_INPUT
            }
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn render_options(o: &OutputArgs, index: IndexArg) -> Outcome<RenderOptions> {
    let format = match o.format {
        FormatArg::Text => Format::Text,
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let mut opts = RenderOptions::new(format, o.decimals)?;
    opts.families = Families {
        banzhaf: !matches!(index, IndexArg::Ss),
        shapley_shubik: !matches!(index, IndexArg::Banzhaf),
    };
    Ok(opts)
}

/// Builds a scenario from a bundled name or a scenario file, then applies blocs and toggles.
fn load_scenario(spec: &str, args: &GameArgs) -> Outcome<Scenario> {
    let (default_table, mut config) = match spec.parse::<Fixture>() {
        Ok(which) => fixture(which),
        Err(_) => {
            let config = load_scenario_config(&read(Path::new(spec))?)?;
            (fixture(Fixture::Eu36).0, config)
        }
    };
    let table = match &args.population {
        Some(path) => load_population_table(&read(path)?)?,
        None => default_table,
    };
    let defined = std::mem::take(&mut config.blocs);
    if args.blocs.is_empty() {
        config.blocs = defined.clone();
    }
    let mut scenario = Scenario::from_config(&table, &config)?;
    for name in &args.blocs {
        scenario = match defined.iter().find(|b| &b.id == name) {
            Some(bloc) => scenario.with_bloc(bloc.clone())?,
            None if preset(name).is_some() => scenario.with_preset(name)?,
            None => {
                return Err(Error::Invalid(format!(
                    "`{name}` is neither a bloc in the scenario nor a preset"
                ))
                .into())
            }
        };
    }
    if let Some(t) = args.blocking_minority {
        scenario = scenario.with_blocking(matches!(t, Toggle::On));
    }
    Ok(scenario)
}

fn evaluate(scenario: &Scenario, args: &GameArgs, err: &mut dyn Write) -> Outcome<PowerResult> {
    let game = scenario_game(scenario)?;
    let engine = Engine::default();
    let result = match args.index {
        IndexArg::Banzhaf => engine.banzhaf(&game)?,
        IndexArg::Ss => engine.shapley_shubik(&game)?,
        IndexArg::Both => engine.compute_all(&game)?,
    };
    if args.verify {
        if game.n() > args.oracle_limit {
            let _ = writeln!(
                err,
                "{}: verification skipped, n = {} exceeds the oracle limit {}",
                scenario.name,
                game.n(),
                args.oracle_limit
            );
        } else {
            let exact = oracle::oracle_all(&game, args.oracle_limit)?;
            let agree = IndexFamily::ALL
                .into_iter()
                .all(|f| result.index(f).is_none_or(|v| Some(v) == exact.index(f)));
            if !agree {
                return Err(Error::Invalid(format!(
                    "{}: engine and enumeration disagree",
                    scenario.name
                ))
                .into());
            }
            let _ = writeln!(
                err,
                "{}: verified against full enumeration (n = {})",
                scenario.name,
                game.n()
            );
        }
    }
    Ok(result)
}

fn emit_text(out: &mut dyn Write, text: &str) -> Outcome<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Io(format!("writing output: {e}")))
}

fn cmd_compute(a: ComputeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome<()> {
    let opts = render_options(&a.game.output, a.game.index)?;
    let scenario = load_scenario(&a.scenario, &a.game)?;
    let result = evaluate(&scenario, &a.game, err)?;
    let table = result_table(
        &result,
        opts.families,
        Some(describe(&result, &scenario.name)),
    );
    let text = table.render(&opts);
    if opts.format == Format::Csv {
        check_index_sums(&text, &["banzhaf", "shapley_shubik"], opts.decimals)?;
    }
    emit_text(out, &text)
}

fn cmd_compare(a: CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome<()> {
    let opts = render_options(&a.game.output, a.game.index)?;
    let base = load_scenario(&a.base, &a.game)?;
    let target = load_scenario(&a.target, &a.game)?;
    let before = evaluate(&base, &a.game, err)?;
    let after = evaluate(&target, &a.game, err)?;
    let report = compare(&before, &after)?;
    let title = format!("{} -> {}", base.name, target.name);
    let mut tables = vec![diff_table(&report, opts.families, Some(title))];
    if a.paradox {
        tables.push(paradox_table(&detect_paradox(&report), opts.families));
    }
    emit_text(out, &render_tables(&tables, &opts))
}

fn cmd_presets(a: OutputArgs, out: &mut dyn Write) -> Outcome<()> {
    let opts = render_options(&a, IndexArg::Both)?;
    let scenarios = Fixture::ALL
        .iter()
        .map(|&which| {
            let s = Scenario::fixture(which);
            let rule = scenario_game(&s)
                .map(|g| g.expr().to_string())
                .unwrap_or_default();
            vec![
                Cell::Text(which.name().into()),
                Cell::Int(s.roster.len().into()),
                Cell::Text(rule),
            ]
        })
        .collect();
    let blocs = PRESETS
        .iter()
        .map(|p| {
            vec![
                Cell::Text(p.id.into()),
                Cell::Text(p.name.into()),
                Cell::Text(p.members.join(" ")),
            ]
        })
        .collect();
    let tables = [
        Table {
            title: Some("scenarios".into()),
            columns: vec![
                Column::all("scenario", "scenario"),
                Column::all("members", "members"),
                Column::all("rule", "rule"),
            ],
            rows: scenarios,
            notes: Vec::new(),
        },
        Table {
            title: Some("bloc presets".into()),
            columns: vec![
                Column::all("bloc", "bloc"),
                Column::all("name", "name"),
                Column::all("members", "members"),
            ],
            rows: blocs,
            notes: Vec::new(),
        },
    ];
    emit_text(out, &render_tables(&tables, &opts))
}

fn cmd_emit(a: EmitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome<()> {
    let opts = render_options(&a.output, IndexArg::Both)?;
    let mut artifacts = Vec::new();
    for name in &a.artifacts {
        if name == "all" {
            artifacts.extend(Artifact::all());
        } else {
            artifacts.push(name.parse::<Artifact>()?);
        }
    }
    let ctx = EmitContext {
        engine: Engine::default(),
        oracle_limit: a.oracle_limit,
    };
    let mut rendered = Vec::new();
    for artifact in artifacts {
        let table = emit(artifact, &ctx)?;
        if opts.format == Format::Csv && matches!(artifact, Artifact::Fig(1..=6)) {
            check_index_sums(&table.render(&opts), &["banzhaf", "shapley"], opts.decimals)?;
        }
        match &a.out_dir {
            Some(dir) => {
                let ext = match opts.format {
                    Format::Text => "txt",
                    Format::Csv => "csv",
                    Format::Json => "json",
                };
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
                let path = dir.join(format!("{artifact}.{ext}"));
                fs::write(&path, table.render(&opts))
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                let _ = writeln!(err, "wrote {}", path.display());
            }
            None => rendered.push(table),
        }
    }
    if rendered.is_empty() {
        return Ok(());
    }
    emit_text(out, &render_tables(&rendered, &opts))
}
