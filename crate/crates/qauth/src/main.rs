//! Command-line surface: run protocols, analyze complexity, compare
//! groups, and print the ten-protocol registry table.
//!
//! Exit codes: 0 success, 1 protocol rejected or eavesdropping detected,
//! 2 usage error, 3 unsupported operation.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qauth::adversary::{
    detection_rate, impersonation_acceptance, AdversaryKind, BasisStrategy, GuessStrategy,
    TamperRule,
};
use qauth::ledger::{
    self, classify, compare, counted_communications, fit_complexity, tally, AuthTask,
    CompareEntry, ComplexityExpr, ModelClass, PairOrder,
};
use qauth::protocols::{find_spec, registry, run_simulable, ProtocolError, ProtocolSpec, RunParams};
use qauth::report::{
    unix_timestamp, AnalyzeReport, OutcomeSummary, Rates, Report, ReportParams, TableReport,
    TableRow, SCHEMA_VERSION,
};
use qauth::rng::derive_seed;

const EXIT_REJECTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

/// Analysis grid plus the held-out size the fit must predict exactly.
const GRID_SIZES: [u64; 3] = [2, 4, 8];
const HELD_OUT_SIZE: u64 = 16;

#[derive(Parser)]
#[command(name = "qauth", version, about = "Quantum authentication protocol laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdversaryFlag {
    None,
    Intercept,
    Substitute,
    Impersonate,
}

impl AdversaryFlag {
    fn label(self) -> &'static str {
        match self {
            AdversaryFlag::None => "none",
            AdversaryFlag::Intercept => "intercept",
            AdversaryFlag::Substitute => "substitute",
            AdversaryFlag::Impersonate => "impersonate",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatFlag {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Key / security-parameter size
    #[arg(long)]
    n: Option<usize>,
    /// Message size
    #[arg(long)]
    m: Option<usize>,
    /// Extra security parameter (check bits)
    #[arg(long)]
    s: Option<usize>,
    /// Pair budget per direction
    #[arg(long)]
    k: Option<usize>,
    /// Monte Carlo trials for rate estimation
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    adversary: Option<AdversaryFlag>,
    #[arg(long, value_enum)]
    format: Option<FormatFlag>,
    /// Suppress the timestamp so output is byte-identical across runs
    #[arg(long)]
    deterministic: bool,
    /// JSON file holding the same settings as the flags
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

/// On-disk settings; explicit flags override these.
#[derive(Debug, Default, Deserialize)]
struct ConfigFile {
    n: Option<usize>,
    m: Option<usize>,
    s: Option<usize>,
    k: Option<usize>,
    trials: Option<u64>,
    seed: Option<u64>,
    adversary: Option<String>,
    format: Option<String>,
    deterministic: Option<bool>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one protocol run and report its resource accounting
    Run {
        protocol: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Fit measured communication counts against the declared complexity
    Analyze {
        protocol: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Group protocols by model and rank within each group
    Compare {
        protocols: Vec<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Print the full ten-protocol registry table
    Table {
        #[command(flatten)]
        flags: CommonFlags,
    },
}

/// Flag values after merging CLI, config file, and defaults.
struct Settings {
    n: usize,
    m: usize,
    s: usize,
    k: Option<usize>,
    trials: Option<u64>,
    seed: u64,
    adversary: AdversaryFlag,
    format: FormatFlag,
    deterministic: bool,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn resolve(flags: &CommonFlags) -> Result<Settings, String> {
    let cfg = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str::<ConfigFile>(&text)
                .map_err(|e| format!("invalid config {}: {e}", path.display()))?
        }
        None => ConfigFile::default(),
    };
    let adversary = match flags.adversary {
        Some(a) => a,
        None => match cfg.adversary.as_deref() {
            None => AdversaryFlag::None,
            Some("none") => AdversaryFlag::None,
            Some("intercept") => AdversaryFlag::Intercept,
            Some("substitute") => AdversaryFlag::Substitute,
            Some("impersonate") => AdversaryFlag::Impersonate,
            Some(other) => return Err(format!("unknown adversary `{other}` in config")),
        },
    };
    let format = match flags.format {
        Some(f) => f,
        None => match cfg.format.as_deref() {
            None | Some("text") => FormatFlag::Text,
            Some("json") => FormatFlag::Json,
            Some(other) => return Err(format!("unknown format `{other}` in config")),
        },
    };
    Ok(Settings {
        n: flags.n.or(cfg.n).unwrap_or(8),
        m: flags.m.or(cfg.m).unwrap_or(8),
        s: flags.s.or(cfg.s).unwrap_or(4),
        k: flags.k.or(cfg.k),
        trials: flags.trials.or(cfg.trials),
        seed: flags.seed.or(cfg.seed).unwrap_or(0),
        adversary,
        format,
        deterministic: flags.deterministic || cfg.deterministic.unwrap_or(false),
    })
}

fn adversary_kind(flag: AdversaryFlag, id: &str, n: usize) -> AdversaryKind {
    match flag {
        AdversaryFlag::None => AdversaryKind::None,
        AdversaryFlag::Intercept => AdversaryKind::InterceptResend {
            basis: BasisStrategy::UniformRandom,
            tag_filter: None,
        },
        // The only classical-channel protocol gets a classical tamper rule;
        // everything else sees a qubit flip on each intercepted send.
        AdversaryFlag::Substitute => {
            if id == "zeng_guo" {
                AdversaryKind::Substitution(TamperRule::RewriteClassical(vec![true; n.max(1)]))
            } else {
                AdversaryKind::Substitution(TamperRule::FlipQubit(0))
            }
        }
        AdversaryFlag::Impersonate => AdversaryKind::Impersonation(GuessStrategy::UniformKeyGuess),
    }
}

fn run_params(s: &Settings) -> RunParams {
    RunParams {
        n: s.n,
        m: s.m,
        s: s.s,
        k: s.k,
        message: None,
    }
}

fn cmd_run(id: &str, settings: &Settings) -> ExitCode {
    let spec = match find_spec(id) {
        Ok(spec) => spec,
        Err(e) => return usage_error(&e.to_string()),
    };
    if !spec.simulable {
        eprintln!(
            "error: `{id}` has no executable form; use `qauth analyze {id}` for its declared values"
        );
        return ExitCode::from(EXIT_UNSUPPORTED);
    }
    let params = run_params(settings);
    let adversary = adversary_kind(settings.adversary, id, settings.n);
    let (outcome, session) = match run_simulable(id, &params, adversary.clone(), settings.seed) {
        Ok(r) => r,
        Err(ProtocolError::Config(msg)) => return usage_error(&msg),
        Err(ProtocolError::Budget { n, k }) => {
            return usage_error(&format!("pair budget exceeded: n = {n}, k = {k}"))
        }
        Err(e) => return usage_error(&e.to_string()),
    };
    let t = tally(session.event_log());
    let model = classify(&t).expect("a run always communicates");

    let rates = match settings.trials {
        None => None,
        Some(trials) => {
            let mut rates = Rates::default();
            let est = if settings.adversary == AdversaryFlag::Impersonate {
                impersonation_acceptance(id, &params, trials, settings.seed)
                    .map(|e| rates.impersonation_acceptance = Some(e))
            } else {
                detection_rate(id, &params, &adversary, trials, settings.seed)
                    .map(|e| rates.detection = Some(e))
            };
            if let Err(e) = est {
                return usage_error(&e.to_string());
            }
            Some(rates)
        }
    };

    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: qauth::report::tool_version().to_string(),
        protocol: id.to_string(),
        params: ReportParams {
            n: settings.n,
            m: settings.m,
            s: settings.s,
            k: settings.k,
            trials: settings.trials,
            seed: settings.seed,
            adversary: settings.adversary.label().to_string(),
        },
        tally: t,
        model,
        expression: ledger::notation(model, &spec.declared_complexity, spec.kind, false),
        outcome: OutcomeSummary::from(&outcome),
        rates,
        timestamp: (!settings.deterministic).then(unix_timestamp),
    };
    match settings.format {
        FormatFlag::Text => print!("{}", report.render_text()),
        FormatFlag::Json => println!("{}", report.to_json()),
    }
    if outcome.accepted && !outcome.eavesdrop_detected {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_REJECTED)
    }
}

/// Measure counted communications for one honest run at a grid size.
fn measure_point(
    spec: &ProtocolSpec,
    size: u64,
    s_param: usize,
    seed: u64,
) -> Result<((u64, u64), u64), ProtocolError> {
    let (n, m) = match spec.kind {
        AuthTask::Identity => (size as usize, 0),
        AuthTask::DataOrigin => (1, size as usize),
    };
    let params = RunParams {
        n,
        m,
        s: s_param,
        k: None,
        message: None,
    };
    let (_, session) = run_simulable(spec.id, &params, AdversaryKind::None, derive_seed(seed, size))?;
    let t = tally(session.event_log());
    let model = classify(&t).expect("a run always communicates");
    let point = match spec.kind {
        AuthTask::Identity => (size, 0),
        AuthTask::DataOrigin => (0, size),
    };
    Ok((point, counted_communications(&t, model)))
}

/// `((n, m), counted communications)` measurements.
type GridPoints = Vec<((u64, u64), u64)>;

/// Fit over the grid, then check held-out prediction and declared-coefficient
/// agreement. Returns the grid (including the held-out point) alongside.
fn fit_and_verify(
    spec: &ProtocolSpec,
    seed: u64,
) -> Result<(ComplexityExpr, bool, GridPoints), ProtocolError> {
    // The declared expression for the classical-cipher protocol excludes its
    // check-bit parameter, so the fit pins s = 0.
    let s_param = 0;
    let mut grid = Vec::new();
    for &size in &GRID_SIZES {
        grid.push(measure_point(spec, size, s_param, seed)?);
    }
    let fitted = fit_complexity(&grid)
        .map_err(|e| ProtocolError::Config(format!("fit failed for {}: {e}", spec.id)))?;
    let held_out = measure_point(spec, HELD_OUT_SIZE, s_param, seed)?;
    let exact_on_held_out =
        fitted.evaluate(held_out.0 .0, held_out.0 .1) == num_rational::Ratio::from_integer(held_out.1 as i64);
    let agreement =
        exact_on_held_out && fitted.same_coefficients(&spec.declared_complexity);
    grid.push(held_out);
    Ok((fitted, agreement, grid))
}

fn cmd_analyze(id: &str, settings: &Settings) -> ExitCode {
    let spec = match find_spec(id) {
        Ok(spec) => spec,
        Err(e) => return usage_error(&e.to_string()),
    };
    let declared = ledger::notation(
        spec.declared_model,
        &spec.declared_complexity,
        spec.kind,
        false,
    );
    let mut report = AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        tool_version: qauth::report::tool_version().to_string(),
        protocol: id.to_string(),
        simulable: spec.simulable,
        declared,
        fitted: None,
        agreement: None,
        grid: None,
        timestamp: (!settings.deterministic).then(unix_timestamp),
    };
    if spec.simulable {
        match fit_and_verify(&spec, settings.seed) {
            Ok((fitted, agreement, grid)) => {
                report.fitted =
                    Some(ledger::notation(spec.declared_model, &fitted, spec.kind, false));
                report.agreement = Some(agreement);
                report.grid = Some(grid);
            }
            Err(e) => return usage_error(&e.to_string()),
        }
    }
    match settings.format {
        FormatFlag::Text => print!("{}", report.render_text()),
        FormatFlag::Json => println!("{}", report.to_json()),
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct CompareGroupOut {
    model: ModelClass,
    entries: Vec<CompareEntryOut>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct CompareEntryOut {
    rank: usize,
    protocol: String,
    expression: String,
}

fn cmd_compare(ids: &[String], settings: &Settings) -> ExitCode {
    if ids.len() < 2 {
        return usage_error("compare requires at least two protocol ids");
    }
    let mut entries = Vec::new();
    for id in ids {
        let spec = match find_spec(id) {
            Ok(spec) => spec,
            Err(e) => return usage_error(&e.to_string()),
        };
        entries.push(CompareEntry {
            id: spec.id.to_string(),
            model: spec.declared_model,
            expr: spec.declared_complexity,
        });
    }
    let groups = match compare(&entries) {
        Ok(g) => g,
        Err(e) => return usage_error(&e.to_string()),
    };
    let mut out = Vec::new();
    for g in &groups {
        let entries = g
            .entries
            .iter()
            .map(|e| {
                let task = find_spec(&e.id).expect("registry id").kind;
                CompareEntryOut {
                    rank: e.rank,
                    protocol: e.id.clone(),
                    expression: ledger::notation(g.model, &e.expr, task, false),
                }
            })
            .collect();
        let notes = g
            .notes
            .iter()
            .map(|(a, b, order)| match order {
                PairOrder::Equivalent => format!("{a} and {b} are equivalent"),
                PairOrder::Conditional { first_cheaper_when } => {
                    format!("{a} is cheaper than {b} when {first_cheaper_when}")
                }
                PairOrder::NotComparable => {
                    format!("{a} and {b} are not comparable (mixed bound kinds)")
                }
                other => format!("{a} vs {b}: {other:?}"),
            })
            .collect();
        out.push(CompareGroupOut {
            model: g.model,
            entries,
            notes,
        });
    }
    match settings.format {
        FormatFlag::Json => {
            println!("{}", serde_json::to_string_pretty(&out).expect("serializes"))
        }
        FormatFlag::Text => {
            for g in &out {
                println!("{:?} group:", g.model);
                for e in &g.entries {
                    println!("  {}. {:<16} {}", e.rank, e.protocol, e.expression);
                }
                for n in &g.notes {
                    println!("  note: {n}");
                }
            }
            if out.len() > 1 {
                println!("note: no ranking is defined across model groups");
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_table(settings: &Settings) -> ExitCode {
    let mut rows = Vec::new();
    for spec in registry() {
        let verified = if spec.simulable {
            match fit_and_verify(&spec, settings.seed) {
                Ok((_, agreement, _)) => Some(agreement),
                Err(e) => return usage_error(&e.to_string()),
            }
        } else {
            None
        };
        rows.push(TableRow {
            protocol: spec.id.to_string(),
            task: spec.kind.function_symbol().to_string(),
            model: spec.declared_model,
            complexity: spec.declared_complexity.to_string(),
            simulable: spec.simulable,
            verified,
        });
    }
    let report = TableReport {
        schema_version: SCHEMA_VERSION,
        tool_version: qauth::report::tool_version().to_string(),
        rows,
        timestamp: (!settings.deterministic).then(unix_timestamp),
    };
    match settings.format {
        FormatFlag::Text => print!("{}", report.render_text()),
        FormatFlag::Json => println!("{}", report.to_json()),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = match &cli.command {
        Command::Run { flags, .. }
        | Command::Analyze { flags, .. }
        | Command::Compare { flags, .. }
        | Command::Table { flags } => flags,
    };
    let settings = match resolve(flags) {
        Ok(s) => s,
        Err(msg) => return usage_error(&msg),
    };
    match &cli.command {
        Command::Run { protocol, .. } => cmd_run(protocol, &settings),
        Command::Analyze { protocol, .. } => cmd_analyze(protocol, &settings),
        Command::Compare { protocols, .. } => cmd_compare(protocols, &settings),
        Command::Table { .. } => cmd_table(&settings),
    }
}
