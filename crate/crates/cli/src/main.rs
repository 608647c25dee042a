//! Command-line front end: classify penalties, solve instances offline, run
//! single simulations, duel algorithms against adversaries, sweep k, and run
//! the validation suite.

mod output;
mod penalty_spec;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use omdsc_core::adversaries::parse_source;
use omdsc_core::algorithms::parse_algorithm;
use omdsc_core::engine::{run, EngineConfig, Instance};
use omdsc_core::numerics::scalar::{Backend, Exact, Scalar, F64};
use omdsc_core::offline::optimal_cost_dp;
use omdsc_core::penalty::CaseVariant;
use omdsc_core::{competitive_ratio, validation, Error, Result};

use output::{emit, DuelReport};
use penalty_spec::load_penalty;

#[derive(Parser)]
#[command(name = "omdsc", version, about = "Online matching with delays and size-based costs: simulation laboratory")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Numeric backend (env: OMDSC_BACKEND).
    #[arg(long, global = true, env = "OMDSC_BACKEND")]
    backend: Option<BackendArg>,
    /// Optional TOML config; command-line flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true)]
    format: Option<FormatArg>,
    /// Base RNG seed for randomized sources.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Event budget per run.
    #[arg(long, global = true)]
    horizon_events: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Effective settings after merging config file defaults and flags.
#[derive(Clone)]
struct Settings {
    backend: Backend,
    out: Option<PathBuf>,
    format: FormatArg,
    seed: u64,
    horizon_events: u64,
}

#[derive(serde::Deserialize, Default)]
struct FileConfig {
    backend: Option<String>,
    format: Option<String>,
    seed: Option<u64>,
    horizon_events: Option<u64>,
    out: Option<PathBuf>,
}

fn merge_settings(global: &GlobalOpts) -> Result<Settings> {
    let file: FileConfig = match &global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            toml::from_str(&text).map_err(|e| Error::Parse(format!("config: {e}")))?
        }
        None => FileConfig::default(),
    };
    let backend = match global.backend {
        Some(BackendArg::Exact) => Backend::Exact,
        Some(BackendArg::Float) => Backend::Float,
        None => match file.backend.as_deref() {
            Some(s) => s.parse()?,
            None => Backend::Exact,
        },
    };
    let format = match global.format {
        Some(f) => f,
        None => match file.format.as_deref() {
            Some("csv") => FormatArg::Csv,
            Some("json") | None => FormatArg::Json,
            Some(other) => return Err(Error::Parse(format!("unknown format {other:?}"))),
        },
    };
    Ok(Settings {
        backend,
        out: global.out.clone().or(file.out),
        format,
        seed: global.seed.or(file.seed).unwrap_or(0),
        horizon_events: global.horizon_events.or(file.horizon_events).unwrap_or(2_000_000),
    })
}

#[derive(Subcommand)]
enum Command {
    /// Classify a binary penalty and report its competitive-ratio regime.
    Classify {
        /// Penalty spec or JSON file (case1 | case2:K | zeros:A,B | ceil_div:K | linear | path).
        penalty: String,
    },
    /// Offline-optimal cost of an instance file.
    Opt {
        /// Instance JSON (penalty embedded).
        instance: PathBuf,
    },
    /// Run one algorithm against one source and print the transcript.
    Run {
        #[arg(long)]
        alg: String,
        #[arg(long)]
        source: String,
        #[arg(long)]
        penalty: String,
        /// Stop at this time, flushing whatever is unmatched.
        #[arg(long)]
        horizon_time: Option<String>,
        /// Also write the realized arrival schedule as an instance file.
        #[arg(long)]
        export_instance: Option<PathBuf>,
    },
    /// Run, then compare against the offline optimum.
    Duel {
        #[arg(long)]
        alg: String,
        #[arg(long)]
        source: String,
        #[arg(long)]
        penalty: String,
        /// Skip the offline solve above this many requests.
        #[arg(long, default_value_t = 20_000)]
        opt_limit: u64,
        /// Also write the realized arrival schedule as an instance file.
        #[arg(long)]
        export_instance: Option<PathBuf>,
    },
    /// Ratio statistics for the recurring algorithm across k.
    Sweep {
        /// Comma-separated list of k values.
        #[arg(long, value_delimiter = ',')]
        k: Vec<u64>,
        #[arg(long, default_value_t = 5)]
        trials: u64,
        #[arg(long, default_value_t = 20_000)]
        opt_limit: u64,
    },
    /// Run the full acceptance suite.
    Validate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match merge_settings(&cli.global) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let code = match dispatch(&cli.command, &settings) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    ExitCode::from(code)
}

fn dispatch(command: &Command, settings: &Settings) -> Result<u8> {
    match settings.backend {
        Backend::Exact => dispatch_typed::<Exact>(command, settings),
        Backend::Float => dispatch_typed::<F64>(command, settings),
    }
}

fn dispatch_typed<S: Scalar>(command: &Command, settings: &Settings) -> Result<u8> {
    match command {
        Command::Classify { penalty } => cmd_classify::<S>(penalty, settings),
        Command::Opt { instance } => cmd_opt::<S>(instance, settings),
        Command::Run {
            alg,
            source,
            penalty,
            horizon_time,
            export_instance,
        } => cmd_run::<S>(
            alg,
            source,
            penalty,
            horizon_time.as_deref(),
            export_instance.as_deref(),
            settings,
        ),
        Command::Duel {
            alg,
            source,
            penalty,
            opt_limit,
            export_instance,
        } => cmd_duel::<S>(
            alg,
            source,
            penalty,
            *opt_limit,
            export_instance.as_deref(),
            settings,
        ),
        Command::Sweep {
            k,
            trials,
            opt_limit,
        } => sweep::cmd_sweep::<S>(k, *trials, *opt_limit, settings),
        Command::Validate => cmd_validate(settings),
    }
}

fn cmd_classify<S: Scalar>(penalty: &str, settings: &Settings) -> Result<u8> {
    let penalty = load_penalty::<S>(penalty)?;
    let class = omdsc_core::penalty::classify(&penalty)?;
    let (case, k, regime) = match class.variant {
        CaseVariant::I => ("i", None, "2-competitive".to_string()),
        CaseVariant::II { k } => {
            let regime = match k {
                1 => "1-competitive".to_string(),
                2 => "3-competitive".to_string(),
                _ => "Theta(log k / log log k)".to_string(),
            };
            ("ii", Some(k), regime)
        }
        CaseVariant::III => ("iii", None, "unbounded".to_string()),
    };
    let report = serde_json::json!({
        "case": case,
        "k": k,
        "zeros": class.zeros,
        "regime": regime,
    });
    let human = match k {
        Some(k) => format!("Case ({case}), k={k}: {regime}"),
        None => format!("Case ({case}): {regime}"),
    };
    emit(settings.out.as_deref(), &format!("{human}\n{}", serde_json::to_string_pretty(&report)?))?;
    Ok(0)
}

fn cmd_opt<S: Scalar>(path: &PathBuf, settings: &Settings) -> Result<u8> {
    let text = std::fs::read_to_string(path)?;
    let instance: Instance<S> = serde_json::from_str(&text)?;
    let penalty = instance.penalty().clone();
    let solution = optimal_cost_dp(&instance, &penalty)?;
    emit(
        settings.out.as_deref(),
        &serde_json::to_string_pretty(&solution)?,
    )?;
    Ok(0)
}

fn engine_config<S: Scalar>(settings: &Settings, horizon_time: Option<&str>) -> Result<EngineConfig<S>> {
    Ok(EngineConfig {
        horizon_time: horizon_time.map(S::parse).transpose()?,
        max_events: settings.horizon_events,
    })
}

fn cmd_run<S: Scalar>(
    alg_spec: &str,
    source_spec: &str,
    penalty_spec: &str,
    horizon_time: Option<&str>,
    export_instance: Option<&std::path::Path>,
    settings: &Settings,
) -> Result<u8> {
    let penalty = load_penalty::<S>(penalty_spec)?;
    let source_spec = resolve_seed(source_spec, settings.seed);
    let mut alg = parse_algorithm::<S>(alg_spec, &penalty)?;
    let mut source = parse_source::<S>(&source_spec, &penalty)?;
    let config = engine_config::<S>(settings, horizon_time)?;
    let transcript = run(alg.as_mut(), source.as_mut(), &penalty, &config)?;
    if let Some(path) = export_instance {
        std::fs::write(path, serde_json::to_string_pretty(&transcript.instance)?)?;
    }
    emit(
        settings.out.as_deref(),
        &serde_json::to_string_pretty(&transcript)?,
    )?;
    Ok(0)
}

fn cmd_duel<S: Scalar>(
    alg_spec: &str,
    source_spec: &str,
    penalty_spec: &str,
    opt_limit: u64,
    export_instance: Option<&std::path::Path>,
    settings: &Settings,
) -> Result<u8> {
    let penalty = load_penalty::<S>(penalty_spec)?;
    let source_spec = resolve_seed(source_spec, settings.seed);
    let mut alg = parse_algorithm::<S>(alg_spec, &penalty)?;
    let mut source = parse_source::<S>(&source_spec, &penalty)?;
    let config = engine_config::<S>(settings, None)?;
    let transcript = run(alg.as_mut(), source.as_mut(), &penalty, &config)?;
    if let Some(path) = export_instance {
        std::fs::write(path, serde_json::to_string_pretty(&transcript.instance)?)?;
    }

    let m = transcript.instance.total_requests();
    let (opt_cost, opt_note) = if m <= opt_limit {
        let sol = optimal_cost_dp(&transcript.instance, &penalty)?;
        (Some(sol.cost), None)
    } else {
        (
            None,
            Some(format!("offline solve skipped: {m} requests > limit {opt_limit}")),
        )
    };
    let ratio = match &opt_cost {
        Some(opt) => Some(competitive_ratio(&transcript.total_cost(), opt)?),
        None => None,
    };

    let violations: Vec<String> = transcript
        .diagnostics
        .algorithm
        .violations
        .iter()
        .chain(transcript.diagnostics.source.violations.iter())
        .cloned()
        .collect();
    let ok = violations.is_empty();

    let report = DuelReport {
        algorithm: transcript.algorithm.clone(),
        source: transcript.source.clone(),
        backend: S::BACKEND,
        requests: m,
        alg_cost: transcript.total_cost(),
        opt_cost,
        ratio,
        final_round: transcript.diagnostics.source.final_round,
        violations,
        note: opt_note,
        transcript,
    };
    emit(
        settings.out.as_deref(),
        &serde_json::to_string_pretty(&report)?,
    )?;
    Ok(if ok { 0 } else { 2 })
}

fn cmd_validate(settings: &Settings) -> Result<u8> {
    let report = validation::run_all()?;
    let mut text = String::new();
    for c in &report.criteria {
        text.push_str(&c.line());
        text.push('\n');
    }
    if matches!(settings.format, FormatArg::Json) && settings.out.is_some() {
        emit(
            settings.out.as_deref(),
            &serde_json::to_string_pretty(&report)?,
        )?;
        print!("{text}");
    } else {
        emit(settings.out.as_deref(), text.trim_end())?;
    }
    Ok(if report.all_passed() { 0 } else { 2 })
}

/// Substitute the global seed into `poisson:rate,m,seed=auto` style specs.
fn resolve_seed(spec: &str, seed: u64) -> String {
    spec.replace("seed=auto", &seed.to_string())
}
