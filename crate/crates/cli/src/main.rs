//! `starlab`: seeded experiments on the fragment extension, with JSON and
//! text reports.
//!
//! Exit codes: 0 every check passed, 1 usage or configuration error, 2 a
//! law check failed, 3 only inconclusive outcomes remain.

mod commands;
mod config;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use config::Params;
use report::{RunReport, Status, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(
    name = "starlab",
    version,
    about = "Experiments on functional extensions of ℕ"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Scenario file of `key = value` lines; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Also write the report as JSON.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest modulus scanned by equality tests [env: STARLAB_HORIZON].
    #[arg(long, global = true)]
    horizon: Option<u64>,
    /// `principal:K`, `profinite:int:C` or `profinite:lazy:seed=S[:avoid=on|off]`.
    #[arg(long, global = true)]
    oracle: Option<String>,
    /// Any configuration key, as `key=value`.
    #[arg(long = "param", short = 'p', global = true, value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Write the effective configuration as a scenario file.
    #[arg(long, global = true, value_name = "FILE")]
    save_config: Option<PathBuf>,
    /// Suppress the text report.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Randomized (comp), (equ), (dir) checks.
    Axioms {
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Condition (H) for a pair of maps.
    Hausdorff {
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
    },
    /// Monad comparisons: a chosen pair plus random pairs.
    Indiscernibles {
        #[arg(long)]
        xi: Option<String>,
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        pairs: Option<u64>,
    },
    /// The diagonal against U⊗U, and the projections of U⊗U against U.
    Tensor {
        #[arg(long)]
        probe_modulus: Option<u64>,
        #[arg(long)]
        probe_prefix: Option<u64>,
        #[arg(long)]
        random_probes: Option<u64>,
    },
    /// Witnesses for finite families with the finite intersection property.
    Possibility {
        /// Sets separated by `;`.
        #[arg(long)]
        sets: Option<String>,
        #[arg(long)]
        random: Option<u64>,
    },
    /// Łoś and universal-closure checks for a formula.
    Transfer {
        #[arg(long)]
        formula: Option<String>,
        /// `name = function; ...`
        #[arg(long)]
        functions: Option<String>,
        /// `name = set; ...`
        #[arg(long)]
        sets: Option<String>,
        #[arg(long)]
        points: Option<u64>,
    },
    /// Pushforward orbit of the oracle.
    Orbit {
        /// Functions separated by `;`.
        #[arg(long)]
        generators: Option<String>,
        #[arg(long)]
        depth: Option<u64>,
    },
    /// Exhaustive search for star maps on a finite universe.
    FiniteSearch {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        e: Option<u64>,
        /// Comma-separated subset of comp, equ, wequ, dir.
        #[arg(long)]
        require: Option<String>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Atoms of the algebra generated by a few sets.
    Stone {
        /// Sets separated by `;`.
        #[arg(long)]
        generators: Option<String>,
        /// Points (functions) separated by `;` to trace.
        #[arg(long)]
        points: Option<String>,
    },
    /// Re-runs a JSON report from its echoed config and compares.
    Replay { report: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Axioms { .. } => "axioms",
            Command::Hausdorff { .. } => "hausdorff",
            Command::Indiscernibles { .. } => "indiscernibles",
            Command::Tensor { .. } => "tensor",
            Command::Possibility { .. } => "possibility",
            Command::Transfer { .. } => "transfer",
            Command::Orbit { .. } => "orbit",
            Command::FiniteSearch { .. } => "finite-search",
            Command::Stone { .. } => "stone",
            Command::Replay { .. } => "replay",
        }
    }

    fn flags(&self) -> Vec<(&'static str, Option<String>)> {
        let s = |v: &Option<u64>| v.map(|x| x.to_string());
        match self {
            Command::Axioms { samples } => vec![("samples", s(samples))],
            Command::Hausdorff { f, g } => vec![("f", f.clone()), ("g", g.clone())],
            Command::Indiscernibles { xi, eta, pairs } => vec![
                ("xi", xi.clone()),
                ("eta", eta.clone()),
                ("pairs", s(pairs)),
            ],
            Command::Tensor {
                probe_modulus,
                probe_prefix,
                random_probes,
            } => vec![
                ("probe-modulus", s(probe_modulus)),
                ("probe-prefix", s(probe_prefix)),
                ("random-probes", s(random_probes)),
            ],
            Command::Possibility { sets, random } => {
                vec![("sets", sets.clone()), ("random", s(random))]
            }
            Command::Transfer {
                formula,
                functions,
                sets,
                points,
            } => vec![
                ("formula", formula.clone()),
                ("functions", functions.clone()),
                ("sets", sets.clone()),
                ("points", s(points)),
            ],
            Command::Orbit { generators, depth } => {
                vec![("generators", generators.clone()), ("depth", s(depth))]
            }
            Command::FiniteSearch {
                k,
                e,
                require,
                budget,
            } => vec![
                ("k", s(k)),
                ("e", s(e)),
                ("require", require.clone()),
                ("budget", s(budget)),
            ],
            Command::Stone { generators, points } => {
                vec![
                    ("generators", generators.clone()),
                    ("points", points.clone()),
                ]
            }
            Command::Replay { .. } => Vec::new(),
        }
    }
}

fn given_params(cli: &Cli) -> Result<BTreeMap<String, String>> {
    let mut given = match &cli.global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            config::parse_text(&text)?
        }
        None => BTreeMap::new(),
    };
    let g = &cli.global;
    let globals = [
        ("seed", g.seed.map(|v| v.to_string())),
        ("horizon", g.horizon.map(|v| v.to_string())),
        ("oracle", g.oracle.clone()),
    ];
    for (k, v) in globals.into_iter().chain(cli.command.flags()) {
        if let Some(v) = v {
            given.insert(k.to_string(), v);
        }
    }
    for kv in &g.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| anyhow!("--param expects KEY=VALUE, got `{kv}`"))?;
        given.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(given)
}

fn run_report(subcommand: &str, given: BTreeMap<String, String>) -> Result<RunReport> {
    let params = Params::new(given);
    let start = Instant::now();
    let outcome = commands::run(subcommand, &params)?;
    params.check_unused()?;
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        subcommand: subcommand.to_string(),
        config: params.echo(),
        status: outcome.status,
        exit_code: outcome.status.exit_code(),
        summary: outcome.summary,
        results: outcome.results,
        commitment_log: outcome.log,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

fn replay(path: &PathBuf) -> Result<RunReport> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let original: Value = serde_json::from_str(&text).context("report is not JSON")?;
    let subcommand = original
        .get("subcommand")
        .and_then(Value::as_str)
        .filter(|s| commands::NAMES.contains(s))
        .ok_or_else(|| anyhow!("report has no known `subcommand`"))?;
    let config: BTreeMap<String, String> = serde_json::from_value(
        original
            .get("config")
            .cloned()
            .ok_or_else(|| anyhow!("report has no `config`"))?,
    )
    .context("`config` must map keys to strings")?;
    let start = Instant::now();
    let rerun = run_report(subcommand, config.clone())?.to_json();
    let diffs = report::differences(
        &report::comparable(&original),
        &report::comparable(&rerun),
        20,
    );
    let status = if diffs.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        subcommand: "replay".into(),
        config: BTreeMap::from([("report".to_string(), path.display().to_string())]),
        status,
        exit_code: status.exit_code(),
        summary: format!(
            "replayed `{subcommand}`: {}",
            if diffs.is_empty() {
                "identical"
            } else {
                "differs"
            }
        ),
        results: json!({
            "replayedSubcommand": subcommand,
            "replayedConfig": config,
            "identical": diffs.is_empty(),
            "differences": diffs,
        }),
        commitment_log: Vec::new(),
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

fn execute(cli: &Cli) -> Result<RunReport> {
    match &cli.command {
        Command::Replay { report } => replay(report),
        cmd => run_report(cmd.name(), given_params(cli)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let value = report.to_json();
    if let Some(path) = &cli.global.json {
        let text = serde_json::to_string_pretty(&value).expect("JSON values print") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if let Some(path) = &cli.global.save_config {
        if let Err(e) = std::fs::write(path, config::render_text(&report.config)) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if !cli.global.quiet {
        print!("{}", report::render(&value));
    }
    ExitCode::from(report.exit_code as u8)
}
