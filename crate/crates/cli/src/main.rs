//! `qwalk`: build coin sets, check the unitarity conditions, run the full
//! operator oracle and simulate walks.
//!
//! Exit codes: 0 on success or a passing check, 1 on usage or input errors,
//! 2 when a check fails.

mod initial;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use qwalk_core::coins::registry;
use qwalk_core::generalized::{self, GeneralizedWalk};
use qwalk_core::group::{GroupKind, Topology};
use qwalk_core::unitarity::{self, OracleDefect, DEFAULT_CONDITION_TOL};
use qwalk_core::walk::{self, NORM_TOL};
use qwalk_core::{CoinSet, GraphRealization, GroupPresentation, RealizationParams, UnitarityReport, Walk};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const DEFAULT_SEED: u64 = 20_231_117;

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Discrete-time quantum walks on Cayley graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the catalog of coin families as JSON
    Families {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a coin set and write it as JSON
    Build {
        #[command(flatten)]
        source: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the unitarity conditions of a coin set
    Check {
        #[command(flatten)]
        source: CoinSource,
        /// Also build the walk operator on --graph and measure its defect
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_name = "SPEC")]
        graph: Option<String>,
        /// Generalized walk JSON to check instead of a coin set
        #[arg(long, value_name = "FILE", conflicts_with_all = ["coins", "family"])]
        generalized: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CONDITION_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the full walk operator on a finite graph and measure W†W − I, WW† − I
    Oracle {
        #[command(flatten)]
        source: CoinSource,
        #[arg(long, value_name = "SPEC")]
        graph: Option<String>,
        #[arg(long, default_value_t = DEFAULT_CONDITION_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve a localized state and write the position distribution as CSV
    Simulate {
        #[command(flatten)]
        source: CoinSource,
        #[arg(long, value_name = "SPEC")]
        graph: Option<String>,
        #[arg(long, value_name = "N")]
        steps: u64,
        /// `uniform`, `basis:K` or `vec:Z1,Z2,...`, optionally followed by `@WORD` (e.g. `@d1^2 d2`)
        #[arg(long, value_name = "SPEC", default_value = "uniform")]
        initial: String,
        #[arg(long, default_value_t = DEFAULT_CONDITION_TOL)]
        tol: f64,
        /// Run even if the coins fail the check; norm drift is still reported
        #[arg(long)]
        force: bool,
        /// Distribution CSV (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-step variance CSV; torus graphs only
        #[arg(long, value_name = "PATH")]
        variance: Option<PathBuf>,
        /// Per-step probability at the antipode; hypercube graphs only
        #[arg(long, value_name = "PATH")]
        antipodal: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    family: String,
    /// Family parameters as `k=v,...`
    #[arg(long, value_name = "K=V,...", default_value = "")]
    params: String,
    /// Group presentation, e.g. `free:a,b` or `abelian:n=2`
    #[arg(long, value_name = "SPEC")]
    presentation: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct CoinSource {
    /// Coin set JSON
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    coins: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_name = "K=V,...", default_value = "")]
    params: String,
    #[arg(long, value_name = "SPEC")]
    presentation: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// A failed check, as opposed to bad input.
#[derive(Debug)]
struct CheckFailed;

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check failed")
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<CheckFailed>() => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Families { out } => output::emit_text(out.as_deref(), &(registry::catalog_json() + "\n")),
        Command::Build { source, out } => {
            let coins = build_family(
                &source.family,
                &source.params,
                source.presentation.as_deref(),
                source.seed,
            )?;
            output::emit_text(out.as_deref(), &(coins.to_json() + "\n"))
        }
        Command::Check {
            source,
            oracle,
            graph,
            generalized,
            tol,
            out,
        } => {
            validate_tol(tol)?;
            match generalized {
                Some(path) => check_generalized(&path, tol, oracle, out.as_deref()),
                None => check(&source, oracle, graph.as_deref(), tol, out.as_deref()),
            }
        }
        Command::Oracle {
            source,
            graph,
            tol,
            out,
        } => {
            validate_tol(tol)?;
            let coins = load_coins(&source)?;
            let realization = realize(&coins, graph.as_deref())?;
            let defect = unitarity::oracle_check(&coins, &realization)?;
            let local = unitarity::check_cayley_conditions(&coins, tol);
            let doc = json!({
                "graph": graph_label(&coins, graph.as_deref()),
                "vertices": realization.vertex_count(),
                "operator_size": realization.vertex_count() * coins.dim(),
                "left": defect.left,
                "right": defect.right,
                "max": defect.max(),
                "tolerance": tol,
                "pass": defect.passes(tol),
                "local_pass": local.pass,
            });
            output::emit_text(out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
            if defect.passes(tol) {
                Ok(())
            } else {
                Err(CheckFailed.into())
            }
        }
        Command::Simulate {
            source,
            graph,
            steps,
            initial,
            tol,
            force,
            out,
            variance,
            antipodal,
        } => {
            validate_tol(tol)?;
            simulate(SimulateConfig {
                source: &source,
                graph: graph.as_deref(),
                steps,
                initial: &initial,
                tol,
                force,
                out: out.as_deref(),
                variance: variance.as_deref(),
                antipodal: antipodal.as_deref(),
            })
        }
    }
}

fn validate_tol(tol: f64) -> anyhow::Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        bail!("--tol must be a positive number, got {tol}");
    }
    Ok(())
}

fn build_family(family: &str, params: &str, presentation: Option<&str>, seed: u64) -> anyhow::Result<CoinSet> {
    let params = registry::parse_params(params)?;
    let presentation = presentation.map(GroupPresentation::parse).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(registry::build(family, &params, presentation.as_ref(), &mut rng)?)
}

fn load_coins(source: &CoinSource) -> anyhow::Result<CoinSet> {
    match (&source.coins, &source.family) {
        (Some(path), None) => {
            if !source.params.is_empty() || source.presentation.is_some() {
                bail!("--params and --presentation only apply together with --family");
            }
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            CoinSet::from_json(&text).with_context(|| format!("parsing {}", path.display()))
        }
        (None, Some(family)) => build_family(family, &source.params, source.presentation.as_deref(), source.seed),
        _ => bail!("give exactly one of --coins FILE or --family NAME"),
    }
}

/// Hypercube presentations have a canonical realization; everything else
/// needs `--graph`.
fn realize(coins: &CoinSet, graph: Option<&str>) -> anyhow::Result<GraphRealization> {
    let p = coins.presentation();
    let params = match graph {
        Some(spec) => RealizationParams::parse(spec)?,
        None if matches!(p.kind(), GroupKind::Hypercube) => RealizationParams::Hypercube,
        None => bail!("--graph is required for presentation {}", p.spec()),
    };
    Ok(GraphRealization::realize(p, &params)?)
}

fn graph_label(coins: &CoinSet, graph: Option<&str>) -> String {
    graph.map_or_else(
        || format!("hypercube (from {})", coins.presentation().spec()),
        str::to_string,
    )
}

fn check(source: &CoinSource, oracle: bool, graph: Option<&str>, tol: f64, out: Option<&Path>) -> anyhow::Result<()> {
    if graph.is_some() && !oracle {
        bail!("--graph is only used together with --oracle");
    }
    let coins = load_coins(source)?;
    let mut report = unitarity::check_cayley_conditions(&coins, tol);
    let mut pass = report.pass;
    if oracle {
        let realization = realize(&coins, graph)?;
        let defect = unitarity::oracle_check(&coins, &realization)?;
        pass &= defect.passes(tol);
        report.oracle = Some(defect);
    }
    finish_report(&report, pass, out)
}

fn check_generalized(path: &Path, tol: f64, oracle: bool, out: Option<&Path>) -> anyhow::Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let w = GeneralizedWalk::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let mut report = w.check(tol)?;
    let mut pass = report.pass;
    if oracle {
        let (left, right) = generalized::generalized_oracle(&w.graph, &w.spaces, &w.maps)?;
        let defect = OracleDefect { left, right };
        pass &= defect.passes(tol);
        report.oracle = Some(defect);
    }
    finish_report(&report, pass, out)
}

fn finish_report(report: &UnitarityReport, pass: bool, out: Option<&Path>) -> anyhow::Result<()> {
    output::emit_text(out, &(report.to_json() + "\n"))?;
    if let Some(path) = out {
        println!("{}", if pass { "pass" } else { "fail" });
        eprintln!("report written to {}", path.display());
    }
    if pass {
        Ok(())
    } else {
        Err(CheckFailed.into())
    }
}

struct SimulateConfig<'a> {
    source: &'a CoinSource,
    graph: Option<&'a str>,
    steps: u64,
    initial: &'a str,
    tol: f64,
    force: bool,
    out: Option<&'a Path>,
    variance: Option<&'a Path>,
    antipodal: Option<&'a Path>,
}

fn simulate(cfg: SimulateConfig) -> anyhow::Result<()> {
    let coins = load_coins(cfg.source)?;
    let realization = realize(&coins, cfg.graph)?;

    // validate everything before the run
    let (internal, vertex) = initial::parse(cfg.initial, &coins, &realization)?;
    let displacement = match (cfg.variance, realization.topology()) {
        (None, _) => None,
        (Some(_), Topology::Torus { side, .. }) => {
            let min_side = 2 * cfg.steps + 2;
            if (*side as u64) < min_side {
                bail!(
                    "side {side} lets the walk wrap within {} steps; use side ≥ {min_side}",
                    cfg.steps
                );
            }
            let d: Vec<Vec<i64>> = (0..realization.vertex_count())
                .map(|v| realization.signed_displacement(vertex, v).expect("torus"))
                .collect();
            Some(d)
        }
        (Some(_), _) => bail!("--variance needs a torus graph"),
    };
    let antipode = match (cfg.antipodal, realization.topology()) {
        (None, _) => None,
        (Some(_), Topology::Hypercube { rank }) => Some(vertex ^ ((1usize << rank) - 1)),
        (Some(_), _) => bail!("--antipodal needs a hypercube graph"),
    };

    let report = unitarity::check_cayley_conditions(&coins, cfg.tol);
    if !report.pass {
        if !cfg.force {
            eprintln!(
                "coins fail the unitarity conditions (max residual {:e}); use --force to run anyway",
                report.max_residual
            );
            return Err(CheckFailed.into());
        }
        eprintln!(
            "warning: coins fail the unitarity conditions (max residual {:e})",
            report.max_residual
        );
    }

    let w = Walk::new(coins, realization)?.unchecked();
    let mut state = w.initial_state(vertex, &internal)?;
    let mut drift: f64 = 0.0;
    let mut variance_rows = Vec::new();
    let mut antipodal_rows = Vec::new();
    for t in 1..=cfg.steps {
        state = w.step(&state)?;
        let norm = state.norm();
        drift = drift.max((norm - 1.0).abs());
        if !cfg.force && (norm - 1.0).abs() > NORM_TOL {
            bail!("norm drifted to {norm} at step {t}");
        }
        if displacement.is_some() || antipode.is_some() {
            let dist = walk::position_distribution(&state);
            if let Some(d) = &displacement {
                variance_rows.push((t, walk::variance(&dist, d)));
            }
            if let Some(a) = antipode {
                antipodal_rows.push((t, dist.get(a)));
            }
        }
    }

    let dist = walk::position_distribution(&state);
    let (header, rows) = dist.table(w.realization(), vertex);
    output::emit_table(cfg.out, &header, &rows)?;
    if let Some(path) = cfg.variance {
        output::emit_trace(path, "variance", &variance_rows)?;
    }
    if let Some(path) = cfg.antipodal {
        output::emit_trace(path, "prob", &antipodal_rows)?;
    }
    if cfg.out.is_some() || cfg.force {
        let summary = json!({
            "steps": cfg.steps,
            "vertices": w.realization().vertex_count(),
            "total_probability": dist.total(),
            "norm_drift": drift,
            "check_pass": report.pass,
            "forced": cfg.force,
        });
        // the distribution owns stdout when it has no file
        if cfg.out.is_some() {
            println!("{}", serde_json::to_string_pretty(&summary)?);
        } else {
            eprintln!("{}", serde_json::to_string(&summary)?);
        }
    }
    Ok(())
}
