//! Command-line front end: runs the checks declared in a scenario file and
//! writes human-readable lines, JSON reports, and CSV convergence tables.
//!
//! Exit codes: `0` when every executed task passes, `1` when a task fails,
//! `2` for configuration or i/o problems (reported before any task runs,
//! with no partial output files).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use holonomy::scenario::{load_scenario, Scenario};
use holonomy::surface::truncated_surface_comparison;

#[derive(Parser)]
#[command(
    name = "holonomy",
    version,
    about = "Parallel transport on paths and surfaces: scenario checks and reports",
    after_help = "Without a subcommand, every task declared in the scenario runs in order."
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write the JSON report (or JSON convergence table) here.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Write the CSV convergence table here.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,

    /// Override the seed declared in the scenario.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Suppress per-task lines on stdout.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Crossed-module structure identities on random samples.
    CheckCm,
    /// Base-path parallel transport stays on the structure group.
    TransportPath,
    /// The full surface lift stays on the structure groups.
    TransportSurface,
    /// Closed-form bi-holonomy against the explicit four-sided loop.
    Biholonomy,
    /// Tangency of the lifted variation field against the curvature integral.
    VerifyStokes,
    /// Path-space transport against edge transport times the surface class.
    VerifyTgb,
    /// Endpoint evaluation of path-space transport against base transport.
    VerifyPtev1a,
    /// Invariance of the surface class under reparametrization.
    VerifyReparam,
    /// Double-category laws and quasi-flat closure on random squares.
    PlaquetteVerify,
    /// Rerun the scenario tasks across a ladder of grid resolutions and fit
    /// convergence orders.
    Convergence {
        /// Comma-separated grid resolutions (each even, at least 10).
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        n_values: Vec<usize>,
    },
    /// Split the surface at half height and compare the full lift against
    /// the lift of the lower half.
    DemoHalfpath,
}

impl Command {
    /// The scenario task a subcommand restricts the run to.
    fn task_name(&self) -> Option<&'static str> {
        match self {
            Command::CheckCm => Some("check-cm"),
            Command::TransportPath => Some("transport-path"),
            Command::TransportSurface => Some("transport-surface"),
            Command::Biholonomy => Some("biholonomy"),
            Command::VerifyStokes => Some("stokes"),
            Command::VerifyTgb => Some("tgb"),
            Command::VerifyPtev1a => Some("ptev1a"),
            Command::VerifyReparam => Some("reparam"),
            Command::PlaquetteVerify => Some("plaquette"),
            Command::Convergence { .. } | Command::DemoHalfpath => None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Runs the requested command; `Ok(true)` means every executed task passed.
fn execute(cli: Cli) -> Result<bool> {
    let mut scenario = load(&cli.common)?;

    match &cli.command {
        None => run_report(&scenario, &cli.common),
        Some(command) => match command.task_name() {
            Some(task) => {
                scenario
                    .restrict_to(task)
                    .with_context(|| format!("cannot run task `{task}` on this scenario"))?;
                run_report(&scenario, &cli.common)
            }
            None => match command {
                Command::Convergence { n_values } => {
                    run_convergence(&scenario, n_values, &cli.common)
                }
                Command::DemoHalfpath => run_demo_halfpath(&scenario, &cli.common),
                _ => unreachable!("task subcommands handled above"),
            },
        },
    }
}

fn load(common: &Common) -> Result<Scenario> {
    let path = common
        .config
        .as_ref()
        .context("missing --config PATH (a TOML scenario file)")?;
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read scenario file {}", path.display()))?;
    let mut scenario =
        load_scenario(&text).with_context(|| format!("in scenario file {}", path.display()))?;
    if let Some(seed) = common.seed {
        scenario.set_seed(seed);
    }
    Ok(scenario)
}

fn run_report(scenario: &Scenario, common: &Common) -> Result<bool> {
    let report = scenario.run();
    if !common.quiet {
        for record in &report.tasks {
            let verdict = if record.pass { "PASS" } else { "FAIL" };
            match &record.error {
                Some(message) => println!(
                    "{:<18} {}  error: {}  [{:.1} ms]",
                    record.task, verdict, message, record.wall_time_ms
                ),
                None => println!(
                    "{:<18} {}  residual {:.3e}  tolerance {:.1e}  [{:.1} ms]",
                    record.task, verdict, record.residual, record.tolerance, record.wall_time_ms
                ),
            }
        }
    }
    if let Some(path) = &common.out {
        fs::write(path, report.to_json())
            .with_context(|| format!("cannot write report {}", path.display()))?;
    }
    Ok(report.all_passed())
}

fn run_convergence(scenario: &Scenario, n_values: &[usize], common: &Common) -> Result<bool> {
    if n_values.is_empty() {
        bail!("--n-values must list at least one resolution");
    }
    let table = scenario.run_convergence(n_values)?;
    if !common.quiet {
        print!("{}", table.to_csv());
    }
    if let Some(path) = &common.csv {
        fs::write(path, table.to_csv())
            .with_context(|| format!("cannot write table {}", path.display()))?;
    }
    if let Some(path) = &common.out {
        let mut text = serde_json::to_string_pretty(&table)?;
        text.push('\n');
        fs::write(path, text)
            .with_context(|| format!("cannot write table {}", path.display()))?;
    }
    Ok(true)
}

fn run_demo_halfpath(scenario: &Scenario, common: &Common) -> Result<bool> {
    let (abar, a, b2) = scenario.build_fields()?;
    let (n_t, n_s) = scenario.resolution();
    let grid = scenario.build_grid(n_t, n_s)?;
    let comparison = truncated_surface_comparison(scenario.crossed_module(), &a, &abar, &b2, &grid)?;
    if !common.quiet {
        println!(
            "restricting the surface to its lower half changes the path-space transport by {:.6e}",
            comparison.c_gap
        );
        println!(
            "and the surface class by {:.6e}; both gaps measure the upper half's contribution",
            comparison.h_gap
        );
    }
    if let Some(path) = &common.out {
        let mut text = serde_json::to_string_pretty(&serde_json::json!({
            "scenario": scenario.name(),
            "c_gap": comparison.c_gap,
            "h_gap": comparison.h_gap,
        }))?;
        text.push('\n');
        fs::write(path, text)
            .with_context(|| format!("cannot write output {}", path.display()))?;
    }
    Ok(true)
}
