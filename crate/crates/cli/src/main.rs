//! `bfd run`: solve one of the example problems on a sequence of meshes.

mod manifest;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use bfd_core::adapt::{self, StopReason};
use bfd_core::Error;
use clap::{Args, Parser, Subcommand};
use log::{error, info};

use manifest::{Mode, Problem, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "bfd", version, about = "Adaptive mixed FEM for coupled Brinkman-Forchheimer/Darcy flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve, estimate and refine, writing history.csv and per-level exports.
    Run(RunArgs),
}

/// Flags override values from `--config`, which override the defaults.
#[derive(Args, Debug, Default)]
struct RunArgs {
    #[arg(long, value_enum)]
    problem: Option<Problem>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Maximum number of solved levels.
    #[arg(long)]
    levels: Option<usize>,
    /// Stop before solving a level with more degrees of freedom.
    #[arg(long)]
    dof_budget: Option<usize>,
    /// Marking constant in (0, 1).
    #[arg(long)]
    c_adt: Option<f64>,
    #[arg(long)]
    newton_tol: Option<f64>,
    /// Forchheimer exponent in [3, 4].
    #[arg(long)]
    rho: Option<f64>,
    /// Output directory.
    #[arg(long, env = "BFD_OUT")]
    out: Option<PathBuf>,
    /// Worker threads for assembly and estimation.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// TOML (or `.json`) run manifest.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn manifest(&self) -> Result<RunManifest> {
        let mut m = match &self.config {
            Some(path) => RunManifest::load(path)?,
            None => RunManifest::default(),
        };
        if self.config.is_none() && self.problem.is_none() {
            anyhow::bail!("--problem is required unless --config is given");
        }
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field.clone() { m.$field = v; })* };
        }
        set!(problem, mode, levels, c_adt, newton_tol, out, seed);
        if self.dof_budget.is_some() {
            m.dof_budget = self.dof_budget;
        }
        if self.rho.is_some() {
            m.rho = self.rho;
        }
        if self.threads.is_some() {
            m.threads = self.threads;
        }
        m.validate()?;
        Ok(m)
    }
}

enum Outcome {
    Done,
    Diverged,
}

fn run(m: &RunManifest) -> Result<Outcome> {
    if let Some(n) = m.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    fs::create_dir_all(&m.out).with_context(|| format!("creating output directory {}", m.out.display()))?;
    fs::write(m.out.join("manifest.toml"), m.to_toml()?).context("writing manifest.toml")?;

    let problem = m.problem.name().build::<f64>(m.rho);
    let history = adapt::run(&problem, &m.adapt_config(), |snap| {
        let r = snap.record;
        info!(
            "level {}: {} DoF, {} Newton iterations, theta {:.4e}{}",
            r.level,
            r.dof,
            r.newton_iterations,
            r.theta,
            r.errors.map(|e| format!(", e_total {:.4e}", e.total())).unwrap_or_default()
        );
        output::write_level(&m.out, snap).map_err(|e| Error::Io(std::io::Error::other(format!("{e:#}"))))
    })?;
    output::write_history(&m.out.join("history.csv"), &history.records)?;
    match history.stop {
        StopReason::Failed(Error::Divergence { iterations, .. }) => {
            error!("Newton diverged after {iterations} iterations on level {}", history.records.len());
            Ok(Outcome::Diverged)
        }
        StopReason::Failed(e) => Err(e.into()),
        stop => {
            info!("stopped: {stop:?}; {} levels written to {}", history.records.len(), m.out.display());
            Ok(Outcome::Done)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let Command::Run(args) = cli.command;
    let manifest = match args.manifest() {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    match run(&manifest) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Diverged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            let diverged = matches!(e.downcast_ref::<Error>(), Some(Error::Divergence { .. }));
            ExitCode::from(if diverged { 2 } else { 1 })
        }
    }
}
