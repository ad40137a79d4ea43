use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsiege::{RoutingPolicy, SimConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qsiege",
    version,
    about = "Attack/defense analysis of a two-server queue"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stability of one profile (--a, --d) or of the whole (a, d) lattice.
    Stability,
    /// Mean queue length under both routing policies.
    Cost,
    /// Attacker and defender utilities at (a, d) with p = 1.
    Utilities,
    /// Equilibrium regime and strategies.
    Equilibrium,
    /// Security risk on the (a, d) lattice.
    RiskSurface,
    /// Equilibrium regime over c_a in (0, 5] and c_d in (0, 200].
    RegimeMap,
    /// Replicated simulation of one profile.
    Simulate {
        /// Write every event of replication 0 as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Shorter-queue versus Bernoulli routing at their equilibria.
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Jsq,
    Bernoulli,
}

impl From<PolicyArg> for RoutingPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Jsq => RoutingPolicy::ShorterQueue,
            PolicyArg::Bernoulli => RoutingPolicy::Bernoulli,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    #[arg(long, global = true)]
    pub policy: Option<PolicyArg>,
    /// Arrival rate.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Service rate of each server.
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    /// Attack cost per job.
    #[arg(long = "ca", global = true)]
    pub c_a: Option<f64>,
    /// Defense cost per job.
    #[arg(long = "cd", global = true)]
    pub c_d: Option<f64>,
    #[arg(long, global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true)]
    pub d: Option<f64>,
    /// Lattice points per axis.
    #[arg(long, global = true)]
    pub res: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Warmup fraction of the horizon.
    #[arg(long, global = true)]
    pub warmup: Option<f64>,
    #[arg(long, global = true)]
    pub reps: Option<usize>,
    /// CSV output file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with default values; flags take precedence.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
}

/// Flat key/value scenario document.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub policy: Option<RoutingPolicy>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub c_a: Option<f64>,
    pub c_d: Option<f64>,
    pub a: Option<f64>,
    pub p: Option<f64>,
    pub d: Option<f64>,
    pub resolution: Option<usize>,
    pub seed: Option<u64>,
    pub horizon: Option<f64>,
    pub warmup: Option<f64>,
    pub replications: Option<usize>,
}

impl Scenario {
    pub fn load(path: &PathBuf) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read scenario {}: {e}", path.display()))
        })?;
        toml::from_str(&text)
            .map_err(|e| CliError::Scenario(format!("{}: {}", path.display(), e.message())))
    }
}

/// Merged flag and scenario values. Serialised as the `inputs` echo.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<RoutingPolicy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub res: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warmup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(options: Options) -> Result<Self, CliError> {
        let file = match &options.scenario {
            Some(path) => Scenario::load(path)?,
            None => Scenario::default(),
        };
        Ok(Self {
            policy: options.policy.map(Into::into).or(file.policy),
            lambda: options.lambda.or(file.lambda),
            mu: options.mu.or(file.mu),
            c_a: options.c_a.or(file.c_a),
            c_d: options.c_d.or(file.c_d),
            a: options.a.or(file.a),
            p: options.p.or(file.p),
            d: options.d.or(file.d),
            res: options.res.or(file.resolution),
            seed: options.seed.or(file.seed),
            horizon: options.horizon.or(file.horizon),
            warmup: options.warmup.or(file.warmup),
            reps: options.reps.or(file.replications),
            out: options.out,
        })
    }

    pub fn policy(&self) -> Result<RoutingPolicy, CliError> {
        self.policy.ok_or(CliError::Missing("policy"))
    }

    /// Fills in the simulation defaults so they are echoed with the result.
    pub fn sim_config(&mut self) -> SimConfig {
        let defaults = SimConfig::default();
        SimConfig {
            seed: *self.seed.get_or_insert(defaults.seed),
            horizon: *self.horizon.get_or_insert(defaults.horizon),
            warmup_fraction: *self.warmup.get_or_insert(defaults.warmup_fraction),
            replications: *self.reps.get_or_insert(defaults.replications),
            ..defaults
        }
    }
}

pub fn require(value: Option<f64>, name: &'static str) -> Result<f64, CliError> {
    value.ok_or(CliError::Missing(name))
}
