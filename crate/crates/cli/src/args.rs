use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pfl_core::{ContactMode, HumanMass, PostPeak};

#[derive(Debug, Parser)]
#[command(
    name = "pfl",
    version,
    about = "Power-and-force-limiting speed limits, impact simulation and sweeps"
)]
pub struct Cli {
    /// Body-region table (CSV); defaults to the bundled reference table.
    #[arg(long, global = true, value_name = "PATH")]
    pub body_table: Option<PathBuf>,

    /// Robot model (TOML); defaults to the bundled 7-DoF arm.
    #[arg(long, global = true, value_name = "PATH")]
    pub robot: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,

    /// Format of tabular output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a two-mass spring impact.
    Simulate(SimulateArgs),
    /// Admissible pre-collision speeds per body region.
    Limits(LimitsArgs),
    /// Workspace sweep of speed limits.
    Sweep(SweepArgs),
    /// Run the velocity filter / energy tank loop.
    Filter(FilterArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Robot effective mass, kg.
    #[arg(long)]
    pub mr: f64,
    /// Human effective mass, kg, or `inf` for a clamped body part.
    #[arg(long)]
    pub mh: HumanMass,
    /// Contact stiffness, N/m.
    #[arg(long)]
    pub k: f64,
    /// Approach speed, m/s.
    #[arg(long)]
    pub v0: f64,
    /// Step size, s (default: natural period / 1000).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Simulated time, s (default: one natural period).
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Spring behaviour after maximum compression.
    #[arg(long, default_value = "release")]
    pub post_peak: PostPeak,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    /// Region name or `all`.
    #[arg(long, default_value = "all")]
    pub region: String,
    /// transient, quasi_static_free, quasi_static_clamped, or `all`.
    #[arg(long, default_value = "transient")]
    pub mode: String,
    /// Robot effective mass in kg, or `iso` for half the robot's moving mass.
    #[arg(long, default_value = "iso")]
    pub mass: String,
    /// Payload added to the `iso` mass, kg.
    #[arg(long, default_value_t = 0.0)]
    pub payload: f64,
    /// Contact area, cm².
    #[arg(long, default_value_t = pfl_core::DEFAULT_CONTACT_AREA_CM2)]
    pub area: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep configuration (TOML).
    pub config: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Filter scenario (TOML).
    pub scenario: PathBuf,
}

pub fn parse_modes(s: &str) -> pfl_core::Result<Vec<ContactMode>> {
    if s.eq_ignore_ascii_case("all") {
        Ok(ContactMode::ALL.to_vec())
    } else {
        s.split(',').map(str::parse).collect()
    }
}
