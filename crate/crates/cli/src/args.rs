use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Schrödinger map and binormal flow experiments.
#[derive(Debug, Parser)]
#[command(name = "filamentlab", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kida parameter table (m, eps, k, omega, c, v, a, ell, drift) as CSV.
    Kida(KidaArgs),
    /// Integrate the Schrödinger map from an initial tangent field.
    Evolve(EvolveArgs),
    /// Distances, discrepancy F and the inequality suite between two curves.
    Discrepancy(DiscrepancyArgs),
    /// Gronwall control of F between a smooth and a perturbed solution.
    Gronwall(ConfigArgs),
    /// Empirical weak-strong stability constant.
    Weakstrong(ConfigArgs),
    /// Drift Ω − C of the Kida family.
    Illposed(IllposedArgs),
    /// Pointwise estimate on random admissible samples.
    Pointwise(ConfigArgs),
    /// Residual of the weak formulation over saved frames.
    Weakform(ConfigArgs),
    /// Fast invariant suite.
    Selftest(SelftestArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kida(_) => "kida",
            Command::Evolve(_) => "evolve",
            Command::Discrepancy(_) => "discrepancy",
            Command::Gronwall(_) => "gronwall",
            Command::Weakstrong(_) => "weakstrong",
            Command::Illposed(_) => "illposed",
            Command::Pointwise(_) => "pointwise",
            Command::Weakform(_) => "weakform",
            Command::Selftest(_) => "selftest",
        }
    }
}

#[derive(Debug, Args)]
pub struct KidaArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, conflicts_with = "delta_from_m")]
    pub delta: Option<f64>,
    /// Use δ = 1/(m²−1).
    #[arg(long)]
    pub delta_from_m: bool,
    /// Windings, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<u32>,
    /// Drift family amplitude σ̃ (α = 1, β = 1 − σ̃m^{−3/2}, δ = 1/(m²−1)).
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["alpha", "beta", "delta", "delta_from_m"])]
    pub sigma: Option<f64>,
    /// Rescale each curve to period 2π.
    #[arg(long)]
    pub rescale: bool,
    /// Output directory (table.csv and report.json); CSV to stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    #[arg(long)]
    pub t_end: f64,
    #[arg(long, default_value_t = 10)]
    pub save_every: usize,
    /// circle | constant | kida:<m>[:<sigma>] | file:<path>
    #[arg(long, default_value = "circle")]
    pub init: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DiscrepancyArgs {
    /// Curve CSV of Γ (the compared curve).
    pub big_gamma: PathBuf,
    /// Curve CSV of γ (the reference curve).
    pub gamma: PathBuf,
    /// Cutoff radius, at most r_γ/8 of the reference curve.
    #[arg(long)]
    pub r: f64,
    /// Output directory for report.json; JSON to stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// TOML experiment config.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IllposedArgs {
    #[arg(long, allow_negative_numbers = true, required_unless_present = "config")]
    pub sigma: Option<f64>,
    #[arg(long, value_delimiter = ',', required_unless_present = "config")]
    pub m: Vec<u32>,
    /// Also integrate one family member and measure its drift.
    #[arg(long)]
    pub cross_check: bool,
    /// TOML config instead of flags.
    #[arg(long, conflicts_with_all = ["sigma", "m", "cross_check"])]
    pub config: Option<PathBuf>,
    /// Output directory (drift.csv and report.json); CSV to stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Output directory for report.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
