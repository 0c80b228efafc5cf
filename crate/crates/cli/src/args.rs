//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Axisymmetric Helfrich-Canham membranes: shape-equation residuals,
/// energies, parameter fits, the Cassini-oval theorem and RBC profiles.
///
/// Options may also come from a `--config` file of `key = value` lines
/// using the long flag names. Flags given on the command line override the
/// config file, which overrides the built-in defaults.
#[derive(Debug, Parser)]
#[command(name = "helfrich", version, args_override_self = true)]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Recorded in the metadata header; no command draws random numbers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// `key = value` defaults, one per line; `#` starts a comment.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shape-equation residual of a Cassini oval on a Chebyshev grid.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Residual(ResidualArgs),
    /// Area, volume and Helfrich-Canham energy of Cassini ovals.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Energy(EnergyArgs),
    /// Least-squares fit of (c0, lambda, P) to Cassini ovals.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Fit(FitArgs),
    /// Check that no Cassini oval with epsilon > 0 solves the shape equation.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    VerifyTheorem(VerifyArgs),
    /// Radii of spheres in equilibrium.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Sphere(SphereArgs),
    /// Two-branch constant-mean-curvature red blood cell profile.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Rbc(RbcArgs),
    /// Sampled Cassini profile with slopes and curvatures.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    ProfileExport(ExportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Residual(_) => "residual",
            Command::Energy(_) => "energy",
            Command::Fit(_) => "fit",
            Command::VerifyTheorem(_) => "verify-theorem",
            Command::Sphere(_) => "sphere",
            Command::Rbc(_) => "rbc",
            Command::ProfileExport(_) => "profile-export",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MembraneArgs {
    /// Bending rigidity.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Spontaneous curvature.
    #[arg(long, default_value_t = 0.0)]
    pub c0: f64,
    /// Normalised tension lambda / beta.
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Normalised pressure difference dP / beta.
    #[arg(long, default_value_t = 0.0)]
    pub pressure: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormArg {
    /// Slope form in u = dz/dr.
    U,
    /// Simplified tangent-angle form.
    Psi,
    /// Third-order tangent-angle form.
    Third,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResidualArgs {
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub membrane: MembraneArgs,
    #[arg(long, value_enum, default_value_t = FormArg::U)]
    pub form: FormArg,
    /// Number of Chebyshev nodes.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Fraction of the domain trimmed at each end.
    #[arg(long, default_value_t = 0.05)]
    pub margin: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    /// One or more comma-separated values.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "0.5")]
    pub epsilon: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub membrane: MembraneArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightArg {
    /// 2 pi r sqrt(1 + u^2).
    Surface,
    Uniform,
}

pub const DEFAULT_SWEEP: &str = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0,1.1,1.2";

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitOptionArgs {
    #[arg(long, value_enum, default_value_t = WeightArg::Surface)]
    pub weight: WeightArg,
    /// Fraction of the domain dropped at each end.
    #[arg(long, default_value_t = 0.05)]
    pub margin: f64,
    /// Gauss-Legendre panels of the coarse grid.
    #[arg(long, default_value_t = 32)]
    pub panels: usize,
    /// Gauss-Legendre order per panel.
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// Half-width of the c0 search interval in units of 1/r_max.
    #[arg(long, default_value_t = 10.0)]
    pub c0_range: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = DEFAULT_SWEEP)]
    pub epsilon: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub fit: FitOptionArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Mode::Symbolic)]
    pub mode: Mode,
    /// Grid of the numeric check.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = DEFAULT_SWEEP)]
    pub epsilon: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub fit: FitOptionArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum OrientationArg {
    /// H = -1/a.
    #[value(name = "I")]
    I,
    /// H = +1/a.
    #[value(name = "II")]
    II,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SphereArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub membrane: MembraneArgs,
    #[arg(long, value_enum, default_value_t = OrientationArg::I)]
    pub orientation: OrientationArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RbcArgs {
    /// Reference curvature; the branches have H = kappa0 +- a.
    #[arg(long, default_value_t = -1.0)]
    pub kappa0: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    /// Junction radius.
    #[arg(long = "r-infl", default_value_t = 0.8)]
    pub r_infl: f64,
    /// +1 gives the inner branch H = kappa0 + a, -1 gives kappa0 - a.
    #[arg(long, default_value_t = 1.0)]
    pub inner_sign: f64,
    /// Cut an outer branch that never closes at this radius.
    #[arg(long)]
    pub truncate: Option<f64>,
    /// Radial samples from the axis to the rim.
    #[arg(long, default_value_t = 101)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub membrane: MembraneArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExportArgs {
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Samples at the midpoints of n equal radial cells.
    #[arg(long, default_value_t = 101)]
    pub n: usize,
}
