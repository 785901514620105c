//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use photon_cycle::{Family, GridParams, OpSequence, Order, StateSpec, DEFAULT_TAIL_TOL};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "photon-cycle", version, about = "Photon-added/subtracted thermal and cat states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Photon-number distribution, rows n = 0..cutoff.
    Pnd(PndArgs),
    /// Wigner function on a rectangular grid.
    Wigner(WignerArgs),
    /// Mandel Q against n̄ (thermal) or |α| (cat, real α).
    QSweep(SweepArgs),
    /// Data files for one of the seven reference figures.
    Figure(FigureArgs),
    /// Closed forms against the Fock-space oracle, as a JSON report.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Thermal,
    #[value(alias = "even-coherent")]
    Ecs,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Thermal => Family::Thermal,
            FamilyArg::Ecs => Family::EvenCoherent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Sa,
    As,
}

impl From<OrderArg> for Order {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Sa => Order::AddThenSubtract,
            OrderArg::As => Order::SubtractThenAdd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SequenceArgs {
    #[arg(long, value_enum, default_value = "thermal")]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value = "sa")]
    pub order: OrderArg,
    /// Photons added.
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Photons subtracted.
    #[arg(long, default_value_t = 1)]
    pub q: usize,
}

impl SequenceArgs {
    pub fn seq(&self) -> OpSequence {
        OpSequence::new(self.p, self.q, self.order.into())
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub sequence: SequenceArgs,
    /// Thermal mean photon number.
    #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
    pub nbar: f64,
    /// Real part of the cat amplitude.
    #[arg(long, visible_alias = "alpha", default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
}

impl StateArgs {
    pub fn spec(&self) -> Result<StateSpec, CliError> {
        let spec = match self.sequence.family {
            FamilyArg::Thermal => StateSpec::thermal(self.nbar),
            FamilyArg::Ecs => StateSpec::even_coherent(Complex64::new(self.alpha_re, self.alpha_im)),
        };
        spec.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Seed truncation tolerance.
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
}

impl OutputArgs {
    pub fn check(&self) -> Result<(), CliError> {
        check_tail_tol(self.tail_tol)
    }
}

pub fn check_tail_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--tail-tol must lie in (0, 1), got {tol}")))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Lower bound of both grid axes.
    #[arg(long, allow_negative_numbers = true)]
    pub grid_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_max: Option<f64>,
    /// Samples per axis.
    #[arg(long)]
    pub grid_points: Option<usize>,
}

impl GridArgs {
    /// `base` with any given flag applied.
    pub fn resolve(&self, base: GridParams) -> Result<GridParams, CliError> {
        let mut grid = base;
        if let Some(v) = self.grid_min {
            grid.re_min = v;
            grid.im_min = v;
        }
        if let Some(v) = self.grid_max {
            grid.re_max = v;
            grid.im_max = v;
        }
        if let Some(n) = self.grid_points {
            grid.points_per_axis = n;
        }
        grid.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl SweepRange {
    pub fn default_for(family: Family) -> Self {
        match family {
            Family::Thermal => Self {
                min: 0.01,
                max: 1.0,
                points: 50,
            },
            Family::EvenCoherent => Self {
                min: 0.05,
                max: 2.0,
                points: 40,
            },
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepRangeArgs {
    #[arg(long)]
    pub sweep_min: Option<f64>,
    #[arg(long)]
    pub sweep_max: Option<f64>,
    #[arg(long)]
    pub sweep_points: Option<usize>,
}

impl SweepRangeArgs {
    pub fn resolve(&self, base: SweepRange) -> Result<SweepRange, CliError> {
        let range = SweepRange {
            min: self.sweep_min.unwrap_or(base.min),
            max: self.sweep_max.unwrap_or(base.max),
            points: self.sweep_points.unwrap_or(base.points),
        };
        if range.points < 2 {
            return Err(CliError::Usage("a sweep needs at least 2 points".into()));
        }
        if !(range.min >= 0.0 && range.max > range.min && range.max.is_finite()) {
            return Err(CliError::Usage(format!(
                "sweep bounds must satisfy 0 <= min < max, got [{}, {}]",
                range.min, range.max
            )));
        }
        Ok(range)
    }
}

#[derive(Debug, Clone, Args)]
pub struct PndArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub sequence: SequenceArgs,
    #[command(flatten)]
    pub range: SweepRangeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure number, 1 to 7.
    pub id: u8,
    /// Output directory.
    #[arg(long, default_value = "figures")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub range: SweepRangeArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Report file.
    #[arg(long, default_value = "validation.json")]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
}
