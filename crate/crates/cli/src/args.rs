use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qgraph", version, about = "Spectra and eigenvalue inequalities on quantum graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Graph description file (JSON).
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Target mesh spacing.
    #[arg(long, global = true, default_value_t = 0.01)]
    pub h: f64,
    /// Number of eigenpairs to compute.
    #[arg(long, global = true, default_value_t = 90)]
    pub k: usize,
    /// Directory for output files. Without it, data goes to stdout.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Override the tolerance of every check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for sweeps (default: logical processors).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Test hook: distort the computed spectrum before checking it.
    #[arg(long, global = true, hide = true)]
    pub corrupt_spectrum: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and eigenfunctions of the graph.
    Spectrum,
    /// Run the inequality checks that apply to the graph's topology.
    Verify,
    /// One row per parameter value.
    Sweep(SweepArgs),
    /// Closed-form spectra and constants.
    Oracle(OracleArgs),
    /// Admissible colorings of a tree.
    Colorings(ColoringArgs),
    /// Resistor-network analysis of the graph.
    Circuit(CircuitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    /// Balloon with string length L.
    Balloon,
    /// String joined to N parallel edges, integer N.
    Fancy,
    /// Coupling constant α on the `--graph` file (geometric grid).
    Alpha,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub family: SweepFamily,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    /// Number of grid points (ignored for integer families).
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Interval,
    Balloon,
    Fancy,
    PoschlTeller,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntervalEnds {
    /// Dirichlet at both ends.
    Dd,
    /// Dirichlet at one end, Neumann at the other.
    Dn,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub kind: OracleKind,
    /// Interval or string length.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub length: f64,
    /// Parallel edges of the fancy balloon.
    #[arg(long, default_value_t = 3)]
    pub edges: usize,
    #[arg(long, value_enum, default_value_t = IntervalEnds::Dd)]
    pub ends: IntervalEnds,
    /// Moment order for the classical constant.
    #[arg(long, default_value_t = 1.5)]
    pub gamma: f64,
    /// Number of eigenvalues (defaults to `--k`).
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ColoringArgs {
    /// Also list the piecewise-affine function of every coloring.
    #[arg(long)]
    pub list_g: bool,
    /// Also tabulate the even/odd binomial identity up to this n (max 60).
    #[arg(long)]
    pub binomial: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    /// Comma-separated terminal vertex ids (default: all leaf ends).
    #[arg(long, value_delimiter = ',')]
    pub terminals: Option<Vec<usize>>,
    /// Series resistance for every leaf wire, replacing its length.
    #[arg(long)]
    pub lead_resistance: Option<f64>,
}
