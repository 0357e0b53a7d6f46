use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "zigzag",
    version,
    about = "Random walks on a triangular lattice with zig-zag absorbing boundaries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one engine and emit the field and/or absorption probabilities.
    Solve(SolveArgs),
    /// Run several engines (or load saved JSON reports) and diff them.
    Compare(CompareArgs),
    /// Monte Carlo run; shorthand for `solve --method mc`.
    Mc(McArgs),
    /// Recompute the m=n=7, source (4,4) reference table with the exact engine.
    Table1(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Oracle,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Field,
    Absorption,
    Both,
}

impl What {
    pub fn field(self) -> bool {
        matches!(self, What::Field | What::Both)
    }

    pub fn absorption(self) -> bool {
        matches!(self, What::Absorption | What::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Geometry {
    /// Interior rows.
    #[arg(long)]
    pub m: usize,
    /// Interior zig-zag columns.
    #[arg(long)]
    pub n: usize,
    /// Source row.
    #[arg(long)]
    pub a: i64,
    /// Source column.
    #[arg(long)]
    pub b: i64,
}

#[derive(Debug, Clone, Args)]
pub struct OptionalGeometry {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub a: Option<i64>,
    #[arg(long)]
    pub b: Option<i64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    /// Number of Monte Carlo walks.
    #[arg(long, default_value_t = 1_000_000)]
    pub walks: u64,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub geometry: Geometry,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = What::Both)]
    pub what: What,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub geometry: Geometry,
    #[arg(long, value_enum, default_value_t = What::Both)]
    pub what: What,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Geometry; optional when every column comes from `--report`.
    #[command(flatten)]
    pub geometry: OptionalGeometry,
    /// Engines to run, repeated or comma separated.
    #[arg(long = "method", value_enum, value_delimiter = ',')]
    pub methods: Vec<MethodArg>,
    /// Saved JSON report (from `solve --format json`) to include as a column.
    #[arg(long = "report")]
    pub reports: Vec<PathBuf>,
    /// Largest allowed absolute difference between deterministic engines.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = What::Both)]
    pub what: What,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
