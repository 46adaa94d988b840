//! `teich`: classify, measure and deform Fenchel-Nielsen vectors described in JSON specs.
//!
//! Every report is tab-separated with a header row. Exit codes: 0 success, 2 usage,
//! 3 parse, 4 precondition, 5 numeric, 6 i/o, 7 a verification check failed.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "teich", version, about = "Fenchel-Nielsen coordinates on infinite-type surfaces")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for sampled sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Tolerance for verification columns and checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Evaluate sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hyperbolic trigonometry kernels.
    #[command(subcommand)]
    Trig(Trig),
    /// Membership classes of every vector in a spec.
    Classify {
        spec: PathBuf,
        /// Lengths normalizing twist offsets in the length-spectrum conditions.
        #[arg(long, value_enum, default_value_t = Denominator::Base)]
        denominator: Denominator,
    },
    /// Distance between two vectors of a spec.
    Distance(DistanceArgs),
    /// Apply a sequence of deformations to a vector.
    Deform(DeformArgs),
    /// Density, non-discreteness and twist-dilatation experiments.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Subcommand)]
enum Trig {
    /// Right-angled hexagon from three alternate sides.
    #[command(allow_negative_numbers = true)]
    Hexagon { a: f64, b: f64, c: f64 },
    /// Quadrilateral with two right angles on the base.
    #[command(allow_negative_numbers = true)]
    Quad {
        a: f64,
        b: f64,
        base: f64,
        /// Legs on opposite sides of the base.
        #[arg(long)]
        concave: bool,
    },
    /// Collar half-width and collar angle of closed geodesics.
    #[command(allow_negative_numbers = true)]
    Collar {
        #[arg(required = true)]
        lengths: Vec<f64>,
    },
    /// Side bounds for hexagons and arcs with sides in a band.
    Bounds { m: f64 },
    /// Beltrami coefficient modulus and dilatation of the collar twist map.
    #[command(allow_negative_numbers = true)]
    TwistMap {
        t: f64,
        /// Angular half-width of the collar; derived from --length when omitted.
        #[arg(long, conflicts_with = "length", required_unless_present = "length")]
        theta0: Option<f64>,
        /// Curve length whose collar angle is used.
        #[arg(long)]
        length: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Denominator {
    Base,
    Target,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Inf,
    Fn,
    LsLower,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Decomposition,
    Crossing,
    All,
}

#[derive(Args)]
struct DistanceArgs {
    spec: PathBuf,
    x: String,
    y: String,
    #[arg(long, value_enum, default_value_t = Metric::Inf)]
    metric: Metric,
    /// Curve family for `ls-lower`.
    #[arg(long, value_enum, default_value_t = Family::All)]
    family: Family,
    /// Tail indices added to the `ls-lower` family when a tail is not the base tail.
    #[arg(long, default_value_t = 64)]
    window: u64,
    /// Twist images of the dual curve on either side in the `ls-lower` family.
    #[arg(long, default_value_t = 2)]
    depth: u32,
}

#[derive(Args)]
struct DeformArgs {
    spec: PathBuf,
    id: String,
    /// `twist:CURVE:T`, `lengthen:CURVE:R` or `dehn:CURVE:N`, applied in order.
    #[arg(long = "step", required = true, value_parser = commands::parse_step)]
    steps: Vec<commands::Step>,
    /// Id of the deformed vector in the emitted spec.
    #[arg(long)]
    id_out: Option<String>,
    /// Also write the spec with the deformed vector appended.
    #[arg(long)]
    spec_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Experiment {
    /// `d_inf(truncate(x, n), x)` for `n = 1..=max_n`.
    Density {
        spec: PathBuf,
        id: String,
        #[arg(long, default_value_t = 10)]
        max_n: u64,
    },
    /// One Dehn twist about each short curve, against the non-discreteness bound.
    Nondiscrete {
        spec: PathBuf,
        /// Vector to twist; the base structure when omitted.
        id: Option<String>,
        #[arg(long, default_value_t = 100)]
        max_n: i64,
    },
    /// Length ratios under collar twists against the dilatation of the twist map.
    Wolpert {
        #[arg(long, default_value_t = 25)]
        lengths: usize,
        #[arg(long, default_value_t = 20)]
        twists: usize,
        /// Sample this many random points per X-piece kind instead of the grid.
        #[arg(long)]
        random: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("teich: {e}");
            ExitCode::from(e.code())
        }
    }
}
