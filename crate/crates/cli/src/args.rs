use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Finite models of diophantine approximation groups.
///
/// Every command prints one JSON document on stdout that embeds the
/// effective configuration. Numbers are oracle literals such as `pi`,
/// `sqrt(2)`, `3/7`, `surd(1,1,2,5)` or `alg([-2,0,1];[1,2])`; sequences
/// and matrices are JSON lists of literals.
#[derive(Parser, Debug)]
#[command(name = "diophlab", version, about, long_about = None)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// TOML configuration file (overrides DIOPHLAB_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Working precision in bits.
    #[arg(long, global = true, value_name = "BITS")]
    pub precision: Option<u32>,
    /// Membership tolerance.
    #[arg(long, global = true, value_name = "TAU")]
    pub tolerance: Option<f64>,
    /// Height bound for relation searches.
    #[arg(long, global = true, value_name = "H")]
    pub height: Option<u64>,
    /// Degree bound for polynomial relation searches.
    #[arg(long, global = true, value_name = "D")]
    pub dmax: Option<u32>,
    /// Cap on pigeonhole box enumeration.
    #[arg(long, global = true, value_name = "N")]
    pub enumeration_cap: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run all batch work on the current thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continued fraction convergents.
    Cf {
        #[arg(long)]
        theta: String,
        /// Number of convergents.
        #[arg(short, long)]
        k: Option<usize>,
    },
    /// Approximation group operations on one sequence.
    Group(GroupArgs),
    /// Simultaneous approximation with denominator at most Q.
    Simul {
        /// JSON list of oracle literals.
        #[arg(long)]
        theta: String,
        #[arg(long, value_name = "Q")]
        q_bound: String,
    },
    /// Matrix independence oracles and torus closure.
    Indep {
        #[arg(value_enum)]
        mode: IndepMode,
        /// JSON matrix of oracle literals; a flat list is one row.
        #[arg(long)]
        matrix: String,
        /// Orbit sample size for the closure cross-check.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Pigeonhole approximation over a totally real field.
    #[command(name = "dirichlet-k")]
    DirichletK {
        /// Built-in field name or TOML field file.
        #[arg(long)]
        field: String,
        #[arg(long)]
        theta: String,
        /// Field element with positive integral coordinates.
        #[arg(long)]
        eta: String,
    },
    /// Approximation groups over the integers of a number field.
    Ofield(OfieldArgs),
    /// Minimal polynomial recovery.
    Minpoly {
        #[arg(long)]
        theta: String,
        /// Also list every relation up to this degree and test divisibility.
        #[arg(long, value_name = "D")]
        ideal: Option<u32>,
    },
    /// Algebraic dependence among several numbers.
    Algdep {
        /// JSON list of oracle literals.
        #[arg(long)]
        theta: String,
        /// Leave out the constant monomial.
        #[arg(long)]
        homogeneous: bool,
    },
    /// Kronecker foliation geometry.
    Foliate(FoliateArgs),
    /// Linear and algebraic dependence, graph pullbacks and conjecture harnesses.
    Rigidity(RigidityArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupAction {
    Membership,
    Error,
    Dual,
    Witness,
    Hat,
    Circle,
    Pairs,
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    #[arg(value_enum, default_value = "membership")]
    pub action: GroupAction,
    #[arg(long)]
    pub theta: String,
    /// JSON list of integer entries; defaults to the convergent member.
    #[arg(long)]
    pub seq: Option<String>,
    /// Length of the constructed member.
    #[arg(long)]
    pub len: Option<usize>,
    /// `integers`, `inverted:N`, `divisible:B` or `ideal:N`.
    #[arg(long, default_value = "integers")]
    pub constraint: String,
    /// Number of hat-generator stages.
    #[arg(long, default_value_t = 4)]
    pub stages: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndepMode {
    Homogeneous,
    Inhomogeneous,
    Rows,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OfieldAction {
    OMembership,
    Trace,
    Galois,
    Conjpoly,
    Krational,
    Cleardenom,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construct {
    Components,
    Diagonal,
    HalfShift,
}

#[derive(Args, Debug)]
pub struct OfieldArgs {
    #[arg(value_enum)]
    pub action: OfieldAction,
    /// Built-in field name or TOML field file.
    #[arg(long, default_value = "Q(sqrt 2)")]
    pub field: String,
    #[arg(long)]
    pub theta: Option<String>,
    /// JSON list of field elements; defaults to a constructed member.
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long, value_enum, default_value = "components")]
    pub construct: Construct,
    #[arg(long)]
    pub len: Option<usize>,
    /// Index of a stored automorphism.
    #[arg(long, default_value_t = 0)]
    pub sigma: usize,
    /// Defining polynomial for `cleardenom`, e.g. "9*X^2 - 2" or "[-2,0,9]".
    #[arg(long)]
    pub poly: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoliateAction {
    Classify,
    Minimal,
    Orbit,
    Tower,
    Render,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Args, Debug)]
pub struct FoliateArgs {
    #[arg(value_enum)]
    pub action: FoliateAction,
    /// JSON matrix of oracle literals (classify, minimal, orbit, render).
    #[arg(long)]
    pub matrix: Option<String>,
    /// Base number of the covering tower.
    #[arg(long)]
    pub theta: Option<String>,
    /// Number of sample points.
    #[arg(short, long, default_value_t = 1000)]
    pub n: usize,
    /// JSON list of rationals; defaults to the origin.
    #[arg(long)]
    pub start: Option<String>,
    /// JSON list of rationals; defaults to unit steps.
    #[arg(long)]
    pub step: Option<String>,
    /// JSON list of covering degrees.
    #[arg(long, default_value = "[2,3,4]")]
    pub ns: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file for `render`.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// One-based coordinate pair `i,j` drawn by the SVG chart.
    #[arg(long)]
    pub project: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RigidityAction {
    Ld,
    Ad,
    Pullback,
    Harness,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapArg {
    Exp,
    Identity,
}

#[derive(Args, Debug)]
pub struct RigidityArgs {
    #[arg(value_enum)]
    pub action: RigidityAction,
    /// JSON list of oracle literals.
    #[arg(long)]
    pub theta: Option<String>,
    /// Coefficient field for `ld`, conclusion field for the baker harness.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, value_enum, default_value = "exp")]
    pub map: MapArg,
    /// Declare every entry algebraic and skip projections sharing an index.
    #[arg(long)]
    pub algebraic_class: bool,
    /// baker, lw, logconj or schanuel.
    #[arg(long)]
    pub name: Option<String>,
    /// Run the curated regression suite.
    #[arg(long)]
    pub suite: bool,
}
