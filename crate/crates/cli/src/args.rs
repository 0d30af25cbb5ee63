use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ripscollapse", version, about = "Collapses, gradients and persistence of Vietoris–Rips filtrations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Input file format.
    #[arg(long, value_enum, default_value_t = InputFormat::Lower, global = true)]
    pub format: InputFormat,
    /// Numeric mode for distances.
    #[arg(long, value_enum, default_value_t = ModeArg::Rational, global = true)]
    pub mode: ModeArg,
    /// Equality tolerance in decimal mode.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub eps: f64,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Write the JSON report to this path (`-` for standard output instead of text).
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Maximal simplex dimension to materialize.
    #[arg(long, global = true)]
    pub dim_cap: Option<usize>,
    /// Maximal number of simplices (and column additions) before giving up.
    #[arg(long, default_value_t = 10_000_000, global = true)]
    pub budget: usize,
    /// Accept pseudo-metrics, merging points at distance zero.
    #[arg(long, global = true)]
    pub allow_pseudo: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Lower-triangular distance matrix.
    Lower,
    /// Square distance matrix.
    Square,
    /// Weighted tree edge list.
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Rational,
    Decimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderKind {
    /// Input order of the points.
    Identity,
    /// A compatible order of the tree rooted at `--root`.
    Compatible,
    /// The reversed compatible order, compared reverse-colexicographically.
    ReverseCompatible,
    /// A seeded random permutation.
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct OrderOpts {
    /// How to order vertices for lexicographic refinement [default: identity, or compatible
    /// for tree pipelines of `verify`].
    #[arg(id = "order", long = "order", value_enum)]
    pub order_kind: Option<OrderKind>,
    /// Explicit vertex order as comma-separated names; overrides `--order`.
    #[arg(long)]
    pub vertex_order: Option<String>,
    /// Root for compatible orders; defaults to the tree file's root or the first vertex.
    #[arg(long)]
    pub root: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GradientKind {
    Cone,
    FilteredCone,
    Generic,
    Canonical,
    Perturbed,
    Apparent,
    ApparentZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CollapseTarget {
    /// `VR_t`.
    Rips,
    /// The subforest of tree edges of length at most `t`.
    Forest,
    /// The reference point.
    Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    Theorem1,
    Theorem2,
    Canonical,
    Perturbed,
    Generic,
    Refinement,
    H1Surjectivity,
    ApparentCollapse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    RandomTree,
    RandomMetric,
    GridSampleOfTree,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hyperbolicity, geodesic defect, 4δ+2ν and distance levels.
    Analyze { input: PathBuf },
    /// The Vietoris–Rips complex at a scale, in diameter-lexicographic order.
    Vr {
        input: PathBuf,
        /// Scale; defaults to the largest distance.
        #[arg(long)]
        t: Option<String>,
        /// Level index instead of a scale.
        #[arg(long, conflicts_with = "t")]
        level: Option<usize>,
        #[command(flatten)]
        order: OrderOpts,
    },
    /// Builds and validates a discrete gradient.
    Gradient {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: GradientKind,
        /// Scale of the cone; defaults to 4δ+2ν.
        #[arg(long)]
        t: Option<String>,
        /// Reference point of cone constructions; defaults to the first point.
        #[arg(long)]
        reference: Option<String>,
        /// Build a cone below the guaranteed threshold.
        #[arg(long)]
        no_threshold_check: bool,
        #[command(flatten)]
        order: OrderOpts,
    },
    /// Realizes `VR_u ↘ target` from a gradient and checks the certificate.
    Collapse {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: GradientKind,
        /// Source scale; defaults to the largest distance.
        #[arg(long)]
        u: Option<String>,
        /// Target scale; defaults to `u` for forests and 4δ+2ν otherwise.
        #[arg(long)]
        t: Option<String>,
        #[arg(long, value_enum, default_value_t = CollapseTarget::Rips)]
        target: CollapseTarget,
        #[arg(long)]
        reference: Option<String>,
        #[command(flatten)]
        order: OrderOpts,
    },
    /// Z/2 persistence barcode with reduction statistics.
    Persistence {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
        /// Reduce apparent-pair columns like any other.
        #[arg(long)]
        no_shortcut: bool,
        /// Also list zero-length intervals.
        #[arg(long)]
        show_zero: bool,
        #[command(flatten)]
        order: OrderOpts,
    },
    /// Runs a verification pipeline; exits 1 if any assertion fails.
    Verify {
        #[arg(value_enum)]
        pipeline: Pipeline,
        /// Input file; a seeded random instance is generated when absent.
        input: Option<PathBuf>,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        u: Option<String>,
        /// Size of a generated instance.
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long)]
        reference: Option<String>,
        /// Accept an explicit vertex order that is not compatible with the tree.
        #[arg(long)]
        allow_incompatible: bool,
        #[command(flatten)]
        order: OrderOpts,
    },
    /// Writes a seeded random dataset.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Smallest integer weight.
        #[arg(long, default_value_t = 1)]
        low: i64,
        /// Largest integer weight.
        #[arg(long, default_value_t = 10)]
        high: i64,
        /// Maximal piece length for grid samples.
        #[arg(long, default_value = "1/2")]
        step: String,
        /// Tree to sample; a random tree is drawn when absent.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A compatible vertex order of a weighted tree.
    Order {
        input: PathBuf,
        #[arg(long)]
        root: Option<String>,
        /// Print the reversed order.
        #[arg(long)]
        reverse: bool,
    },
}
