use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Exact computations and identity checks for operator-valued free
/// probability over finite-dimensional algebras.
#[derive(Debug, Parser)]
#[command(name = "ncprob", version)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Degree cap for multilinear tables (default 5 over ℚ, 4 otherwise).
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    /// Largest n for NC(n) enumeration (also NCPROB_MAX_N).
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Noncrossing partitions.
    #[command(subcommand)]
    Nc(NcCmd),
    /// Finite-dimensional algebras.
    #[command(subcommand)]
    Alg(AlgCmd),
    /// Towers of conditional expectations.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Commuting ladders.
    #[command(subcommand)]
    Ladder(LadderCmd),
    /// Moment and cumulant families.
    #[command(subcommand)]
    Mc(McCmd),
    /// B-valued series.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Distributions given by cumulant specs.
    #[command(subcommand)]
    Dist(DistCmd),
    /// Identity checks with both sides reported.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run the acceptance suite on the shipped fixtures.
    Selftest(SelftestArgs),
    /// Regenerate or check the fixture files.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Debug, Subcommand)]
pub enum NcCmd {
    /// List NC(n).
    Enum {
        #[arg(long)]
        n: usize,
    },
    /// μ(lower, upper) in NC(n).
    Mobius {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lower: String,
        #[arg(long)]
        upper: String,
    },
    /// Kreweras complement.
    Kreweras {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pi: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum AlgCmd {
    /// Parse an algebra file and check closure and unit.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum TowerCmd {
    /// Check every map of a tower.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// E_{k,j} = φ_k ∘ … ∘ φ_j as a matrix.
    Compose {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum LadderCmd {
    /// Rungs, every square and every subladder.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum McCmd {
    /// Moments to cumulants.
    M2c(Transfer),
    /// Cumulants to moments.
    C2m(Transfer),
    /// Nested evaluation of a family along a partition.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pi: String,
        /// 1-based letters, comma separated.
        #[arg(long)]
        word: String,
        /// JSON list of coordinate rows for the interior B-arguments
        /// (default: all units).
        #[arg(long)]
        args: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct Transfer {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SeriesCmd {
    /// Moment series of elements of a tower level under E_{1,level}.
    Moment(SpaceArgs),
    /// R-transform of elements of a tower level under E_{1,level}.
    Rtransform(SpaceArgs),
    /// Coefficient-wise sum.
    Add(Pair),
    /// Boxed convolution.
    Boxconv {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, conflicts_with = "amalg")]
        scalar: bool,
        #[arg(long)]
        amalg: bool,
        /// Use the trivial variant of the right factor.
        #[arg(long)]
        trivial_right: bool,
    },
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// A document with `tower`, `level` and `elements`.
    #[arg(long)]
    pub space: PathBuf,
    /// JSON list of coordinate rows replacing the space's elements.
    #[arg(long)]
    pub elements: Option<PathBuf>,
    #[arg(long = "N", alias = "degree")]
    pub degree: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Pair {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DistCmd {
    /// Free additive convolution of two specs.
    Freeadd(Pair),
    /// Free multiplicative convolution of two specs.
    Freemul(Pair),
    /// A joint moment.
    Moment {
        #[arg(long)]
        spec: PathBuf,
        /// Labels or 1-based indices, comma separated.
        #[arg(long)]
        word: String,
        /// JSON list of coordinate rows for the interior B-arguments.
        #[arg(long)]
        at: Option<String>,
    },
    /// Vanishing of mixed cumulants between groups.
    Arefree {
        #[arg(long)]
        spec: PathBuf,
        /// Groups separated by `;`, members by `,`, e.g. `x1,x2;y1`.
        #[arg(long)]
        groups: String,
    },
    /// Adjoin a projection free from everything, with φ(p) = α.
    Adjoinproj {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "p")]
        label: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Scalar tower cumulants through level expectations.
    LemmaE {
        #[arg(long)]
        ctx: PathBuf,
        #[arg(long, default_value_t = 1)]
        j: usize,
        /// 1-based letters; all words up to the degree cap when omitted.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Freeness across two levels of a scalar tower.
    #[command(alias = "thm210")]
    Levels {
        #[arg(long)]
        ctx: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        l: usize,
    },
    /// Freeness across level bands over an intermediate algebra.
    #[command(alias = "thm214")]
    AmalgamatedLevels {
        #[arg(long)]
        ctx: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Compatibility E_{k,j} = E_{k,j}E_{i,j} and E_j = E_jE_{k,j}.
    Compat {
        #[arg(long)]
        ctx: PathBuf,
        #[command(flatten)]
        idx: Triple,
    },
    /// Compression by a free projection.
    Compress {
        #[arg(long)]
        ctx: PathBuf,
    },
    /// Chain towers, or compression along a chain.
    Chain {
        #[arg(long)]
        ctx: PathBuf,
        #[command(flatten)]
        idx: KJ,
    },
    /// Commuting ladders, or compression along a ladder.
    Ladder {
        #[arg(long)]
        ctx: PathBuf,
        #[command(flatten)]
        idx: KJ,
    },
    /// Scalar cumulants lifted to a B-valued model.
    Lift {
        #[arg(long)]
        ctx: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Triple {
    #[arg(long, requires_all = ["i", "j"])]
    pub k: Option<usize>,
    #[arg(long, requires_all = ["k", "j"])]
    pub i: Option<usize>,
    #[arg(long, requires_all = ["k", "i"])]
    pub j: Option<usize>,
}

#[derive(Debug, Args)]
pub struct KJ {
    #[arg(long, requires = "j")]
    pub k: Option<usize>,
    #[arg(long, requires = "k")]
    pub j: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long)]
    pub quick: bool,
    /// Fixture directory (default: ./fixtures, then the repository's).
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FixturesCmd {
    /// Write every fixture file.
    Write {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
    /// Compare fixture files with freshly generated ones.
    Check {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}
