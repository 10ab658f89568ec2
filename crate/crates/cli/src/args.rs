use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "randlab", version, about = "Exact desk-scale oracle-use compressibility constructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assign Kraft–Chaitin codewords to a request sequence.
    Kc {
        #[arg(long = "in")]
        input: PathBuf,
        /// Machine table with halting stage = request index.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stage complexity, Ω approximations and settling times.
    Machine {
        #[command(subcommand)]
        query: MachineQuery,
    },
    /// Normalize a test and compile it into a sub-identity-use reduction.
    CompileTest {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Tt)]
        mode: ModeArg,
        /// Normal form; defaults to kurtz for tt and granular otherwise.
        #[arg(long, value_enum)]
        form: Option<FormArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read a randomness test off a functional.
    ExtractTest {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Number of levels for ml extraction.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Cut points for bounded extraction; scanned from the use table when absent.
        #[arg(long, value_delimiter = ',')]
        cuts: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert among granular tests, martingales and complexity bounds.
    Convert {
        #[arg(long, value_enum)]
        from: ObjectArg,
        #[arg(long, value_enum)]
        to: ObjectArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        g: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Concatenate shortest descriptions into a compressing oracle.
    Compress {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Run an enumeration construction against its requirements.
    Diagonalize {
        #[command(subcommand)]
        construction: Diagonalization,
    },
    /// Compute a prefix of a left-c.e. real from Ω.
    OmegaReduce {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "with_retirements")]
        hits: randlab::omega::HitSet,
        #[arg(long, default_value = "literal")]
        bound: randlab::omega::UseBound,
    },
    /// Check module invariants over seeded fixtures.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "small", value_parser = parse_scale)]
        scale: usize,
        /// Extra functional for the closed-loop validation check.
        #[arg(long)]
        functional: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MachineQuery {
    K {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        at: usize,
    },
    Omega {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        at: usize,
    },
    Settle {
        #[arg(long)]
        machine: PathBuf,
        /// Number of leading bits of Ω.
        #[arg(long)]
        t: usize,
    },
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub f: PathBuf,
    /// `auto` or a plan file.
    #[arg(long, default_value = "auto")]
    pub plan: String,
    /// Stages to run; defaults to the least horizon the construction needs.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// JSON-lines file receiving one event per line.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Diagonalization {
    Ce {
        #[command(flatten)]
        plan: PlanArgs,
        /// JSON array of functionals.
        #[arg(long)]
        functionals: PathBuf,
    },
    Complexity {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long)]
        machine: PathBuf,
        /// Requirements for an automatic plan.
        #[arg(long, default_value_t = 2)]
        count: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Tt,
    Wtt,
    Turing,
}

impl From<ModeArg> for randlab::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Tt => randlab::Mode::Tt,
            ModeArg::Wtt => randlab::Mode::Wtt,
            ModeArg::Turing => randlab::Mode::Turing,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormArg {
    Kurtz,
    Granular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ml,
    Kurtz,
    Granular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectArg {
    Test,
    Martingale,
    Complexity,
}

impl ObjectArg {
    pub fn name(self) -> &'static str {
        match self {
            ObjectArg::Test => "test",
            ObjectArg::Martingale => "martingale",
            ObjectArg::Complexity => "complexity",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Core,
    Kc,
    Machine,
    Reductions,
    Granular,
    Diagonalizers,
    Omega,
    All,
}

impl SuiteArg {
    pub fn name(self) -> &'static str {
        match self {
            SuiteArg::Core => "core",
            SuiteArg::Kc => "kc",
            SuiteArg::Machine => "machine",
            SuiteArg::Reductions => "reductions",
            SuiteArg::Granular => "granular",
            SuiteArg::Diagonalizers => "diagonalizers",
            SuiteArg::Omega => "omega",
            SuiteArg::All => "all",
        }
    }
}

fn parse_scale(s: &str) -> Result<usize, String> {
    match s {
        "small" => Ok(1),
        "medium" => Ok(4),
        "large" => Ok(16),
        n => match n.parse::<usize>() {
            Ok(k) if k > 0 => Ok(k),
            _ => Err(format!("scale must be small, medium, large or a positive integer, not {n:?}")),
        },
    }
}
