//! `fvm`: decide model-comparison relations, build comonad carriers, apply
//! Kleisli laws, work with coalgebras and run composition-theorem sweeps.
//!
//! JSON goes to stdout (or the file given with `-o`/`--report`), a one-line
//! summary to stderr. Exit codes: 0 when the checked property holds, 1 when
//! it fails, 2 on usage or input errors.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "fvm",
    version,
    about = "Game comonads, model-comparison games and composition theorems"
)]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a relation between two structures.
    Check(CheckArgs),
    /// Apply a structure operation.
    Compose(ComposeArgs),
    /// Apply a signature translation.
    Translate(TranslateArgs),
    /// Build comonad carriers and check the comonad laws.
    #[command(subcommand)]
    Comonad(ComonadCommand),
    /// Apply and check Kleisli laws.
    #[command(subcommand)]
    Kappa(KappaCommand),
    /// Check, lift and count morphisms of coalgebras.
    #[command(subcommand)]
    Coalg(CoalgCommand),
    /// Compare characteristic polynomials of two graphs.
    Cospectral(CospectralArgs),
    /// Run a composition-theorem case.
    Fvm(FvmArgs),
    /// List the registered Kleisli laws and composition-theorem cases.
    Laws,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KindArg {
    Ef,
    Pebble,
    Modal,
    Cos,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FragmentArg {
    Pe,
    Exist,
    Count,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum OpArg {
    DisjointUnion,
    PointedCoproduct,
    Product,
    Merge,
    Vee,
    Reduct,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum TranslationArg {
    Equality,
    Connectivity,
    Global,
    Weak,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ExpectArg {
    Theorem,
    Counterexample,
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub fragment: FragmentArg,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub k: usize,
    pub a: PathBuf,
    pub b: PathBuf,
    /// Decide pebble counting equivalence with Weisfeiler–Leman refinement.
    #[arg(long)]
    pub wl: bool,
    /// Write the witness of a positive verdict to this file.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Args)]
pub struct ComposeArgs {
    #[arg(long, value_enum)]
    pub op: OpArg,
    /// Relation for `merge` (default: the first binary relation).
    #[arg(long)]
    pub relation: Option<String>,
    /// Target signature for `reduct`, e.g. `E:2,P:1`.
    #[arg(long)]
    pub signature: Option<String>,
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct TranslateArgs {
    #[arg(long, value_enum)]
    pub to: TranslationArg,
    /// Silent relation of the weak translation.
    #[arg(long, default_value = "S")]
    pub silent: String,
    /// Leave the silent relation itself untouched by the weak translation.
    #[arg(long, conflicts_with = "close_silent")]
    pub keep_silent_raw: bool,
    /// Replace the silent relation by its own closure.
    #[arg(long)]
    pub close_silent: bool,
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct ComonadParams {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub k: usize,
    /// Word or walk length bound for the pebbling and closed-walk comonads.
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Carrier size guard.
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Subcommand)]
pub enum ComonadCommand {
    /// Emit the carrier of C(A) and its element legend.
    Build {
        #[command(flatten)]
        params: ComonadParams,
        input: PathBuf,
        /// Write the carrier structure here (the legend goes to `--legend`).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        legend: Option<PathBuf>,
    },
    /// Check the comonad equations on every base up to a size.
    Laws {
        #[command(flatten)]
        params: ComonadParams,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        /// Sampled Kleisli morphisms per carrier.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Base signature, e.g. `E:2`.
        #[arg(long, default_value = "E:2")]
        signature: String,
    },
}

#[derive(Args)]
pub struct LawArgs {
    /// Registered law name, e.g. `coproduct-ef`.
    #[arg(long)]
    pub law: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub trunc: Option<usize>,
}

#[derive(Subcommand)]
pub enum KappaCommand {
    /// Apply κ to one element of D(H(A⃗)).
    Apply {
        #[command(flatten)]
        law: LawArgs,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Carrier index, or the element as a JSON term.
        #[arg(long)]
        element: String,
    },
    /// Check naturality, K1 and K2 on every operand tuple up to a size.
    Check {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(long, default_value_t = 2)]
        samples: usize,
        #[arg(long, default_value = "E:2")]
        signature: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
pub struct CoalgParams {
    #[arg(long, value_enum, default_value = "ef")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

#[derive(Args)]
pub struct LiftArgs {
    #[arg(long, value_enum)]
    pub op: OpArg,
    #[command(flatten)]
    pub params: CoalgParams,
}

#[derive(Subcommand)]
pub enum CoalgCommand {
    /// Check the coalgebra laws.
    Check {
        #[command(flatten)]
        params: CoalgParams,
        input: PathBuf,
    },
    /// Lift an operation to coalgebras (structures are read as cofree coalgebras).
    Lift {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count bimorphisms α -> [β⃗] and coalgebra morphisms α -> Ĥ(β⃗).
    BimorphCount {
        #[command(flatten)]
        lift: LiftArgs,
        alpha: PathBuf,
        #[arg(required = true)]
        betas: Vec<PathBuf>,
    },
}

#[derive(Args)]
pub struct CospectralArgs {
    pub g: PathBuf,
    pub h: PathBuf,
}

#[derive(Args)]
pub struct FvmArgs {
    #[arg(long, value_enum)]
    pub op: OpArg,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, value_enum)]
    pub fragment: FragmentArg,
    #[arg(long, value_enum)]
    pub translation: Option<TranslationArg>,
    /// Resource of the operands (the composite may use more).
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest operand size.
    #[arg(long)]
    pub sizes: Option<usize>,
    /// Premise-satisfying samples wanted.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum)]
    pub expect: Option<ExpectArg>,
    /// Search all operand tuples up to `--sizes` instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// Include wall-clock time in the report (it is then not reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command, cli.seed) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
