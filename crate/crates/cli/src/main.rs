mod commands;
mod file;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use redprod_core::Rational;

#[derive(Debug, Parser)]
#[command(name = "redprod", version, about = "Reduced products of finite metric structures")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Report Lipschitz violations in structure files as warnings.
    #[arg(long, global = true)]
    lenient_lipschitz: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a formula, or test membership in one fragment.
    Check(CheckArgs),
    /// Evaluate a formula in a structure.
    Eval(EvalArgs),
    /// Build the reduced product of structures.
    Product(ProductArgs),
    /// Compare a formula in a reduced product with the limsup of its factor values.
    Preserve(PreserveArgs),
    /// Generate an SCP instance.
    GenScp(GenScpArgs),
    /// Translate a classical Palyutin formula into a Horn formula.
    ToHorn(ToHornArgs),
    /// Compare two structures on Palyutin sentences of bounded depth.
    Equiv(EquivArgs),
    /// Build the stability criterion sentence of a formula.
    StabilityCriterion(StabilityArgs),
    /// Approximate a formula on a grid of thresholds.
    Approx(ApproxArgs),
}

#[derive(Debug, Args)]
struct SignatureSource {
    /// Structure file whose signature resolves symbols; inferred from the formulas otherwise.
    #[arg(short = 's', long = "structure")]
    structure: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Fragment name, e.g. palyutin or classical-horn.
    #[arg(long)]
    fragment: Option<String>,
    /// Read the formula with the classical grammar.
    #[arg(long)]
    classical: bool,
    #[command(flatten)]
    signature: SignatureSource,
    formula: String,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(short = 's', long = "structure")]
    structure: PathBuf,
    #[arg(short = 'f', long)]
    formula: String,
    /// Point labels for free variables, as `x=a,y=b`; repeatable.
    #[arg(long)]
    assign: Vec<String>,
    /// Read the formula with the classical grammar and evaluate its encoding.
    #[arg(long)]
    classical: bool,
}

#[derive(Debug, Args)]
struct FactorArgs {
    /// Factor structure files, in index order.
    #[arg(short = 's', long = "structure", required = true)]
    structures: Vec<PathBuf>,
    /// `kernel=0,1`, `ultra=i`, `gen=0,1;1,2` or `trivial`.
    #[arg(long, default_value = "trivial")]
    filter: String,
    /// Largest product accepted, in points.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Debug, Args)]
struct ProductArgs {
    #[command(flatten)]
    factors: FactorArgs,
    /// Write the product structure file here instead of standard output.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PreserveArgs {
    #[command(flatten)]
    factors: FactorArgs,
    #[arg(short = 'f', long)]
    formula: String,
    /// Read the formula with the classical grammar and check its encoding.
    #[arg(long)]
    classical: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mono {
    Nondecreasing,
    Nonincreasing,
}

#[derive(Debug, Args)]
struct GenScpArgs {
    #[arg(long)]
    phi: String,
    /// One per disjunct.
    #[arg(long, required = true)]
    psi: Vec<String>,
    /// Connective applied to each disjunct, in order; the identity by default.
    #[arg(long = "connective")]
    connectives: Vec<String>,
    /// Variables quantified inside; the rest are closed off outside.
    #[arg(long, value_delimiter = ',', default_value = "x")]
    vars: Vec<String>,
    #[arg(long, value_enum, default_value = "nondecreasing")]
    mono: Mono,
    /// Build the classical schema instead.
    #[arg(long)]
    classical: bool,
    #[command(flatten)]
    signature: SignatureSource,
}

#[derive(Debug, Args)]
struct ToHornArgs {
    formula: String,
}

#[derive(Debug, Args)]
struct EquivArgs {
    /// Exactly two structure files.
    #[arg(short = 's', long = "structure", num_args = 1, required = true)]
    structures: Vec<PathBuf>,
    #[arg(long)]
    depth: usize,
    /// Variables available to the enumeration.
    #[arg(long, value_delimiter = ',', default_value = "x")]
    pool: Vec<String>,
}

#[derive(Debug, Args)]
struct StabilityArgs {
    #[arg(long)]
    phi: String,
    #[arg(long, default_value = "x")]
    x: String,
    #[arg(long, default_value = "y")]
    y: String,
    #[arg(long, default_value = "z")]
    z: String,
    #[command(flatten)]
    signature: SignatureSource,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    #[arg(long)]
    phi: String,
    #[arg(long)]
    eps: Rational,
    /// Lowest threshold; the formula's lower bound by default.
    #[arg(long)]
    lo: Option<Rational>,
    /// Highest threshold; the formula's upper bound by default.
    #[arg(long)]
    hi: Option<Rational>,
    /// Helper formulas, one per grid interval; `phi - r_i` by default.
    #[arg(long)]
    helper: Vec<String>,
    /// Margins, one per interval; `eps/2` by default.
    #[arg(long)]
    margin: Vec<Rational>,
    /// Eliminate `inf_<var> max(phi, D gamma)` instead.
    #[arg(long, requires = "var")]
    gamma: Option<String>,
    #[arg(long)]
    var: Option<String>,
    /// The nondecreasing connective D; the identity by default.
    #[arg(long)]
    connective: Option<String>,
    /// Structure files on which to measure the distance to the target.
    #[arg(long = "measure")]
    measure: Vec<PathBuf>,
    #[command(flatten)]
    signature: SignatureSource,
}

/// Outcome of a command that ran to completion.
pub enum Verdict {
    Success,
    Holds(bool),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context {
        json: cli.json,
        strict_lipschitz: !cli.lenient_lipschitz,
    };
    let result = match &cli.command {
        Command::Check(a) => commands::check(&ctx, a),
        Command::Eval(a) => commands::eval(&ctx, a),
        Command::Product(a) => commands::product(&ctx, a),
        Command::Preserve(a) => commands::preserve(&ctx, a),
        Command::GenScp(a) => commands::gen_scp(&ctx, a),
        Command::ToHorn(a) => commands::to_horn(&ctx, a),
        Command::Equiv(a) => commands::equiv(&ctx, a),
        Command::StabilityCriterion(a) => commands::stability(&ctx, a),
        Command::Approx(a) => commands::approx(&ctx, a),
    };
    match result {
        Ok(Verdict::Success | Verdict::Holds(true)) => ExitCode::SUCCESS,
        Ok(Verdict::Holds(false)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
