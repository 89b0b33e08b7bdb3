use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "qsl2r",
    version,
    about = "Representations, ladder operators and identity checks for U_q(sl(2,R)) at odd roots of unity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a representation and export its generators as JSON.
    Rep(RepCmd),
    /// Run one verification on a representation or on the symbolic side.
    Verify(VerifyCmd),
    /// Replay the symbolic derivations, or normalize an expression.
    Symbolic(SymbolicCmd),
    /// Eigenvalues of J ordered into a ladder chain, with the band check of Z.
    Spectrum(RepCmd),
    /// Apply raising and lowering operators to J-eigenvectors.
    Ladder(LadderCmd),
    /// Search for a diagonal sign matrix and metric realizing the modified involution.
    Unitarize(RepCmd),
    /// Compare the two families where they are claimed to coincide.
    Intersect(IntersectCmd),
    /// Run the whole verification grid for one root of unity.
    Suite(SuiteCmd),
}

/// Which root of unity, which representation, and on which backend.
#[derive(Args, Debug, Clone)]
pub struct RepArgs {
    /// Numerator P of q = exp(2 pi i P/Q).
    #[arg(long = "P")]
    pub p: Option<u32>,
    /// Odd order Q of q.
    #[arg(long = "Q")]
    pub q: Option<u32>,
    /// Representation family.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub family: Option<u8>,
    /// Family 1: highest weight r in 0..Q-1 (dimension r+1).
    #[arg(long)]
    pub r: Option<u32>,
    /// Family 1: sign of the Z eigenvalues (+ or -).
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    /// Family 2: lambda as re,im, or as q^k / -q^k for the exact path.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Family 2: parameter a as re,im (a rational on the exact path).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Family 2: parameter b as re,im (a rational on the exact path).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Load the representation from a JSON file written by `rep --out`.
    #[arg(long, conflicts_with_all = ["family", "r", "sign", "lambda", "a", "b"])]
    pub input: Option<PathBuf>,
    /// Require exact cyclotomic arithmetic.
    #[arg(long, conflicts_with = "approx")]
    pub exact: bool,
    /// Force complex double arithmetic.
    #[arg(long)]
    pub approx: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative tolerance for numeric checks (overrides QSL2R_TOL).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct RepCmd {
    #[command(flatten)]
    pub rep: RepArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Defining,
    Zj,
    Identity,
    Lemma,
    Hopf,
    Central,
    Star,
}

#[derive(Args, Debug)]
pub struct VerifyCmd {
    #[command(flatten)]
    pub rep: RepArgs,
    #[command(flatten)]
    pub out: OutArgs,
    #[arg(long, value_enum)]
    pub check: Check,
    /// Label x for the identity check, as re,im or an integer.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Lemma check: replace V by this expression.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proof {
    Identity,
    Lemma,
    Hopf,
    All,
}

#[derive(Args, Debug)]
pub struct SymbolicCmd {
    /// Which derivation to replay.
    #[arg(long, value_enum, default_value = "all")]
    pub proof: Proof,
    /// Instead, substitute J in this expression and bring it to normal order.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "proof")]
    pub expr: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Raise,
    Lower,
}

#[derive(Args, Debug)]
pub struct LadderCmd {
    #[command(flatten)]
    pub rep: RepArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Label x of the input eigenvalue [x]_q, as re,im. Without --vector,
    /// restricts the sweep to eigenvalues equal to [x]_q.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Input vector as semicolon-separated re,im entries.
    #[arg(long, allow_hyphen_values = true, requires = "x")]
    pub vector: Option<String>,
    /// Direction; both when omitted.
    #[arg(long, value_enum)]
    pub dir: Option<Dir>,
}

#[derive(Args, Debug)]
pub struct IntersectCmd {
    #[arg(long = "P")]
    pub p: u32,
    #[arg(long = "Q")]
    pub q: u32,
    /// Sign of lambda = sign q^(1-Q); both when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct SuiteCmd {
    #[arg(long = "P")]
    pub p: u32,
    #[arg(long = "Q")]
    pub q: u32,
    /// Seed for the random cyclic-family parameters.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}
