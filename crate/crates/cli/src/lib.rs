//! Command-line front end for `serrehom`: argument parsing, JSON envelopes and exit codes.

pub mod commands;
pub mod envelope;
pub mod selftest;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serrehom::Error;

/// Environment variable overriding the default precision in bits.
pub const PREC_ENV: &str = "SERREHOM_PREC_BITS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_PRECISION: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Parser, Debug, Clone)]
#[command(name = "serrehom", version, about = "Lattice certificates for Hom over twisted group rings of CM orders")]
pub struct Cli {
    /// Worker threads for parallel sections (defaults to all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    /// Record wall-clock time in the envelope.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Conductor, field and generators of an imaginary quadratic order.
    OrderInfo(OrderInfoArgs),
    /// The isogeny from a curve with CM by the maximal order onto a curve with CM by O.
    MaxIsogeny(MaxIsogenyArgs),
    /// Hom(M, E) for a module file M and the curve E = C / O.
    Hom(HomArgs),
    /// Hilbert class polynomial of a discriminant.
    ClassPoly(ClassPolyArgs),
    /// Runs the built-in invariant checks.
    Selftest(SelftestArgs),
}

/// An order given by its discriminant or by `(d, f)`.
#[derive(Args, Debug, Clone, Default)]
pub struct OrderArgs {
    /// Discriminant D = f^2 disc(F).
    #[arg(short = 'D', long = "disc", allow_negative_numbers = true, conflicts_with_all = ["d", "f"])]
    pub disc: Option<i64>,
    /// Squarefree d < 0 naming F = Q(sqrt d).
    #[arg(long, allow_negative_numbers = true, requires = "f")]
    pub d: Option<i64>,
    /// Conductor of the order in O_F.
    #[arg(long, requires = "d")]
    pub f: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct OrderInfoArgs {
    #[command(flatten)]
    pub order: OrderArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct MaxIsogenyArgs {
    #[command(flatten)]
    pub order: OrderArgs,
    #[arg(long)]
    pub json: bool,
    /// Check both j-invariants against their Hilbert class polynomials.
    #[arg(long)]
    pub certify_j: bool,
    /// Working precision in bits for --certify-j.
    #[arg(long)]
    pub prec: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ActionFlag {
    Trivial,
    Conj,
}

#[derive(Args, Debug, Clone)]
pub struct HomArgs {
    /// Module file in the relation format (see docs/module-format.md).
    #[arg(long)]
    pub module: PathBuf,
    /// Discriminant of the curve's CM order; required when the module is over Z.
    #[arg(short = 'D', long = "disc", allow_negative_numbers = true)]
    pub disc: Option<i64>,
    /// Galois action on the coefficients.
    #[arg(long, value_enum)]
    pub action: Option<ActionFlag>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ClassPolyArgs {
    #[arg(short = 'D', long = "disc", allow_negative_numbers = true)]
    pub disc: i64,
    /// Working precision in bits.
    #[arg(long)]
    pub prec: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SelftestArgs {
    #[arg(long)]
    pub json: bool,
}

/// A failure together with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INTERNAL, message: message.into() }
    }

    /// Errors raised while reading the command line or input files.
    pub fn from_input(e: Error) -> Self {
        CliError::input(e.to_string())
    }

    /// Errors raised by a computation on already validated input.
    pub fn from_computation(e: Error) -> Self {
        let code = match e {
            Error::PrecisionExhausted(_) | Error::PrecisionUnachievable(_) => EXIT_PRECISION,
            Error::BadDiscriminant(..)
            | Error::BadField(_)
            | Error::Parse { .. }
            | Error::RingMismatch(_)
            | Error::GroupMismatch
            | Error::UnsupportedGroup(_) => EXIT_INPUT,
            _ => EXIT_INTERNAL,
        };
        CliError { code, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Default precision, from the environment when set.
pub fn default_precision() -> Result<usize, CliError> {
    match std::env::var(PREC_ENV) {
        Err(_) => Ok(serrehom::classpoly::DEFAULT_PRECISION_BITS),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(bits) if bits >= 64 => Ok(bits),
            _ => Err(CliError::input(format!("{PREC_ENV} must be an integer >= 64, got '{v}'"))),
        },
    }
}

/// What to print and the exit code. A report whose checks failed is still printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

/// Runs one invocation; the text is newline-terminated.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    if let Some(n) = cli.threads {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global();
    }
    let start = std::time::Instant::now();
    let (env, json) = match &cli.command {
        Command::OrderInfo(a) => (commands::order_info(a)?, a.json),
        Command::MaxIsogeny(a) => (commands::max_isogeny(a)?, a.json),
        Command::Hom(a) => (commands::hom(a)?, a.json),
        Command::ClassPoly(a) => (commands::class_poly(a)?, a.json),
        Command::Selftest(a) => (selftest::run()?, a.json),
    };
    let env = if cli.timing { env.with_timing(start.elapsed()) } else { env };
    let text = if json { env.to_json_string() } else { env.human.clone() };
    let code = if env.failed { EXIT_INTERNAL } else { EXIT_OK };
    Ok(Output { text, code })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_exit_codes() {
        let code = |e| CliError::from_computation(e).code;
        assert_eq!(code(Error::PrecisionExhausted("x".into())), EXIT_PRECISION);
        assert_eq!(code(Error::PrecisionUnachievable("x".into())), EXIT_PRECISION);
        assert_eq!(code(Error::BadDiscriminant(-5, "x".into())), EXIT_INPUT);
        assert_eq!(code(Error::Parse { line: 1, msg: "x".into() }), EXIT_INPUT);
        assert_eq!(code(Error::Invariant("x".into())), EXIT_INTERNAL);
        assert_eq!(code(Error::NotIsogeny), EXIT_INTERNAL);
    }

    #[test]
    fn run_returns_the_report() {
        let cli = Cli::try_parse_from(["serrehom", "class-poly", "-D", "-4", "--prec", "128"]).unwrap();
        assert_eq!(run(&cli).unwrap(), Output { text: "x - 1728\n".into(), code: EXIT_OK });
        let cli = Cli::try_parse_from(["serrehom", "order-info", "-D", "-8"]).unwrap();
        assert!(run(&cli).unwrap().text.contains("disc(O_F)       -8"));
    }
}
