//! `bsc4`: exact ML-decoding analysis of four-codeword binary codes on the
//! binary symmetric channel.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bsc4_core::{CodeProfile, RationalProb};

/// Exit status for a rule that does not apply to the given code.
const EXIT_NOT_APPLICABLE: u8 = 2;
/// Exit status for malformed or out-of-range input.
const EXIT_INPUT: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "bsc4", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "BSC4_WORKERS", default_value_t = 0)]
    pub workers: usize,

    /// Also print probabilities as approximate decimals with K digits.
    #[arg(long, global = true, value_name = "K")]
    pub decimal: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Oracle,
    Analytic,
    /// Oracle up to n = 16, analytic beyond.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    /// Full reduction to a linear or Class-I code.
    Pipeline,
    EvenReplace,
    TwoBitFlip,
    ClassI,
    Symmetry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// The two spectra of the type-3 replacement.
    Spectra,
    /// Partial-sum dominance certificate.
    Dominance,
}

#[derive(Args, Debug, Clone)]
pub struct CodeInput {
    /// Column profile such as `1:3,3:2,5:5,6:7`.
    #[arg(long, conflicts_with = "codebook_file", required_unless_present = "codebook_file")]
    pub profile: Option<CodeProfile>,

    /// Codebook file, one codeword of 0/1 characters per line.
    #[arg(long, value_name = "PATH")]
    pub codebook_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct EpsList {
    /// Crossover probability p/q with 0 < p/q < 1/2; repeatable.
    #[arg(long = "eps", value_name = "P/Q")]
    pub eps: Vec<RationalProb>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distance spectrum of a code.
    Spectrum {
        #[command(flatten)]
        input: CodeInput,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
    },
    /// Exact probability of correct ML decoding.
    Lambda {
        #[command(flatten)]
        input: CodeInput,
        #[command(flatten)]
        eps: EpsList,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
    },
    /// Compare two codes of equal length.
    Compare {
        #[command(flatten)]
        input: CodeInput,
        /// Profile of the second code.
        #[arg(long)]
        against: CodeProfile,
        #[command(flatten)]
        eps: EpsList,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
    },
    /// Canonical form, linearity and Class-I membership.
    Classify {
        #[command(flatten)]
        input: CodeInput,
    },
    /// Apply one rewrite rule or the full reduction, auditing every step.
    Reduce {
        #[command(flatten)]
        input: CodeInput,
        #[arg(long, value_enum, default_value_t = RuleArg::Pipeline)]
        rule: RuleArg,
        /// Row s of an even replacement (1 to 4).
        #[arg(long)]
        s: Option<usize>,
        /// Row t of an even replacement (1 to 4).
        #[arg(long)]
        t: Option<usize>,
        /// Source type of a two-bit flip (1, 2 or 4).
        #[arg(long)]
        source: Option<u8>,
        /// Type moved into the type-3 slot by a symmetry (3, 5 or 6).
        #[arg(long)]
        target: Option<u8>,
        /// Crossover probabilities at which to trace lambda along the steps.
        #[command(flatten)]
        eps: EpsList,
    },
    /// Class-I spectra and the type-3 replacement certificate.
    Class1 {
        #[command(flatten)]
        input: CodeInput,
        #[arg(long, value_enum, default_value_t = Check::Spectra)]
        check: Check,
    },
    /// Certify that a linear code is optimal at block length n.
    VerifyLinear {
        #[arg(long)]
        n: u64,
        /// Scan every lattice point even after a failure.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        eps: EpsList,
    },
    /// Exhaustive optimum over all inequivalent codes (n <= 12).
    Search {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        eps: EpsList,
    },
    /// Best linear code by exhaustive search over linear profiles.
    BestLinear {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        eps: EpsList,
    },
}

fn exit_status(err: &anyhow::Error) -> u8 {
    use bsc4_core::Error;
    let core = err.chain().find_map(|e| e.downcast_ref::<Error>());
    match core {
        Some(Error::RuleNotApplicable { .. } | Error::NotClassI(_) | Error::UnsupportedSupport(_)) => {
            EXIT_NOT_APPLICABLE
        }
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.workers > 0 {
        // the verifier builds its own pool; this one serves the other commands
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", render::render(&out, cli.format, cli.decimal));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_status(&e))
        }
    }
}
