//! `omegamodal`: frames, algebras, bounded validity and proof checking from
//! the command line.
//!
//! Exit codes: 0 verified, 1 property or check failure, 2 formula parse
//! error, 3 verified only up to the ω-rule bound, 64 usage, 65 input
//! format, 70 resource budget.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use omegamodal_core::semantics::DEFAULT_BUDGET;

use error::{EXIT_OK, EXIT_USAGE};
use output::{Format, Out};

#[derive(Debug, Parser)]
#[command(name = "omegamodal", version, about = "Neighborhood frames, modal algebras and ω-rule proofs")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Largest domain size for bounded validity.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_domain: u64,
    /// Premises checked per ω-rule step (n = 0..=N).
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub omega_bound: u64,
    /// Largest frame size for enumerations.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=4))]
    pub max_worlds: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on model evaluations for the whole run.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula and print its syntax tree.
    Parse { formula: String },
    /// Frame commands.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Algebra commands.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Complex algebra of a frame.
    Complex {
        frame: PathBuf,
        /// Write the algebra here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Q-filter frame of an algebra, with the embedding verified.
    Qfilter {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        algebra: Option<PathBuf>,
        /// Use a seeded random algebra with this many atoms instead.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=4))]
        random: Option<u64>,
        /// JSON list of meet sets, each a list of element bitmasks.
        #[arg(long)]
        meet: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bounded validity of formulas on a frame.
    Validate {
        frame: PathBuf,
        formulas: Vec<String>,
        /// Also check every formula of this corpus file.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Compare frame validity with validity on the complex algebra.
    Duality {
        /// Defaults to the bundled 3-world frame.
        frame: Option<PathBuf>,
        /// Defaults to the bundled corpus.
        #[arg(long, conflicts_with = "random")]
        corpus: Option<PathBuf>,
        /// Use this many seeded random formulas instead.
        #[arg(long)]
        random: Option<usize>,
    },
    /// GL-frame check of one frame, or of every strict-order Kripke frame.
    GlCheck {
        frame: Option<PathBuf>,
        #[arg(long, default_value = "box")]
        modality: String,
    },
    /// Laws of the interval algebra over ω+ω and the Cp ⊃ ECp counterexample.
    CklDemo {
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Proof commands.
    #[command(subcommand)]
    Prove(ProveCommand),
}

#[derive(Debug, Subcommand)]
pub enum FrameCommand {
    /// Check frame properties: mt, tp, cf, kripke, normal, gl.
    Check {
        frame: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "mt,tp,cf,kripke")]
        props: Vec<String>,
        /// Restrict to these modalities.
        #[arg(long, value_delimiter = ',')]
        modality: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCommand {
    /// Check algebra properties: mt, tp, cf, normal, multiplicative, gl, ckl.
    Check {
        algebra: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "mt,tp,cf")]
        props: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        modality: Vec<String>,
        /// Modality pair `E,C` used by the ckl property.
        #[arg(long, value_delimiter = ',', num_args = 2, default_values = ["E", "C"])]
        ckl: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProveCommand {
    /// Check a proof file against a proof system.
    Check {
        #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
        proof: Option<PathBuf>,
        /// Check a bundled proof by name (`mhformula`).
        #[arg(long)]
        builtin: Option<String>,
        /// QGL, QCKL or QCKL-; defaults to the proof file's `system`.
        #[arg(long)]
        system: Option<String>,
    },
    /// Write the bundled C(p⊃Ep) ⊃ (p⊃Cp) proof as JSON.
    Generate {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Out::stdout(cli.config.format);
    match commands::run(&cli.command, &cli.config, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
