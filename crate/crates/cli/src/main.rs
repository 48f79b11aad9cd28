mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "qphase",
    version,
    about = "Discrete phase space, mutually unbiased bases and Wigner functions for n qubits"
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    pub format: Format,
    /// Decimal places for printed numbers
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=12))]
    pub precision: u8,
    /// Seed for simulated measurements
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Addition and multiplication tables of GF(2^n)
    Field {
        #[arg(short = 'n', long = "qubits")]
        n: u32,
    },
    /// The N + 1 striations of the N x N phase space
    Striations {
        #[arg(short = 'n', long = "qubits")]
        n: u32,
    },
    /// One basis per striation, with the pairwise overlap report
    Mub {
        #[arg(short = 'n', long = "qubits")]
        n: u32,
        /// Exit with status 1 unless every cross-basis overlap is 1/sqrt(N)
        #[arg(long)]
        verify: bool,
    },
    /// Discrete Wigner function of a state
    Wigner {
        #[arg(short = 'n', long = "qubits")]
        n: u32,
        /// Registry name (up, down, plus, minus, y+, y-, tilted-111, upup,
        /// upright, singlet, bell0, mixed) or inline JSON vector / matrix
        #[arg(long)]
        state: String,
        /// Also print the sum of W over every line
        #[arg(long)]
        lines: bool,
    },
    /// Simulated conjugate-basis tomography
    Tomo {
        #[arg(short = 'n', long = "qubits")]
        n: u32,
        #[arg(long)]
        state: String,
        /// Copies measured per basis; 0 uses exact probabilities
        #[arg(long, default_value_t = 1000, allow_negative_numbers = true)]
        shots: i64,
        /// Clip negative eigenvalues of the estimate and renormalize
        #[arg(long)]
        project: bool,
        /// Run an error-scaling study over these shot counts instead
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        study: Option<Vec<i64>>,
        /// Seeds averaged per shot count in a study
        #[arg(long, default_value_t = 200)]
        seeds: u64,
    },
    /// Run the invariant suite for n = 1..=n_max
    Verify {
        #[arg(long, default_value_t = 3)]
        n_max: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            if e.code == commands::USAGE {
                eprintln!("run `qphase --help` for usage");
            }
            ExitCode::from(e.code)
        }
    }
}
