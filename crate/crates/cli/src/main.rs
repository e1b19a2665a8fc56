//! `chaotic`: hash files and streams, analyze update functions, and run the
//! chaos checks from the command line.
//!
//! Output lines are `key=value` pairs or CSV. Exit status is 0 on success,
//! 1 on domain errors and 2 on usage errors.

mod commands;
mod input;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use input::Framing;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl From<chaotic_iterations::Error> for CliError {
    fn from(e: chaotic_iterations::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "chaotic", version, about = "Chaotic iterations toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct KeyArgs {
    /// Inner hash key, hex, at least 16 bytes.
    #[arg(long)]
    k1: String,
    /// Strategy key, hex, at least 16 bytes.
    #[arg(long)]
    k2: String,
    /// Post-treatment rounds; defaults to the digest length in bits.
    #[arg(long)]
    rounds: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Keyed hash of a file (`-` for standard input).
    Hash {
        #[command(flatten)]
        key: KeyArgs,
        /// Digest length in bits, a multiple of 8 up to 256.
        #[arg(long, default_value_t = 256)]
        bits: usize,
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Running digest of a framed stream, one line per frame.
    StreamHash {
        #[command(flatten)]
        key: KeyArgs,
        /// Frame and digest length in bits, a multiple of 8 up to 256.
        #[arg(long)]
        frame_bits: usize,
        #[arg(long, value_enum, default_value_t = Framing::Fixed)]
        framing: Framing,
        /// Use frames as strategy terms directly, without the keyed mask.
        #[arg(long)]
        no_mask: bool,
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Chaos certification of a truth table.
    Analyze {
        table: String,
        /// Exit with status 1 when the function is not chaotic.
        #[arg(long)]
        require_chaotic: bool,
    },
    /// Counts chaotic functions among all maps on N cells.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// CSV of the states visited by chaotic iterations.
    Trajectory {
        /// Truth-table path, or `neg:N` for vectorial negation.
        #[arg(long)]
        f: String,
        /// Initial state, hex.
        #[arg(long)]
        x0: String,
        /// Comma-separated terms: `i` or, with --subset, `i+j` and `-`.
        #[arg(long, allow_hyphen_values = true)]
        strategy: String,
        /// Number of steps; defaults to the strategy length.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        subset: bool,
    },
    /// Exact distance between two points of the phase space.
    Distance {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
        /// Unary strategy of the first point, comma-separated.
        #[arg(long)]
        s: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        t: String,
        /// Strategy terms compared; defaults to the shorter strategy, capped at 16.
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Avalanche statistics of the keyed hash.
    Avalanche {
        #[arg(long, default_value = "000102030405060708090a0b0c0d0e0f")]
        k1: String,
        #[arg(long, default_value = "f0e0d0c0b0a090807060504030201000")]
        k2: String,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        message_bytes: usize,
        #[arg(long, default_value_t = 1)]
        flipped_bits: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Runs the continuity, sensitivity, expansiveness and entropy checks.
    Verify {
        #[arg(long, value_enum, default_value_t = commands::Check::All)]
        check: commands::Check,
        /// Update function for continuity, sensitivity and entropy.
        #[arg(long, default_value = "neg:3")]
        f: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Depth k for continuity and sensitivity.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 16)]
        horizon: usize,
        /// Longest segment counted by the entropy check.
        #[arg(long, default_value_t = 8)]
        segments: usize,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Hash { key, bits, file } => commands::hash(out, &key, bits, &file),
        Command::StreamHash {
            key,
            frame_bits,
            framing,
            no_mask,
            file,
        } => commands::stream_hash(out, &key, frame_bits, framing, no_mask, &file),
        Command::Analyze {
            table,
            require_chaotic,
        } => commands::analyze(out, &table, require_chaotic),
        Command::Enumerate { n, sequential } => commands::enumerate(out, n, sequential),
        Command::Trajectory {
            f,
            x0,
            strategy,
            steps,
            subset,
        } => commands::trajectory(out, &f, &x0, &strategy, steps, subset),
        Command::Distance {
            n,
            x,
            s,
            y,
            t,
            precision,
        } => commands::distance(out, n, (&x, &s), (&y, &t), precision),
        Command::Avalanche {
            k1,
            k2,
            rounds,
            trials,
            seed,
            message_bytes,
            flipped_bits,
            sequential,
        } => {
            let key = KeyArgs { k1, k2, rounds };
            let cfg = commands::AvalancheArgs {
                trials,
                seed,
                message_bytes,
                flipped_bits,
                sequential,
            };
            commands::avalanche(out, &key, cfg)
        }
        Command::Verify {
            check,
            f,
            seed,
            trials,
            depth,
            horizon,
            segments,
        } => commands::verify(
            out,
            check,
            &f,
            commands::VerifyArgs {
                seed,
                trials,
                depth,
                horizon,
                segments,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
