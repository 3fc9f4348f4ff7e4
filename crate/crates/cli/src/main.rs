use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use hptmaster::{
    cmd_bv, cmd_massey, cmd_transfer, cmd_validate, CliError, MasseyOptions, Outcome, Pipeline, ThetaSource,
    DEFAULT_MASSEY_ORDER, DEFAULT_MAX_WORD_LENGTH,
};

#[derive(Parser)]
#[command(
    name = "hptmaster",
    version,
    about = "Exact homotopy transfer of dg Lie structures over ℚ"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Print the wall-clock time of the run on standard error
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom of a dg Lie algebra or BV problem file
    Validate { file: PathBuf },
    /// Transfer a dg Lie algebra to its homology
    Transfer {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_WORD_LENGTH)]
        max_word_length: usize,
        /// Verify the master equation, 𝒟² = 0 and the perturbation lemma
        #[arg(long)]
        check: bool,
    },
    /// Run the transfer along the kernel of the BV operator
    Bv {
        file: PathBuf,
        /// kernel | flat-identity
        #[arg(long, default_value = "kernel")]
        pipeline: Pipeline,
        #[arg(long, default_value_t = DEFAULT_MAX_WORD_LENGTH)]
        max_word_length: usize,
    },
    /// Massey-product perturbations of a wedge of spheres
    Massey {
        /// Sphere dimensions, e.g. 3,3,12
        #[arg(long, alias = "dims", value_delimiter = ',', required = true)]
        spheres: Vec<u32>,
        #[arg(long, default_value_t = DEFAULT_MASSEY_ORDER)]
        order: usize,
        /// zero | random | path to a JSON array of rational strings
        #[arg(long, default_value = "zero")]
        theta: String,
        /// Seed for --theta random
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { file } => cmd_validate(&read(&file)?),
        Command::Transfer {
            file,
            max_word_length,
            check,
        } => cmd_transfer(&read(&file)?, max_word_length, check),
        Command::Bv {
            file,
            pipeline,
            max_word_length,
        } => cmd_bv(&read(&file)?, pipeline, max_word_length),
        Command::Massey {
            spheres,
            order,
            theta,
            seed,
        } => {
            let theta = match theta.as_str() {
                "zero" => ThetaSource::Zero,
                "random" => ThetaSource::Random,
                path => ThetaSource::File(read(&PathBuf::from(path))?),
            };
            cmd_massey(&MasseyOptions {
                spheres,
                order,
                theta,
                seed,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli.command);
    if cli.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match outcome {
        Ok(outcome) => {
            let text = outcome.render();
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
