use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "chamberhom",
    version,
    about = "Twisted (co)homology of real line arrangements from chamber complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Primes for the field-rank consistency checks.
    #[arg(long, global = true, value_delimiter = ',', default_value = "2,3,5")]
    primes: Vec<u64>,
}

#[derive(Args, Debug)]
struct CharArgs {
    /// Arrangement file.
    arrangement: PathBuf,
    /// Sign character, one `+` or `-` per line; all `+` if omitted.
    #[arg(long = "char", allow_hyphen_values = true)]
    character: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiple points, parallel classes and Betti numbers.
    Poset { arrangement: PathBuf },
    /// Chambers, flag levels and opposite chambers.
    Chambers { arrangement: PathBuf },
    /// Checks the CDO-condition for a sign character.
    Cdo(CharArgs),
    /// Cohomology with rank-one coefficients.
    Cohomology(CharArgs),
    /// Homology with rank-one coefficients.
    Homology(CharArgs),
    /// Compares computed cohomology with the closed form under CDO.
    Predict(CharArgs),
    /// (Co)homology of the double cover attached to a class in H^1(M; Z/2).
    DoubleCover {
        arrangement: PathBuf,
        /// One bit per line.
        #[arg(long)]
        omega: String,
    },
    /// Fox-calculus homology of a presentation, optionally compared with an arrangement.
    Oracle {
        presentation: PathBuf,
        /// Arrangement whose chamber homology should agree.
        #[arg(long)]
        arrangement: Option<PathBuf>,
        /// Single sign character; every character if omitted.
        #[arg(long = "char", allow_hyphen_values = true)]
        character: Option<String>,
    },
    /// Prints a seeded random rational arrangement.
    GenRandom {
        #[arg(long)]
        lines: usize,
        #[arg(long, default_value_t = 6)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Parallel pairs to plant.
        #[arg(long, default_value_t = 0)]
        parallel: usize,
        /// Triple points to plant.
        #[arg(long, default_value_t = 0)]
        triples: usize,
    },
    /// Lists classes with torsion in the double cover or order > 2 torsion in the local system.
    SearchTorsion {
        arrangement: PathBuf,
        /// Scan every nonzero class (default).
        #[arg(long, conflicts_with = "sample")]
        all_omegas: bool,
        /// Scan this many random classes instead.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sends one plane of a central arrangement to infinity.
    Decone {
        central: PathBuf,
        /// 1-based index of the plane at infinity.
        #[arg(long)]
        infinity: usize,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let json = cli.json;
    let primes = &cli.primes;
    match cli.command {
        Command::Poset { arrangement } => commands::poset(&arrangement, json),
        Command::Chambers { arrangement } => commands::chambers(&arrangement, json),
        Command::Cdo(a) => commands::cdo(&a.arrangement, a.character.as_deref(), json),
        Command::Cohomology(a) => commands::groups(&a.arrangement, a.character.as_deref(), false, primes, json),
        Command::Homology(a) => commands::groups(&a.arrangement, a.character.as_deref(), true, primes, json),
        Command::Predict(a) => commands::predict(&a.arrangement, a.character.as_deref(), json),
        Command::DoubleCover { arrangement, omega } => commands::double_cover(&arrangement, &omega, primes, json),
        Command::Oracle {
            presentation,
            arrangement,
            character,
        } => commands::oracle(&presentation, arrangement.as_deref(), character.as_deref(), json),
        Command::GenRandom {
            lines,
            bound,
            seed,
            parallel,
            triples,
        } => commands::gen_random(lines, bound, seed, parallel, triples),
        Command::SearchTorsion {
            arrangement,
            all_omegas: _,
            sample,
            seed,
        } => commands::search_torsion(&arrangement, sample, seed, json),
        Command::Decone { central, infinity } => commands::decone(&central, infinity),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("check failed: {msg}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
