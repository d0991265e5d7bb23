use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use toroidal_core::report::{self, ParseError, EXIT_OK, EXIT_PARSE, EXIT_VERIFY};
use toroidal_core::verify;

#[derive(Parser)]
#[command(name = "toroidal", version, about = "Toric charts and boundary calculus for reductive group compactifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a fan against a root datum.
    Analyze {
        #[arg(long)]
        root_datum: PathBuf,
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        /// Rank of the type A root datum; the group is SL_{rank+1}.
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dual cone and Hilbert basis of a rational polyhedral cone.
    Hilbert {
        /// Ray list as JSON, e.g. "[[1,0],[1,2]]", or a path to such a file.
        #[arg(long)]
        rays: String,
        /// Ambient dimension; required when the ray list is empty.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, ParseError> {
    std::fs::read_to_string(path).map_err(|e| ParseError {
        source_name: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Analyze { root_datum, fan, out } => {
            let parsed = read(&root_datum)
                .and_then(|t| report::parse_root_datum(&root_datum.display().to_string(), &t))
                .and_then(|rd| {
                    let spec = read(&fan).and_then(|t| report::parse_fan_spec(&fan.display().to_string(), &t))?;
                    report::analyze(&rd, &spec)
                });
            let r = match parsed {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(EXIT_PARSE);
                }
            };
            write(&out, &report::to_pretty(&r))?;
            if let Some(v) = &r.violation {
                eprintln!("invalid fan: {v}");
            } else if !r.supported_in_chamber {
                eprintln!("fan is not supported in the negative Weyl chamber");
            }
            Ok(r.exit_code())
        }
        Command::Verify { suite, rank, cases, seed, out } => {
            let r = match verify::run(&suite, rank, cases, seed) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(EXIT_PARSE);
                }
            };
            write(&out, &report::to_pretty(&r))?;
            for p in &r.properties {
                eprintln!(
                    "{:<40} {:>6} cases {:>6} skipped  {}",
                    p.name,
                    p.cases,
                    p.skipped,
                    if p.passed { "ok" } else { "FAILED" }
                );
            }
            Ok(if r.passed { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Hilbert { rays, dim, out } => {
            let r = match report::parse_rays(&rays).and_then(|rs| report::hilbert(&rs, dim)) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(EXIT_PARSE);
                }
            };
            let text = report::to_pretty(&r);
            match out {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PARSE as u8)
        }
    }
}
