use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dioph::algnum::HprimeMinusOne;

mod cache;
mod commands;
mod report;

use report::{Outcome, ReportEnvelope};

#[derive(Parser, Debug)]
#[command(name = "dioph", version, about = "Certified Diophantine analysis of n tan α = tan(nα)")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Print the structured report instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the structured report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Reuse reports stored in this directory.
    #[arg(long, global = true, env = "DIOPH_CACHE_DIR", value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(16..))]
    prec_bits: u32,
    /// Value of h'(-1): `1`, or `pi` for max{h, |Log z|, 1}. Defaults to `1`
    /// for solve/analyze/cf and `pi` for height.
    #[arg(long, global = true, value_enum, value_name = "1|pi")]
    hprime_minus_one: Option<Convention>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Convention {
    #[value(name = "1")]
    One,
    #[value(name = "pi")]
    Pi,
}

impl From<Convention> for HprimeMinusOne {
    fn from(c: Convention) -> Self {
        match c {
            Convention::One => HprimeMinusOne::One,
            Convention::Pi => HprimeMinusOne::Pi,
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// List the solutions α ∈ (0, π/2) of n tan α = tan(nα).
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Certificate, continued fraction and verification for one solution.
    Analyze {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 100_000)]
        qmax: u64,
        #[arg(long, default_value_t = 60)]
        terms: usize,
        /// Replace θ by θ - round(θ) before verifying.
        #[arg(long)]
        fold: bool,
    },
    /// Weil height of the root of a polynomial near a hint.
    Height {
        /// Ascending coefficients, e.g. "-7 3" for 3x - 7.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Approximate root, e.g. "2.33" or "0.408+0.912i"; the radius is
        /// one unit in the last digit unless given as "x +/- r".
        #[arg(long, allow_hyphen_values = true)]
        hint: String,
    },
    /// Continued fraction of θ, either from a solution or as Arg(z)/2π.
    Cf {
        /// Solution given as "n,index".
        #[arg(long, conflicts_with_all = ["poly", "hint"], value_name = "N,INDEX")]
        gutkin: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "hint")]
        poly: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "poly")]
        hint: Option<String>,
        #[arg(long, default_value_t = 60)]
        terms: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let key = commands::cache_key(&cli.command, g);
    let cached = g.cache_dir.as_deref().and_then(|dir| cache::load(dir, &key));
    let (envelope, code) = match cached {
        Some(hit) => hit,
        None => match commands::run(&cli.command, g) {
            Ok(Outcome { envelope, code }) => {
                if let Some(dir) = g.cache_dir.as_deref() {
                    if let Err(e) = cache::store(dir, &key, &envelope, code) {
                        eprintln!("warning: could not write cache: {e}");
                    }
                }
                (envelope, code)
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(report::exit_code_for(&e));
            }
        },
    };
    emit(&envelope, g);
    ExitCode::from(code)
}

fn emit(envelope: &ReportEnvelope, g: &GlobalOpts) {
    let json = serde_json::to_string_pretty(envelope).expect("report serializes");
    if let Some(path) = &g.out {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("warning: could not write {}: {e}", path.display());
        }
    }
    if g.json {
        println!("{json}");
    } else {
        print!("{}", envelope.summary);
    }
}
