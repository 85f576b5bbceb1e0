//! `hodge-degen`: run the verification suites and print a report.

mod checks;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use checks::FamilyArg;
use report::{Check, Report};

#[derive(Parser, Debug)]
#[command(name = "hodge-degen", version, about = "Verification suites for higher Chow cycles on degenerating surfaces")]
struct Cli {
    /// Significant digits kept for floating-point values.
    #[arg(long, global = true, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..=17))]
    digits: u32,

    /// Worker threads for independent checks.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,

    /// Report elapsed_ms as 0 so output is byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyOpt {
    Gamma,
    Lambda,
    Delta,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Presentation, φ and kernel-basis checks.
    Basis {
        #[arg(long = "d")]
        d: usize,
    },
    /// Singularity table and span rank.
    Sing {
        #[arg(long = "d")]
        d: usize,
        #[arg(long, value_enum, default_value_t = FamilyOpt::All)]
        family: FamilyOpt,
    },
    /// Limit Abel-Jacobi value of the δ cycle.
    Aj {
        /// Also run the independent 2D quadrature.
        #[arg(long)]
        oracle: bool,
    },
    /// Limit pairing matrix and its determinant.
    Pairing {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Limit constant; defaults to |Im AJ|.
        #[arg(long = "L", allow_negative_numbers = true)]
        l_value: Option<f64>,
        /// Use the nilpotent-orbit model with all tails zero.
        #[arg(long)]
        zero_tails: bool,
    },
    /// Every suite at default settings.
    VerifyAll,
}

fn run_groups(groups: Vec<checks::Group>, jobs: usize) -> Vec<Check> {
    let slots: Vec<Mutex<Vec<Check>>> = groups.iter().map(|_| Mutex::new(Vec::new())).collect();
    let next = Mutex::new(0usize);
    std::thread::scope(|s| {
        for _ in 0..jobs.min(groups.len()).max(1) {
            s.spawn(|| loop {
                let k = {
                    let mut n = next.lock().expect("queue lock");
                    let k = *n;
                    *n += 1;
                    k
                };
                if k >= groups.len() {
                    break;
                }
                *slots[k].lock().expect("slot lock") = groups[k]();
            });
        }
    });
    slots.into_iter().flat_map(|m| m.into_inner().expect("slot lock")).collect()
}

fn build(cli: &Cli) -> hodge_degen::Result<(String, Vec<Check>)> {
    Ok(match &cli.command {
        Command::Basis { d } => (format!("basis --d {d}"), checks::basis(*d)?),
        Command::Sing { d, family } => {
            let f = match family {
                FamilyOpt::Gamma => FamilyArg::Gamma,
                FamilyOpt::Lambda => FamilyArg::Lambda,
                FamilyOpt::Delta => FamilyArg::Delta,
                FamilyOpt::All => FamilyArg::All,
            };
            let name = format!("sing --d {d} --family {}", format!("{family:?}").to_lowercase());
            (name, checks::sing(*d, f)?)
        }
        Command::Aj { oracle } => {
            (if *oracle { "aj --oracle".into() } else { "aj".into() }, checks::aj(*oracle))
        }
        Command::Pairing { seed, l_value, zero_tails } => {
            let l = l_value.unwrap_or_else(checks::default_l);
            let seed = if *zero_tails { None } else { Some(*seed) };
            let name = match seed {
                Some(s) => format!("pairing --seed {s} --L {l}"),
                None => format!("pairing --zero-tails --L {l}"),
            };
            (name, checks::pairing(seed, l)?)
        }
        Command::VerifyAll => ("verify-all".into(), run_groups(checks::verify_all_groups(), cli.jobs as usize)),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (command, checks) = match build(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut report = Report::new(command, checks);
    report.round_floats(cli.digits as usize);
    if !cli.no_timing {
        report.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    let text = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Md => report.to_markdown(),
    };
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(report.exit_code() as u8)
}
