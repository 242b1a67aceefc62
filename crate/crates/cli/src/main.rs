use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use kzh_cli::{read_raw, run, CliError, Command, Job, Overrides};

#[derive(Parser, Debug)]
#[command(name = "kzh", version, about = "Exact checks for KZ and Gauss-Manin connections on Chevalley chains")]
struct Args {
    /// verify | report | solve | oracle
    verb: String,
    /// cocycle, eta, flatness, dual-kz, homology, aomoto, e1, kz, dims
    noun: String,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// `formal` or a rational p/q
    #[arg(long)]
    kappa: Option<String>,
    /// Write the JSON report here and print a summary instead.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Include wall-clock time in the report (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

fn execute(args: &Args) -> Result<bool, CliError> {
    let cmd = Command::parse(&args.verb, &args.noun).ok_or_else(|| {
        let known: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
        CliError::config("command", format!("unknown command `{} {}`; known: {}", args.verb, args.noun, known.join(", ")))
    })?;
    let raw = read_raw(args.config.as_deref())?;
    let ov = Overrides { seed: args.seed, trials: args.trials, kappa: args.kappa.clone() };
    let job = Job::from_raw(&raw, &ov)?;
    let start = Instant::now();
    let mut rep = run(cmd, &job)?;
    if args.timing {
        rep.timing_ms = Some(start.elapsed().as_millis());
    }
    match &args.json {
        Some(path) => {
            std::fs::write(path, rep.render()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            print!("{}", rep.summary());
        }
        None => print!("{}", rep.render()),
    }
    Ok(rep.passed())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("kzh: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
