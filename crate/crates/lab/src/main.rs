use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use brlab::config::ExperimentConfig;
use brlab::experiments::run;
use brlab::LabError;
use clap::Parser;

/// Runs one experiment described by a `key = value` config file.
///
/// Exit status: 0 when every check passes, 1 on a violated verdict or failed
/// invariant, 2 on a usage, config or I/O error.
#[derive(Debug, Parser)]
#[command(name = "brlab", version)]
struct Cli {
    /// Experiment config file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for the parallel loops.
    #[arg(long, value_name = "K")]
    threads: Option<usize>,
    /// First seed; overrides `seed` in the config.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Also write the sampled grid functions as BRGF files.
    #[arg(long)]
    dump_fields: bool,
}

fn setup(cli: &Cli) -> Result<ExperimentConfig, LabError> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(LabError::InvalidConfig("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| LabError::InvalidConfig(format!("thread pool: {e}")))?;
    }
    let text = fs::read_to_string(&cli.config)?;
    let mut config = ExperimentConfig::parse(&text)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    // surface parameter errors before any computation starts
    if config.effective_delta().is_some() {
        config.spec()?;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match setup(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("brlab: {e}");
            return ExitCode::from(2);
        }
    };
    let out = cli.out.clone().or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from("brlab-out"));
    match run(&config, &out, cli.dump_fields) {
        Ok(summary) => {
            print!("{}", summary.table());
            println!("status: {:?} (artifacts in {})", summary.status, out.display());
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("brlab: {e}");
            let code = match e {
                LabError::Io(_)
                | LabError::Csv(_)
                | LabError::Json(_)
                | LabError::Format(_)
                | LabError::Config { .. }
                | LabError::InvalidConfig(_) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
