//! Command-line front end for the experiment registry.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use opnum_lab::experiments::{registry, run, ExperimentConfig, Formats};

#[derive(Parser)]
#[command(
    name = "opnum-lab",
    version,
    about = "Numerical laboratory for composition operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from the registry.
    Run {
        /// Experiment identifier (see `opnum-lab list`).
        id: String,
        /// Parameter overrides, repeatable: --param key=value
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Output directory.
        #[arg(long = "out", default_value = "out")]
        out: PathBuf,
        /// Comma-separated output formats (csv,json).
        #[arg(long = "format", default_value = "csv,json")]
        format: String,
        /// Cap on one-variable truncations.
        #[arg(long = "n-max", default_value_t = 4096)]
        n_max: usize,
        /// Cap on the direct 2-D total degree.
        #[arg(long = "d-max", default_value_t = 40)]
        d_max: usize,
        /// Cap on triangular block counts.
        #[arg(long = "k-max", default_value_t = 128)]
        k_max: usize,
    },
    /// List the experiment registry.
    List,
}

fn thread_pool_from_env() {
    if let Ok(value) = std::env::var("OPNUM_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    thread_pool_from_env();
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for def in registry() {
                println!("{:<20} {}", def.id, def.description);
                let params: Vec<String> =
                    def.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{:<20}   params: {}", "", params.join(" "));
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            id,
            params,
            out,
            format,
            n_max,
            d_max,
            k_max,
        } => {
            let mut config = ExperimentConfig::new(&id, out);
            config.caps.n_max = n_max;
            config.caps.d_max = d_max;
            config.caps.k_max = k_max;
            config.formats = Formats {
                csv: format.split(',').any(|f| f.trim() == "csv"),
                json: format.split(',').any(|f| f.trim() == "json"),
            };
            for p in params {
                let Some((key, value)) = p.split_once('=') else {
                    eprintln!("{}", error_report(&id, "parameters must be key=value"));
                    return ExitCode::FAILURE;
                };
                config.params.insert(key.to_string(), value.to_string());
            }
            match run(&config) {
                Ok(report) => {
                    println!("wrote {}", report.manifest_path.display());
                    ExitCode::SUCCESS
                }
                Err(err) => {
                    eprintln!("{}", error_report(&id, &err.to_string()));
                    ExitCode::FAILURE
                }
            }
        }
    }
}

fn error_report(id: &str, message: &str) -> String {
    serde_json::json!({
        "experiment": id,
        "error": message,
    })
    .to_string()
}
