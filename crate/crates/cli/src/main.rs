use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cmf_cli::{
    curve_from_csv, curve_to_csv, estimate_diversity, figure_presets, parse_config, run_suite,
    run_sweep,
};

#[derive(Parser)]
#[command(
    name = "cmfsim",
    about = "Monte Carlo simulator for compute-and-forward relaying over multi-user multi-relay networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one sweep described by a flat key=value config file.
    Sweep {
        /// Path to the config file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a named experiment bundle (fig2..fig9, table1), one CSV per curve.
    Preset {
        /// Preset name.
        #[arg(long)]
        name: String,
        /// Override the per-point trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for the output CSV files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Estimate the diversity order (high-SNR outage slope) from a curve CSV.
    Diversity {
        /// Curve CSV produced by `sweep` or `preset`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a self-check suite: oracles, lemma, or analytic.
    Validate {
        /// Suite name.
        #[arg(long)]
        suite: String,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Sweep { config } => cmd_sweep(&config),
        Command::Preset {
            name,
            trials,
            seed,
            out_dir,
            workers,
        } => cmd_preset(&name, trials, seed, &out_dir, workers),
        Command::Diversity { input } => cmd_diversity(&input),
        Command::Validate { suite } => cmd_validate(&suite),
    };
    ExitCode::from(code)
}

fn cmd_sweep(config_path: &PathBuf) -> u8 {
    let text = match std::fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", config_path.display());
            return EXIT_CONFIG;
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    match run_sweep(&cfg) {
        Ok(curve) => {
            print!("{}", curve_to_csv(&curve));
            if let Some(path) = &cfg.output_path {
                eprintln!("curve written to {}", path.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("sweep failed: {e}");
            EXIT_FAILURE
        }
    }
}

fn cmd_preset(
    name: &str,
    trials: Option<u64>,
    seed: Option<u64>,
    out_dir: &PathBuf,
    workers: usize,
) -> u8 {
    let preset = match figure_presets(name) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        eprintln!("cannot create {}: {e}", out_dir.display());
        return EXIT_FAILURE;
    }
    for labeled in preset.sweeps {
        let mut cfg = labeled.config;
        if let Some(t) = trials {
            cfg.trials_per_point = t;
        }
        if let Some(s) = seed {
            cfg.master_seed = s;
        }
        cfg.workers = workers;
        cfg.output_path = Some(out_dir.join(format!("{}_{}.csv", preset.name, labeled.label)));
        eprintln!(
            "running {}/{} ({} trials x {} SNR points)",
            preset.name,
            labeled.label,
            cfg.trials_per_point,
            cfg.snr_db_grid.len()
        );
        match run_sweep(&cfg) {
            Ok(_) => {
                eprintln!("  -> {}", cfg.output_path.as_ref().unwrap().display());
            }
            Err(e) => {
                eprintln!("preset sweep {} failed: {e}", labeled.label);
                return EXIT_FAILURE;
            }
        }
    }
    EXIT_OK
}

fn cmd_diversity(input: &PathBuf) -> u8 {
    let text = match std::fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", input.display());
            return EXIT_CONFIG;
        }
    };
    let curve = match curve_from_csv(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    match estimate_diversity(&curve) {
        Ok(est) => {
            println!(
                "diversity order: {:.3} +- {:.3} (over {} highest resolvable SNR points)",
                est.d_hat, est.ci, est.points_used
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_FAILURE
        }
    }
}

fn cmd_validate(suite: &str) -> u8 {
    match run_suite(suite) {
        Ok(report) => {
            print!("{}", report.render());
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
    }
}
