use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isac_mab::bandit::PolicyKind;
use isac_mab::harness::{dump_profiles, run_to_dir, ScenarioConfig, ScenarioKind};

/// Environment variable holding the worker-thread count.
const WORKERS_ENV: &str = "ISAC_MAB_WORKERS";

#[derive(Parser)]
#[command(name = "isac-mab", version, about = "Radar-assisted bandit beam alignment simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Monte Carlo sweep and write slots.csv and summary.csv.
    Run {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Parse and check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write range profiles and MUSIC pseudo-spectra of one radar scan.
    DumpProfiles {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        trial: usize,
        #[arg(long, default_value_t = 0)]
        slot: u64,
        #[arg(long, default_value = "profiles")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunOpts {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_scenario)]
    scenario: Option<ScenarioKind>,
    /// Repeat or comma-separate to run several policies.
    #[arg(long, value_delimiter = ',', value_parser = parse_policy)]
    policy: Vec<PolicyKind>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn parse_scenario(s: &str) -> Result<ScenarioKind, String> {
    match s {
        "stationary_radial" => Ok(ScenarioKind::StationaryRadial),
        "quasi_lateral" => Ok(ScenarioKind::QuasiLateral),
        "custom" => Ok(ScenarioKind::Custom),
        _ => Err(format!("unknown scenario `{s}`")),
    }
}

fn parse_policy(s: &str) -> Result<PolicyKind, String> {
    PolicyKind::parse(s).map_err(|e| e.to_string())
}

fn load(path: Option<&PathBuf>) -> Result<ScenarioConfig, String> {
    match path {
        Some(p) => ScenarioConfig::load(p).map_err(|e| e.to_string()),
        None => Ok(ScenarioConfig::default()),
    }
}

fn init_pool() -> Result<(), String> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<(), String> {
    init_pool()?;
    match cli.command {
        Command::Run { opts } => {
            let mut cfg = load(opts.config.as_ref())?;
            if let Some(s) = opts.scenario {
                cfg.scenario = s;
            }
            if !opts.policy.is_empty() {
                cfg.policies = opts.policy;
            }
            if let Some(t) = opts.trials {
                cfg.trials = t;
            }
            if let Some(s) = opts.seed {
                cfg.seed = s;
            }
            let trace = run_to_dir(&cfg, &opts.out).map_err(|e| e.to_string())?;
            for p in &cfg.policies {
                if let Some(tp) = trace.mean_throughput(*p) {
                    println!("{:<9} {:>8.3} Mbps", p.name(), tp / 1e6);
                }
            }
            println!("wrote {}", opts.out.display());
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = ScenarioConfig::load(&config).map_err(|e| e.to_string())?;
            cfg.validate().map_err(|e| e.to_string())?;
            println!("{}: ok", config.display());
            Ok(())
        }
        Command::DumpProfiles {
            config,
            trial,
            slot,
            out,
        } => {
            let cfg = load(config.as_ref())?;
            dump_profiles(&cfg, trial, slot, &out).map_err(|e| e.to_string())?;
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("isac-mab: {e}");
            ExitCode::FAILURE
        }
    }
}
