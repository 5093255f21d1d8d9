use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nc_causal::experiment::{
    parse_config, run, seed_override, ConfigError, Experiment, ExperimentConfig, RunError,
    SeedSource, SEED_ENV,
};

#[derive(Parser)]
#[command(name = "nc-causal", version, about = "Noncommutative causal order experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON config; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Causal-cone panel of the future-set figure.
    Fig1Cone(Common),
    /// Isocone panel of the future-set figure.
    Fig1Isocone(Common),
    /// Connes distance on M2(C) pure states.
    ConnesDist(Common),
    /// Causal cone condition on sampled matrix fields.
    ConeCheck(Common),
    /// Lexicographic isocone order consistency.
    LexOrder(Common),
    /// Lambda-deformed order on the Penrose square.
    LambdaOrder(Common),
    /// Saturation sampling on lexicographic isocones.
    Saturate(Common),
}

impl Command {
    fn split(self) -> (Experiment, Common) {
        match self {
            Command::Fig1Cone(c) => (Experiment::Fig1Cone, c),
            Command::Fig1Isocone(c) => (Experiment::Fig1Isocone, c),
            Command::ConnesDist(c) => (Experiment::ConnesDist, c),
            Command::ConeCheck(c) => (Experiment::ConeCheck, c),
            Command::LexOrder(c) => (Experiment::LexOrder, c),
            Command::LambdaOrder(c) => (Experiment::LambdaOrder, c),
            Command::Saturate(c) => (Experiment::Saturate, c),
        }
    }
}

fn load(common: &Common) -> Result<(ExperimentConfig, SeedSource), RunError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
                field: String::new(),
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            parse_config(&text)?
        }
        None => ExperimentConfig::default(),
    };
    let env = std::env::var(SEED_ENV).ok();
    let source = match seed_override(env.as_deref())? {
        Some(seed) => {
            cfg.seed = seed;
            SeedSource::Environment
        }
        None => SeedSource::Config,
    };
    Ok((cfg, source))
}

fn main() -> ExitCode {
    let (experiment, common) = Cli::parse().command.split();
    let result = load(&common).and_then(|(cfg, source)| run(experiment, &cfg, source, &common.out));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("nc-causal: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
