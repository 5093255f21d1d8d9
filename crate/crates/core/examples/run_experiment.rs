//! Runs an experiment through the library API and lists the files it writes.

use nc_causal::experiment::{parse_config, run, Experiment, SeedSource};

fn main() {
    let cfg = parse_config(r#"{"resolution": 32, "lambda": 0.25}"#).expect("valid config");
    let out = std::env::temp_dir().join("nc-causal-example");
    match run(Experiment::Fig1Isocone, &cfg, SeedSource::Config, &out) {
        Ok(files) => files.iter().for_each(|f| println!("{}", f.display())),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
