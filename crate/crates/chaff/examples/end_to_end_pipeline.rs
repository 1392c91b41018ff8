//! The full seven-command pipeline over a generated corpus.
//!
//! Equivalent to running the `chaff` binary seven times against one
//! config; here the commands are called as library functions and their
//! manifest counts are printed.
//!
//! Run with: `cargo run -p chaff --example end_to_end_pipeline`

use chaff::cli::{
    cmd_characterize, cmd_diff, cmd_evaluate, cmd_features, cmd_ingest, cmd_predict, cmd_train,
    config_for_corpus, RunConfig,
};
use chaff::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let corpus = generate(
        &dir.path().join("fixture"),
        &SynthConfig {
            questions: 800,
            deleted_fraction: 0.35,
            seed: 11,
        },
    )?;
    let config = config_for_corpus(&corpus, &dir.path().join("out"), 11);
    std::fs::create_dir_all(&config.out_dir)?;

    type Step = (&'static str, fn(&RunConfig) -> Result<chaff::cli::Manifest, chaff::cli::CliError>);
    let steps: [Step; 7] = [
        ("ingest", cmd_ingest),
        ("diff", cmd_diff),
        ("characterize", cmd_characterize),
        ("features", cmd_features),
        ("train", cmd_train),
        ("evaluate", cmd_evaluate),
        ("predict", cmd_predict),
    ];
    for (name, step) in steps {
        let started = std::time::Instant::now();
        let manifest = step(&config).map_err(|e| anyhow::anyhow!("{name}: {e}"))?;
        println!("{name} ({:.0?})", started.elapsed());
        for (key, value) in &manifest.counts {
            println!("    {key}: {value}");
        }
    }

    println!("\noutputs under {}:", config.out_dir.display());
    for path in [
        config.corpus_file(),
        config.features_file(),
        config.model_file(),
        config.evaluation_dir().join("tiers.csv"),
        config.predictions_file(),
    ] {
        println!("  {}", path.strip_prefix(&config.out_dir)?.display());
    }

    let tiers = std::fs::read_to_string(config.evaluation_dir().join("tiers.csv"))?;
    println!("\ntiers.csv:\n{tiers}");
    Ok(())
}
