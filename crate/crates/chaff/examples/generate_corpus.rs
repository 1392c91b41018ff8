//! Generate a synthetic snapshot corpus into a directory of your choice,
//! with a ready-to-run config file for the `chaff` binary.
//!
//! Run with: `cargo run -p chaff --example generate_corpus -- /tmp/chaff-demo`

use std::fmt::Write as _;

use chaff::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let target = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "chaff-demo".to_string());
    let dir = std::path::PathBuf::from(target);
    std::fs::create_dir_all(&dir)?;

    let corpus = generate(
        &dir.join("fixture"),
        &SynthConfig {
            questions: 2000,
            deleted_fraction: 0.35,
            seed: 7,
        },
    )?;

    // A config whose relative paths resolve against its own directory.
    let mut config = String::new();
    writeln!(config, "out_dir = \"out\"")?;
    writeln!(config, "seed = 7")?;
    writeln!(config, "exclusions = \"fixture/exclusions.csv\"")?;
    writeln!(config, "initiators = \"fixture/initiators.csv\"")?;
    writeln!(config, "lexicon = \"fixture/lexicon.dic\"")?;
    for (id, date, snap_dir) in &corpus.snapshots {
        let rel = snap_dir.strip_prefix(&dir).unwrap_or(snap_dir);
        writeln!(config)?;
        writeln!(config, "[[snapshots]]")?;
        writeln!(config, "id = \"{id}\"")?;
        writeln!(config, "date = \"{date}\"")?;
        writeln!(config, "dir = \"{}\"", rel.display())?;
    }
    let config_path = dir.join("run.toml");
    std::fs::write(&config_path, config)?;

    println!(
        "wrote {} questions ({} deleted) under {}",
        corpus.questions.len(),
        corpus.deleted_ids().len(),
        dir.display()
    );
    println!("\nnext, run the pipeline:");
    for step in ["ingest", "diff", "characterize", "features", "train", "evaluate", "predict"] {
        println!("  chaff {step} --config {}", config_path.display());
    }
    Ok(())
}
