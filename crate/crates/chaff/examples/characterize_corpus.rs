//! Characterize a synthetic corpus end to end and peek at the tables.
//!
//! Generates a three-snapshot fixture with known ground truth, runs
//! ingest + diff + characterize, and prints excerpts of the report files.
//!
//! Run with: `cargo run -p chaff --example characterize_corpus`

use chaff::cli::{cmd_characterize, cmd_diff, cmd_ingest, config_for_corpus};
use chaff::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let corpus = generate(
        &dir.path().join("fixture"),
        &SynthConfig {
            questions: 600,
            deleted_fraction: 0.35,
            seed: 21,
        },
    )?;
    println!(
        "generated {} questions over {} snapshots ({} deleted)",
        corpus.questions.len(),
        corpus.snapshots.len(),
        corpus.deleted_ids().len()
    );

    let config = config_for_corpus(&corpus, &dir.path().join("out"), 21);
    std::fs::create_dir_all(&config.out_dir)?;
    cmd_ingest(&config).map_err(|e| anyhow::anyhow!(e.to_string()))?;
    cmd_diff(&config).map_err(|e| anyhow::anyhow!(e.to_string()))?;
    cmd_characterize(&config).map_err(|e| anyhow::anyhow!(e.to_string()))?;

    let reports = config.reports_dir();
    println!("\nreport files in {}:", reports.display());
    let mut names: Vec<String> = std::fs::read_dir(&reports)?
        .map(|entry| entry.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in &names {
        println!("  {name}");
    }

    for (file, take) in [
        ("fig3_monthly_ratio.csv", 6),
        ("table6_vote_histogram.csv", 6),
        ("fig7_initiator.csv", 4),
        ("fig9_quality.csv", 11),
        ("fig10_tag_regions.csv", 8),
    ] {
        println!("\n==> {file}");
        let content = std::fs::read_to_string(reports.join(file))?;
        for line in content.lines().take(take) {
            println!("{line}");
        }
    }
    Ok(())
}
