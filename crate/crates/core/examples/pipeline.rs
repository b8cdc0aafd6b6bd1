//! Generate a synthetic corpus and run every stage on it, as the
//! `netdomain all` command would.
//!
//! cargo run --release --example pipeline [-- <dir>]

use std::fs;
use std::path::PathBuf;

use netdomain::pipeline::{Outcome, Overrides, Pipeline, PipelineConfig};
use netdomain::synthetic::{write_corpus, CorpusSpec};

fn main() -> netdomain::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("netdomain-example"));
    let spec = CorpusSpec { per_family: 20, min_nodes: 30, max_nodes: 80, ..CorpusSpec::default() };
    write_corpus(&dir.join("corpus"), &spec, 1)?;
    let config = dir.join("netdomain.toml");
    fs::write(
        &config,
        "manifest = \"corpus/manifest.csv\"\noutput = \"out\"\nseed = 7\n\
         [forest]\nn_trees = 30\n[cv]\nrepeats = 1\n[selection]\ntop_k = 6\n",
    )
    .unwrap();

    let pipeline = Pipeline::new(PipelineConfig::load(&config, Overrides::default())?)?;
    for run in pipeline.run_all()? {
        let status = if run.outcome == Outcome::Ran { "done" } else { "up to date" };
        println!("{}: {status}", run.artifact.stage);
    }
    let summary = pipeline.report_dir().join("summary.txt");
    println!("\n{}", fs::read_to_string(&summary).unwrap());
    println!("bundle in {}", pipeline.report_dir().display());
    Ok(())
}
