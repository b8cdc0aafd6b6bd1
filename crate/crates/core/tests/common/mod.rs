#![allow(dead_code)]

pub mod oracle;

use std::fs;
use std::path::{Path, PathBuf};

use netdomain::pipeline::{Overrides, PipelineConfig};
use netdomain::synthetic::{write_corpus, CorpusSpec, Family};

/// Writes a synthetic corpus plus a config into `dir` and returns the
/// config path.
pub fn small_project(dir: &Path, per_family: usize, extra: &str) -> PathBuf {
    let spec = CorpusSpec {
        families: Family::ALL.to_vec(),
        per_family,
        min_nodes: 30,
        max_nodes: 60,
    };
    write_corpus(&dir.join("corpus"), &spec, 11).unwrap();
    let config = dir.join("netdomain.toml");
    let text = format!(
        "manifest = \"corpus/manifest.csv\"\noutput = \"out\"\nseed = 7\n{extra}\n\
         [forest]\nn_trees = 15\n[cv]\nfolds = 3\nrepeats = 1\n[selection]\ntop_k = 5\n"
    );
    fs::write(&config, text).unwrap();
    config
}

pub fn load(config: &Path, overrides: Overrides) -> PipelineConfig {
    PipelineConfig::load(config, overrides).unwrap()
}

/// Relative path → bytes for every file under `dir`.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(dir: &Path, base: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        for e in fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(&p, base, out);
            } else {
                let rel = p.strip_prefix(base).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out.sort();
    out
}
