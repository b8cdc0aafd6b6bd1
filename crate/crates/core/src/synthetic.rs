//! Seeded fixture generators: graph families for end-to-end corpora and a
//! tabular XOR task.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Tree,
    Grid,
    Community,
    ChordRing,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Tree, Family::Grid, Family::Community, Family::ChordRing];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tree => "tree",
            Family::Grid => "grid",
            Family::Community => "community",
            Family::ChordRing => "ring",
        }
    }

    /// A connected graph from this family with roughly `n` nodes.
    pub fn generate(self, n: usize, rng: &mut ChaCha8Rng) -> Graph {
        match self {
            Family::Tree => random_tree(n, rng),
            Family::Grid => grid_near(n, rng),
            Family::Community => community_graph(n, rng),
            Family::ChordRing => chord_ring(n, rng),
        }
    }
}

/// Uniform random recursive tree: node `v` attaches to a uniform earlier node.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let edges: Vec<(u32, u32)> = (1..n).map(|v| (rng.random_range(0..v) as u32, v as u32)).collect();
    Graph::from_edges(n, &edges)
}

pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| (r * cols + c) as u32;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges)
}

fn grid_near(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let max_rows = ((n as f64).sqrt() as usize).max(2);
    let rows = rng.random_range(2.max(max_rows / 2)..=max_rows);
    grid(rows, (n / rows).max(2))
}

/// Planted partition with communities of 10 to 20 nodes, dense inside and
/// sparse between; extra links make it connected.
pub fn community_graph(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut community = Vec::with_capacity(n);
    let mut c = 0;
    while community.len() < n {
        let size = rng.random_range(10..=20).min(n - community.len());
        community.extend(std::iter::repeat_n(c, size));
        c += 1;
    }
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if community[u] == community[v] { 0.6 } else { 0.02 };
            if rng.random::<f64>() < p {
                edges.insert((u as u32, v as u32));
            }
        }
    }
    connect(n, edges, rng)
}

/// Cycle plus about `n / 8` random chords.
pub fn chord_ring(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges: BTreeSet<(u32, u32)> = (0..n).map(|v| ordered(v, (v + 1) % n)).collect();
    let chords = (n / 8).max(1);
    while edges.len() < n + chords {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.insert(ordered(u, v));
        }
    }
    Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>())
}

fn ordered(u: usize, v: usize) -> (u32, u32) {
    (u.min(v) as u32, u.max(v) as u32)
}

/// Joins components by linking a random node of each to a random node of
/// the first.
fn connect(n: usize, mut edges: BTreeSet<(u32, u32)>, rng: &mut ChaCha8Rng) -> Graph {
    let g = Graph::from_edges(n, &edges.iter().copied().collect::<Vec<_>>());
    let (comp, count) = g.components();
    if count > 1 {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            members[c].push(v);
        }
        for c in 1..count {
            let u = *members[0].choose(rng).expect("non-empty component");
            let v = *members[c].choose(rng).expect("non-empty component");
            edges.insert(ordered(u, v));
        }
    }
    Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>())
}

#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub families: Vec<Family>,
    pub per_family: usize,
    pub min_nodes: usize,
    pub max_nodes: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            families: Family::ALL.to_vec(),
            per_family: 30,
            min_nodes: 40,
            max_nodes: 200,
        }
    }
}

/// Writes one edge-list file per graph under `dir/graphs/` and a manifest
/// `dir/manifest.csv`; returns the manifest path.
pub fn write_corpus(dir: &Path, spec: &CorpusSpec, seed: u64) -> Result<PathBuf> {
    let graphs = dir.join("graphs");
    fs::create_dir_all(&graphs).map_err(|e| Error::io(&graphs, e))?;
    let manifest = dir.join("manifest.csv");
    let mut out = csv::Writer::from_path(&manifest)?;
    out.write_record(["network_id", "path", "domain", "project_onto"])?;
    for &family in &spec.families {
        for i in 0..spec.per_family {
            let mut rng = seed::rng(seed, &[family as u64, i as u64]);
            let n = rng.random_range(spec.min_nodes..=spec.max_nodes);
            let g = family.generate(n, &mut rng);
            let id = format!("{}-{i:03}", family.name());
            let rel = format!("graphs/{id}.txt");
            let path = dir.join(&rel);
            fs::write(&path, g.to_edge_list()).map_err(|e| Error::io(&path, e))?;
            out.write_record([id.as_str(), rel.as_str(), family.name(), ""])?;
        }
    }
    out.flush().map_err(|e| Error::io(&manifest, e))?;
    Ok(manifest)
}

/// Two binary features labelled by their XOR.
#[derive(Clone, Debug)]
pub struct XorFixture {
    pub feature_ids: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub labels: Vec<bool>,
}

/// 75 rows in each negative quadrant (0, 0) and (1, 1), 25 in each
/// positive quadrant (0, 1) and (1, 0), in seeded order. Each feature alone
/// carries no information about the label.
pub fn xor_fixture(seed: u64) -> XorFixture {
    let mut rng = seed::rng(seed, &[]);
    let quadrants = [(0.0, 0.0, 75), (1.0, 1.0, 75), (0.0, 1.0, 25), (1.0, 0.0, 25)];
    let mut rows = Vec::new();
    for (x, y, count) in quadrants {
        rows.extend(std::iter::repeat_n((x, y, x != y), count));
    }
    rows.shuffle(&mut rng);
    XorFixture {
        feature_ids: vec!["x".into(), "y".into()],
        columns: vec![rows.iter().map(|r| r.0).collect(), rows.iter().map(|r| r.1).collect()],
        labels: rows.iter().map(|r| r.2).collect(),
    }
}
