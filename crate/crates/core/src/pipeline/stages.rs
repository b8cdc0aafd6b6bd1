use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::store::{self, write_csv};
use super::{read_manifest, Pipeline, Stage};
use crate::correlation::{filter_domain, Removal};
use crate::dataset::{apply_policies, format_float, undersample, Exclusions, FeatureMatrix, OTHER_DOMAIN};
use crate::error::{Error, Result};
use crate::forest::fit_forest;
use crate::graph::{canonicalize, parse_edge_list, CanonicalizeOptions, Graph};
use crate::pca::pca_embed;
use crate::seed;
use crate::selection::{select_domain, SelectionReport};

pub(super) const NETWORKS: &str = "networks.csv";
pub(super) const FEATURES: &str = "features.csv";
pub(super) const MATRIX: &str = "matrix.csv";
pub(super) const EXCLUSIONS: &str = "exclusions.json";
pub(super) const AUDIT: &str = "audit.csv";
pub(super) const FILTER: &str = "filter.json";
pub(super) const SELECTION: &str = "selection.json";

#[derive(Clone, Debug, Deserialize)]
struct NetworkRow {
    network_id: String,
    domain: String,
    file: String,
    nodes: usize,
}

fn read_networks(dir: &Path) -> Result<Vec<NetworkRow>> {
    let path = dir.join(NETWORKS);
    let mut rdr = csv::Reader::from_path(&path)?;
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Canonical graphs are stored as internal-id edge lists; the node count
/// lives in `networks.csv`.
fn read_canonical(path: &Path, nodes: usize) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace().map(str::parse::<u32>);
        match (it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v))) if (u as usize) < nodes && (v as usize) < nodes => edges.push((u, v)),
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("bad canonical edge in {}", path.display()),
                })
            }
        }
    }
    Ok(Graph::from_edges(nodes, &edges))
}

pub(super) fn ingest(p: &Pipeline, out: &Path) -> Result<()> {
    let entries = read_manifest(&p.config().manifest)?;
    let auto_project = p.config().auto_project;
    let results: Vec<Result<_>> = entries
        .par_iter()
        .map(|e| {
            let file = File::open(&e.path).map_err(|err| Error::io(&e.path, err))?;
            let raw = parse_edge_list(BufReader::new(file))?;
            canonicalize(
                &raw,
                CanonicalizeOptions {
                    project: e.project_onto,
                    auto_project,
                },
            )
        })
        .collect();
    let graphs_dir = out.join("graphs");
    fs::create_dir_all(&graphs_dir).map_err(|e| Error::io(&graphs_dir, e))?;
    let mut networks = Vec::new();
    let mut failed = Vec::new();
    for (i, (entry, result)) in entries.iter().zip(results).enumerate() {
        match result {
            Ok(c) => {
                let file = format!("graphs/{i:06}.txt");
                let mut text = String::new();
                for (u, v) in c.graph.edges() {
                    text.push_str(&format!("{u} {v}\n"));
                }
                store::write(&out.join(&file), text.as_bytes())?;
                networks.push([
                    entry.network_id.clone(),
                    entry.domain.clone(),
                    file,
                    c.graph.node_count().to_string(),
                    c.graph.edge_count().to_string(),
                    c.projected.map(|s| s.to_string()).unwrap_or_default(),
                ]);
            }
            Err(e) => failed.push([entry.network_id.clone(), entry.domain.clone(), e.to_string()]),
        }
    }
    if networks.is_empty() {
        return Err(Error::Empty("no network in the manifest could be ingested".into()));
    }
    write_csv(
        &out.join(NETWORKS),
        &["network_id", "domain", "file", "nodes", "edges", "projected_onto"],
        networks,
    )?;
    write_csv(&out.join("failed.csv"), &["network_id", "domain", "error"], failed)
}

pub(super) fn measure(p: &Pipeline, out: &Path) -> Result<()> {
    let ingest_dir = p.stage_dir(Stage::Ingest);
    let networks = read_networks(&ingest_dir)?;
    let registry = p.registry();
    let base_seed = p.config().seed_for("measure");
    let budgets = p.config().budgets;
    let vectors = networks
        .par_iter()
        .map(|n| {
            let g = read_canonical(&ingest_dir.join(&n.file), n.nodes)?;
            let s = seed::derive(base_seed, &[seed::key(&n.network_id)]);
            Ok(registry.compute_feature_vector(&g, &budgets, s))
        })
        .collect::<Result<Vec<_>>>()?;
    let catalog: Vec<String> = registry.catalog().iter().map(|m| m.id.clone()).collect();
    let mut status = Vec::new();
    for (n, v) in networks.iter().zip(&vectors) {
        for (id, m) in catalog.iter().zip(&v.measures) {
            status.push([
                n.network_id.clone(),
                id.clone(),
                m.missing.map_or_else(|| "ok".to_owned(), |h| h.to_string()),
                m.sampled.to_string(),
            ]);
        }
    }
    write_csv(&out.join("status.csv"), &["network_id", "measure", "status", "sampled"], status)?;
    let matrix = FeatureMatrix::new(
        networks.iter().map(|n| n.network_id.clone()).collect(),
        networks.iter().map(|n| n.domain.clone()).collect(),
        registry.feature_columns(),
        vectors.into_iter().map(|v| v.values).collect(),
    )?;
    let path = out.join(FEATURES);
    matrix.write_csv(File::create(&path).map_err(|e| Error::io(&path, e))?)
}

pub(super) fn read_matrix(path: &Path) -> Result<FeatureMatrix> {
    FeatureMatrix::read_csv(File::open(path).map_err(|e| Error::io(path, e))?)
}

/// Domains that get a One-vs-Rest task: every final domain but the merged
/// remainder.
pub(super) fn targets(matrix: &FeatureMatrix) -> Vec<String> {
    matrix
        .domain_rows()
        .into_keys()
        .filter(|d| d != OTHER_DOMAIN)
        .collect()
}

pub(super) fn assemble(p: &Pipeline, out: &Path) -> Result<()> {
    let raw = read_matrix(&p.stage_dir(Stage::Measure).join(FEATURES))?;
    let clean = apply_policies(&raw, &p.config().policy())?;
    let m = &clean.matrix;
    if targets(m).is_empty() {
        return Err(Error::PolicyEmpty("small-domain".into()));
    }
    let path = out.join(MATRIX);
    m.write_csv(File::create(&path).map_err(|e| Error::io(&path, e))?)?;
    let imputed: Vec<[String; 2]> = m
        .imputed_cells()
        .into_iter()
        .map(|(r, c)| [m.network_ids()[r].clone(), m.feature_ids()[c].clone()])
        .collect();
    write_csv(&out.join("imputed.csv"), &["network_id", "feature"], imputed)?;
    store::write_json(&out.join(EXCLUSIONS), &clean.exclusions)?;
    let audit = clean.audit.iter().map(|a| {
        [
            a.rule.to_string(),
            a.network.clone().unwrap_or_default(),
            a.feature.clone().unwrap_or_default(),
            a.domain.clone().unwrap_or_default(),
            a.detail.clone(),
        ]
    });
    write_csv(&out.join(AUDIT), &["rule", "network_id", "feature", "domain", "detail"], audit)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainFilter {
    /// Features the policies left usable for the domain.
    pub candidates: Vec<String>,
    pub retained: Vec<String>,
    pub removed: Vec<Removal>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FilterOutput {
    pub domains: BTreeMap<String, DomainFilter>,
    /// Domain → reason it has no task.
    pub skipped: BTreeMap<String, String>,
}

pub(super) fn filter(p: &Pipeline, out: &Path) -> Result<()> {
    let dir = p.stage_dir(Stage::Assemble);
    let m = read_matrix(&dir.join(MATRIX))?;
    let exclusions: Exclusions = store::read_json(&dir.join(EXCLUSIONS))?;
    let rows_by_domain = m.domain_rows();
    let threshold = p.config().selection.correlation_threshold;
    let results: Vec<(String, Result<DomainFilter>)> = targets(&m)
        .into_par_iter()
        .map(|d| {
            let candidates = exclusions.candidates(&m, &d);
            let r = filter_domain(&m, &d, &rows_by_domain[&d], &candidates, threshold).map(|f| DomainFilter {
                candidates: candidates.iter().map(|&c| m.feature_ids()[c].clone()).collect(),
                retained: f.retained,
                removed: f.removed,
            });
            (d, r)
        })
        .collect();
    let mut output = FilterOutput::default();
    for (d, r) in results {
        match r {
            Ok(f) => {
                output.domains.insert(d, f);
            }
            Err(e @ (Error::Empty(_) | Error::InvalidArgument(_))) => {
                output.skipped.insert(d, e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    store::write_json(&out.join(FILTER), &output)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSelection {
    pub full: SelectionReport,
    /// Same wrapper on the undersampled corpus, when a cap is configured.
    pub undersampled: Option<SelectionReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SelectOutput {
    pub domains: BTreeMap<String, DomainSelection>,
    pub skipped: BTreeMap<String, String>,
}

fn indices(m: &FeatureMatrix, ids: &[String]) -> Result<Vec<usize>> {
    ids.iter()
        .map(|id| m.feature_index(id).ok_or_else(|| Error::UnknownFeature(id.clone())))
        .collect()
}

pub(super) fn select(p: &Pipeline, out: &Path) -> Result<()> {
    let c = p.config();
    let m = read_matrix(&p.stage_dir(Stage::Assemble).join(MATRIX))?;
    let filtered: FilterOutput = store::read_json(&p.stage_dir(Stage::Filter).join(FILTER))?;
    let all_rows: Vec<usize> = (0..m.rows()).collect();
    let capped_rows = c
        .undersample_cap
        .map(|cap| undersample(m.domains(), cap, c.seed_for("undersample")));
    let (cv, forest, options) = (c.cv(), c.forest.clone(), c.selection_options());
    let results: Vec<(String, Result<(DomainSelection, serde_json::Value)>)> = filtered
        .domains
        .par_iter()
        .map(|(d, f)| {
            let run = || -> Result<(DomainSelection, serde_json::Value)> {
                let retained = indices(&m, &f.retained)?;
                let pool = indices(&m, &f.candidates)?;
                let full = select_domain(&m, d, &all_rows, &retained, &pool, cv, forest.clone(), &options)?;
                let undersampled = match &capped_rows {
                    Some(rows) => Some(select_domain(&m, d, rows, &retained, &pool, cv, forest.clone(), &options)?),
                    None => None,
                };
                let winner = indices(&m, &full.winner.features)?;
                let columns: Vec<Vec<f64>> = winner.iter().map(|&f| m.column(f, &all_rows)).collect();
                let refs: Vec<&[f64]> = columns.iter().map(Vec::as_slice).collect();
                let labels: Vec<bool> = m.domains().iter().map(|x| x == d).collect();
                let model = fit_forest(&refs, &labels, &all_rows, &forest, seed::derive(cv.seed, &[seed::key(d)]))?;
                let mut export = model.export(&full.winner.features);
                export["balancing"] = "balanced-bootstrap".into();
                export["domain"] = d.clone().into();
                Ok((DomainSelection { full, undersampled }, export))
            };
            (d.clone(), run())
        })
        .collect();
    let mut output = SelectOutput::default();
    let mut models = BTreeMap::new();
    for (d, r) in results {
        match r {
            Ok((s, model)) => {
                output.domains.insert(d.clone(), s);
                models.insert(d, model);
            }
            Err(e @ Error::ClassTooSmall { .. }) => {
                output.skipped.insert(d, e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    for (d, reason) in &filtered.skipped {
        output.skipped.insert(d.clone(), reason.clone());
    }
    store::write_json(&out.join("models.json"), &models)?;
    store::write_json(&out.join(SELECTION), &output)
}

pub(super) fn embed(p: &Pipeline, out: &Path) -> Result<()> {
    let c = p.config();
    let dir = p.stage_dir(Stage::Assemble);
    let m = read_matrix(&dir.join(MATRIX))?;
    let exclusions: Exclusions = store::read_json(&dir.join(EXCLUSIONS))?;
    let features: Vec<usize> = (0..m.cols())
        .filter(|&f| !exclusions.global.contains_key(&m.feature_ids()[f]))
        .collect();
    let rows = undersample(m.domains(), c.embed.cap, c.seed_for("embed"));
    let data: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| features.iter().map(|&f| m.get(r, f).unwrap_or(f64::NAN)).collect())
        .collect();
    let e = pca_embed(&data, c.embed.dims)?;
    let mut header = vec!["network_id".to_owned(), "domain".to_owned()];
    header.extend((1..=c.embed.dims).map(|k| format!("pc{k}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let records = rows.iter().zip(&e.coordinates).map(|(&r, coords)| {
        let mut rec = vec![m.network_ids()[r].clone(), m.domains()[r].clone()];
        rec.extend(coords.iter().map(|&x| format_float(x)));
        rec
    });
    write_csv(&out.join("coordinates.csv"), &header_refs, records)?;
    let kept: Vec<&String> = e.kept.iter().map(|&k| &m.feature_ids()[features[k]]).collect();
    store::write_json(
        &out.join("pca.json"),
        &serde_json::json!({
            "components": e.components,
            "explained": e.explained,
            "features": kept,
        }),
    )
}
