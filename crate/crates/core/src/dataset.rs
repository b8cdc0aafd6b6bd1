//! Corpus feature matrix and the missing-data policies applied to it.
//!
//! Policy order: [`merge_small_domains`] → [`drop_sparse_networks`] →
//! [`drop_sparse_features_per_domain`] → [`impute`] →
//! [`drop_constant_features`]. [`apply_policies`] runs the whole sequence
//! and is idempotent on its own output.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

pub const OTHER_DOMAIN: &str = "other";
const EPS: f64 = 1e-12;

/// Networks × features table with an explicit missing mask.
///
/// `imputed` marks cells that were missing in the measured data and have
/// since been filled; the sparsity rules keep counting them as missing so
/// that re-running the policies does not change any decision.
#[derive(Clone, Debug)]
pub struct FeatureMatrix {
    network_ids: Vec<String>,
    domains: Vec<String>,
    feature_ids: Vec<String>,
    values: Vec<f64>,
    missing: Vec<bool>,
    imputed: Vec<bool>,
}

/// Bitwise equality on present cells; missing cells compare equal.
impl PartialEq for FeatureMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.network_ids == other.network_ids
            && self.domains == other.domains
            && self.feature_ids == other.feature_ids
            && self.missing == other.missing
            && self.imputed == other.imputed
            && self
                .values
                .iter()
                .zip(&other.values)
                .zip(&self.missing)
                .all(|((a, b), &m)| m || a.to_bits() == b.to_bits())
    }
}

impl FeatureMatrix {
    pub fn new(
        network_ids: Vec<String>,
        domains: Vec<String>,
        feature_ids: Vec<String>,
        rows: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        if network_ids.len() != domains.len() || network_ids.len() != rows.len() {
            return Err(Error::InvalidArgument(
                "network ids, domains and rows differ in length".into(),
            ));
        }
        let unique: BTreeSet<_> = feature_ids.iter().collect();
        if unique.len() != feature_ids.len() {
            return Err(Error::InvalidArgument("feature ids are not unique".into()));
        }
        let unique: BTreeSet<_> = network_ids.iter().collect();
        if unique.len() != network_ids.len() {
            return Err(Error::InvalidArgument("network ids are not unique".into()));
        }
        let p = feature_ids.len();
        let mut values = Vec::with_capacity(rows.len() * p);
        let mut missing = Vec::with_capacity(rows.len() * p);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidArgument(format!(
                    "row `{}` has {} values, expected {p}",
                    network_ids[i],
                    row.len()
                )));
            }
            for v in row {
                match v {
                    Some(x) if x.is_finite() => {
                        values.push(x);
                        missing.push(false);
                    }
                    _ => {
                        values.push(f64::NAN);
                        missing.push(true);
                    }
                }
            }
        }
        let imputed = vec![false; values.len()];
        Ok(FeatureMatrix {
            network_ids,
            domains,
            feature_ids,
            values,
            missing,
            imputed,
        })
    }

    /// Matrix with no missing cells.
    pub fn from_dense(
        network_ids: Vec<String>,
        domains: Vec<String>,
        feature_ids: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(Some).collect())
            .collect();
        Self::new(network_ids, domains, feature_ids, rows)
    }

    pub fn rows(&self) -> usize {
        self.network_ids.len()
    }

    pub fn cols(&self) -> usize {
        self.feature_ids.len()
    }

    pub fn network_ids(&self) -> &[String] {
        &self.network_ids
    }

    pub fn domains(&self) -> &[String] {
        &self.domains
    }

    pub fn feature_ids(&self) -> &[String] {
        &self.feature_ids
    }

    pub fn feature_index(&self, id: &str) -> Option<usize> {
        self.feature_ids.iter().position(|f| f == id)
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let i = row * self.cols() + col;
        (!self.missing[i]).then_some(self.values[i])
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.missing[row * self.cols() + col]
    }

    pub fn is_imputed(&self, row: usize, col: usize) -> bool {
        self.imputed[row * self.cols() + col]
    }

    /// Missing now or missing before imputation.
    fn was_missing(&self, i: usize) -> bool {
        self.missing[i] || self.imputed[i]
    }

    /// Column values for the given rows (NaN where missing).
    pub fn column(&self, col: usize, rows: &[usize]) -> Vec<f64> {
        rows.iter()
            .map(|&r| self.values[r * self.cols() + col])
            .collect()
    }

    /// Row indices per domain, domains in sorted order.
    pub fn domain_rows(&self) -> BTreeMap<String, Vec<usize>> {
        let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, d) in self.domains.iter().enumerate() {
            out.entry(d.clone()).or_default().push(i);
        }
        out
    }

    pub fn missing_cells(&self) -> usize {
        self.missing.iter().filter(|&&m| m).count()
    }

    pub fn imputed_cells(&self) -> Vec<(usize, usize)> {
        let p = self.cols();
        (0..self.imputed.len())
            .filter(|&i| self.imputed[i])
            .map(|i| (i / p, i % p))
            .collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        let p = self.cols();
        let mut out = FeatureMatrix {
            network_ids: Vec::with_capacity(rows.len()),
            domains: Vec::with_capacity(rows.len()),
            feature_ids: self.feature_ids.clone(),
            values: Vec::with_capacity(rows.len() * p),
            missing: Vec::with_capacity(rows.len() * p),
            imputed: Vec::with_capacity(rows.len() * p),
        };
        for &r in rows {
            out.network_ids.push(self.network_ids[r].clone());
            out.domains.push(self.domains[r].clone());
            let span = r * p..(r + 1) * p;
            out.values.extend_from_slice(&self.values[span.clone()]);
            out.missing.extend_from_slice(&self.missing[span.clone()]);
            out.imputed.extend_from_slice(&self.imputed[span]);
        }
        out
    }

    pub fn with_domains(mut self, domains: Vec<String>) -> Result<Self> {
        if domains.len() != self.rows() {
            return Err(Error::InvalidArgument("domain label count mismatch".into()));
        }
        self.domains = domains;
        Ok(self)
    }

    /// Marks previously-imputed cells (used when reloading a cleaned matrix).
    pub fn mark_imputed(&mut self, cells: &[(usize, usize)]) -> Result<()> {
        let p = self.cols();
        for &(r, c) in cells {
            if r >= self.rows() || c >= p || self.missing[r * p + c] {
                return Err(Error::InvalidArgument(format!(
                    "cannot mark cell ({r}, {c}) as imputed"
                )));
            }
            self.imputed[r * p + c] = true;
        }
        Ok(())
    }

    /// RFC-4180 CSV: `network_id,domain,<features...>`; missing cells empty.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["network_id".to_owned(), "domain".to_owned()];
        header.extend(self.feature_ids.iter().cloned());
        w.write_record(&header)?;
        let p = self.cols();
        for r in 0..self.rows() {
            let mut rec = Vec::with_capacity(p + 2);
            rec.push(self.network_ids[r].clone());
            rec.push(self.domains[r].clone());
            for c in 0..p {
                rec.push(match self.get(r, c) {
                    Some(x) => format_float(x),
                    None => String::new(),
                });
            }
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.len() < 2 || &header[0] != "network_id" || &header[1] != "domain" {
            return Err(Error::InvalidArgument(
                "feature CSV must start with network_id,domain".into(),
            ));
        }
        let feature_ids: Vec<String> = header.iter().skip(2).map(str::to_owned).collect();
        let (mut ids, mut domains, mut rows) = (Vec::new(), Vec::new(), Vec::new());
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            ids.push(rec[0].to_owned());
            domains.push(rec[1].to_owned());
            let row = rec
                .iter()
                .skip(2)
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<f64>().map(Some).map_err(|e| Error::Parse {
                            line: i + 2,
                            message: format!("`{cell}`: {e}"),
                        })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        FeatureMatrix::new(ids, domains, feature_ids, rows)
    }
}

/// Shortest representation that round-trips exactly.
pub fn format_float(x: f64) -> String {
    let s = format!("{x}");
    if s == "-0" {
        "0".to_owned()
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub network_missing_max: f64,
    pub feature_missing_max_per_domain: f64,
    pub constant_fraction: f64,
    pub min_domain_size: usize,
    pub rng_seed: u64,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            network_missing_max: 0.20,
            feature_missing_max_per_domain: 0.20,
            constant_fraction: 0.80,
            min_domain_size: 10,
            rng_seed: 0,
        }
    }
}

impl PolicyConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("network_missing_max", self.network_missing_max),
            ("feature_missing_max_per_domain", self.feature_missing_max_per_domain),
            ("constant_fraction", self.constant_fraction),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if self.min_domain_size == 0 {
            return Err(Error::Config("min_domain_size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    SmallDomain,
    SparseNetwork,
    SparseFeature,
    MedianFallback,
    Unimputable,
    ConstantInDomain,
    ConstantGlobal,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rule::SmallDomain => "small-domain",
            Rule::SparseNetwork => "sparse-network",
            Rule::SparseFeature => "sparse-feature",
            Rule::MedianFallback => "median-fallback",
            Rule::Unimputable => "unimputable",
            Rule::ConstantInDomain => "constant-in-domain",
            Rule::ConstantGlobal => "constant-global",
        })
    }
}

/// One policy decision, for the audit log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub rule: Rule,
    pub network: Option<String>,
    pub feature: Option<String>,
    pub domain: Option<String>,
    pub detail: String,
}

/// Relabels every domain with fewer than `min_domain_size` members as
/// [`OTHER_DOMAIN`].
pub fn merge_small_domains(labels: &[String], min_domain_size: usize) -> Vec<String> {
    let mut sizes: HashMap<&str, usize> = HashMap::new();
    for l in labels {
        *sizes.entry(l.as_str()).or_default() += 1;
    }
    labels
        .iter()
        .map(|l| {
            if sizes[l.as_str()] < min_domain_size {
                OTHER_DOMAIN.to_owned()
            } else {
                l.clone()
            }
        })
        .collect()
}

/// Removes rows whose missing fraction over all columns strictly exceeds
/// `threshold`. Returns the kept matrix and the dropped network ids.
pub fn drop_sparse_networks(matrix: &FeatureMatrix, threshold: f64) -> Result<(FeatureMatrix, Vec<String>)> {
    let p = matrix.cols();
    let mut keep = Vec::new();
    let mut dropped = Vec::new();
    for r in 0..matrix.rows() {
        let missing = (0..p).filter(|&c| matrix.was_missing(r * p + c)).count();
        let fraction = if p == 0 { 0.0 } else { missing as f64 / p as f64 };
        if fraction > threshold + EPS {
            dropped.push(matrix.network_ids[r].clone());
        } else {
            keep.push(r);
        }
    }
    if keep.is_empty() {
        return Err(Error::PolicyEmpty(Rule::SparseNetwork.to_string()));
    }
    Ok((matrix.select_rows(&keep), dropped))
}

/// Per domain, the features valid in fewer than `1 - threshold` of its rows.
pub fn drop_sparse_features_per_domain(
    matrix: &FeatureMatrix,
    threshold: f64,
) -> BTreeMap<String, BTreeSet<String>> {
    let p = matrix.cols();
    let required = 1.0 - threshold;
    matrix
        .domain_rows()
        .into_iter()
        .map(|(domain, rows)| {
            let excluded = (0..p)
                .filter(|&c| {
                    let valid = rows.iter().filter(|&&r| !matrix.was_missing(r * p + c)).count();
                    (valid as f64 / rows.len() as f64) < required - EPS
                })
                .map(|c| matrix.feature_ids[c].clone())
                .collect();
            (domain, excluded)
        })
        .collect()
}

/// First and third quartiles by linear interpolation at position `p·(n−1)`
/// of the sorted values.
pub fn quartiles(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::Empty("quartiles of an empty set".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok((quantile_sorted(&sorted, 0.25), quantile_sorted(&sorted, 0.75)))
}

pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Fills each missing cell with a uniform draw from `[Q1, Q3]` of its
/// domain's valid values for that feature.
///
/// Draws are keyed by `(seed, network id, feature id)`. Groups with fewer
/// than four valid values fall back to the median; groups with none stay
/// missing. Both cases are reported.
pub fn impute(matrix: &FeatureMatrix, seed: u64) -> (FeatureMatrix, Vec<AuditEntry>) {
    let mut out = matrix.clone();
    let mut audit = Vec::new();
    let p = matrix.cols();
    for (domain, rows) in matrix.domain_rows() {
        for c in 0..p {
            let holes: Vec<usize> = rows
                .iter()
                .copied()
                .filter(|&r| matrix.missing[r * p + c])
                .collect();
            if holes.is_empty() {
                continue;
            }
            let mut valid: Vec<f64> = rows
                .iter()
                .filter(|&&r| !matrix.was_missing(r * p + c))
                .map(|&r| matrix.values[r * p + c])
                .collect();
            valid.sort_by(f64::total_cmp);
            let feature = &matrix.feature_ids[c];
            if valid.is_empty() {
                audit.push(AuditEntry {
                    rule: Rule::Unimputable,
                    network: None,
                    feature: Some(feature.clone()),
                    domain: Some(domain.clone()),
                    detail: format!("{} cells left missing: no valid values in domain", holes.len()),
                });
                continue;
            }
            let fill: Box<dyn Fn(&str) -> f64> = if valid.len() < 4 {
                let median = quantile_sorted(&valid, 0.5);
                audit.push(AuditEntry {
                    rule: Rule::MedianFallback,
                    network: None,
                    feature: Some(feature.clone()),
                    domain: Some(domain.clone()),
                    detail: format!(
                        "{} valid values (< 4); {} cells set to median {}",
                        valid.len(),
                        holes.len(),
                        format_float(median)
                    ),
                });
                Box::new(move |_| median)
            } else {
                let q1 = quantile_sorted(&valid, 0.25);
                let q3 = quantile_sorted(&valid, 0.75);
                let feature_key = seed::key(feature);
                Box::new(move |network: &str| {
                    if q1 == q3 {
                        return q1;
                    }
                    let mut rng = seed::rng(seed, &[seed::key(network), feature_key]);
                    let u: f64 = rng.random();
                    (q1 + u * (q3 - q1)).clamp(q1, q3)
                })
            };
            for r in holes {
                let i = r * p + c;
                out.values[i] = fill(&matrix.network_ids[r]);
                out.missing[i] = false;
                out.imputed[i] = true;
            }
        }
    }
    (out, audit)
}

/// Exact equality key after rounding to 12 significant digits.
fn constant_key(x: f64) -> String {
    format!("{:.11e}", x)
}

fn dominant_fraction(matrix: &FeatureMatrix, rows: &[usize], c: usize) -> f64 {
    let p = matrix.cols();
    let mut counts: HashMap<String, usize> = HashMap::new();
    let mut total = 0;
    for &r in rows {
        if matrix.missing[r * p + c] {
            continue;
        }
        total += 1;
        *counts.entry(constant_key(matrix.values[r * p + c])).or_default() += 1;
    }
    if total == 0 {
        return 0.0;
    }
    *counts.values().max().unwrap() as f64 / total as f64
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstantFeatures {
    pub per_domain: BTreeMap<String, BTreeSet<String>>,
    pub global: BTreeSet<String>,
}

/// Features whose most frequent value covers more than `constant_fraction`
/// of a domain's rows (per domain) or of all rows (global).
pub fn drop_constant_features(matrix: &FeatureMatrix, constant_fraction: f64) -> ConstantFeatures {
    let p = matrix.cols();
    let all: Vec<usize> = (0..matrix.rows()).collect();
    let per_domain = matrix
        .domain_rows()
        .into_iter()
        .map(|(domain, rows)| {
            let set = (0..p)
                .filter(|&c| dominant_fraction(matrix, &rows, c) > constant_fraction + EPS)
                .map(|c| matrix.feature_ids[c].clone())
                .collect();
            (domain, set)
        })
        .collect();
    let global = (0..p)
        .filter(|&c| dominant_fraction(matrix, &all, c) > constant_fraction + EPS)
        .map(|c| matrix.feature_ids[c].clone())
        .collect();
    ConstantFeatures { per_domain, global }
}

/// Reduces every domain larger than `cap` to `cap` members by seeded
/// sampling without replacement. Returns retained row indices, ascending.
pub fn undersample(labels: &[String], cap: usize, seed: u64) -> Vec<usize> {
    let mut by_domain: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        by_domain.entry(l.as_str()).or_default().push(i);
    }
    let mut keep = Vec::with_capacity(labels.len());
    for (domain, rows) in by_domain {
        if rows.len() <= cap.max(1) {
            keep.extend(rows);
        } else {
            let mut rng = seed::rng(seed, &[seed::key(domain)]);
            keep.extend(sample(&mut rng, rows.len(), cap.max(1)).into_iter().map(|i| rows[i]));
        }
    }
    keep.sort_unstable();
    keep
}

/// Feature exclusions decided by the policies.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Exclusions {
    /// domain → feature → triggering rule.
    pub per_domain: BTreeMap<String, BTreeMap<String, Rule>>,
    /// feature → triggering rule.
    pub global: BTreeMap<String, Rule>,
}

impl Exclusions {
    pub fn rule_for(&self, domain: &str, feature: &str) -> Option<Rule> {
        self.global.get(feature).copied().or_else(|| {
            self.per_domain
                .get(domain)
                .and_then(|m| m.get(feature))
                .copied()
        })
    }

    /// Indices of features usable for `domain`'s task, in canonical order.
    pub fn candidates(&self, matrix: &FeatureMatrix, domain: &str) -> Vec<usize> {
        (0..matrix.cols())
            .filter(|&c| self.rule_for(domain, &matrix.feature_ids[c]).is_none())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CleanDataset {
    pub matrix: FeatureMatrix,
    pub exclusions: Exclusions,
    pub audit: Vec<AuditEntry>,
    pub dropped_networks: Vec<String>,
}

/// Runs every policy in order.
///
/// Domains that fall below `min_domain_size` after sparse networks are
/// dropped are merged into [`OTHER_DOMAIN`] as well, so the result is a
/// fixed point of the pipeline.
pub fn apply_policies(matrix: &FeatureMatrix, config: &PolicyConfig) -> Result<CleanDataset> {
    config.validate()?;
    let mut audit = Vec::new();

    let merged = merge_small_domains(&matrix.domains, config.min_domain_size);
    record_merges(&matrix.domains, &merged, &mut audit);
    let matrix = matrix.clone().with_domains(merged)?;

    let (matrix, dropped) = drop_sparse_networks(&matrix, config.network_missing_max)?;
    for id in &dropped {
        audit.push(AuditEntry {
            rule: Rule::SparseNetwork,
            network: Some(id.clone()),
            feature: None,
            domain: None,
            detail: format!("more than {} of features missing", config.network_missing_max),
        });
    }
    let remerged = merge_small_domains(&matrix.domains, config.min_domain_size);
    record_merges(&matrix.domains, &remerged, &mut audit);
    let matrix = matrix.with_domains(remerged)?;

    let mut exclusions = Exclusions::default();
    for (domain, features) in drop_sparse_features_per_domain(&matrix, config.feature_missing_max_per_domain) {
        let entry = exclusions.per_domain.entry(domain.clone()).or_default();
        for f in features {
            audit.push(AuditEntry {
                rule: Rule::SparseFeature,
                network: None,
                feature: Some(f.clone()),
                domain: Some(domain.clone()),
                detail: "valid in fewer than the required fraction of domain networks".into(),
            });
            entry.insert(f, Rule::SparseFeature);
        }
    }

    let (matrix, imputation_audit) = impute(&matrix, config.rng_seed);
    audit.extend(imputation_audit);

    let constants = drop_constant_features(&matrix, config.constant_fraction);
    for (domain, features) in &constants.per_domain {
        let entry = exclusions.per_domain.entry(domain.clone()).or_default();
        for f in features {
            if entry.contains_key(f) {
                continue;
            }
            audit.push(AuditEntry {
                rule: Rule::ConstantInDomain,
                network: None,
                feature: Some(f.clone()),
                domain: Some(domain.clone()),
                detail: format!("one value covers more than {} of rows", config.constant_fraction),
            });
            entry.insert(f.clone(), Rule::ConstantInDomain);
        }
    }
    for f in &constants.global {
        audit.push(AuditEntry {
            rule: Rule::ConstantGlobal,
            network: None,
            feature: Some(f.clone()),
            domain: None,
            detail: format!("one value covers more than {} of all rows", config.constant_fraction),
        });
        exclusions.global.insert(f.clone(), Rule::ConstantGlobal);
    }
    // Cells nothing could fill make the feature unusable for every task.
    for c in 0..matrix.cols() {
        let f = &matrix.feature_ids[c];
        if exclusions.global.contains_key(f) {
            continue;
        }
        if (0..matrix.rows()).any(|r| matrix.is_missing(r, c)) {
            exclusions.global.insert(f.clone(), Rule::Unimputable);
        }
    }
    Ok(CleanDataset {
        matrix,
        exclusions,
        audit,
        dropped_networks: dropped,
    })
}

fn record_merges(before: &[String], after: &[String], audit: &mut Vec<AuditEntry>) {
    let merged: BTreeSet<&String> = before
        .iter()
        .zip(after)
        .filter(|(b, a)| b != a)
        .map(|(b, _)| b)
        .collect();
    for d in merged {
        audit.push(AuditEntry {
            rule: Rule::SmallDomain,
            network: None,
            feature: None,
            domain: Some(d.clone()),
            detail: format!("merged into `{OTHER_DOMAIN}`"),
        });
    }
}
