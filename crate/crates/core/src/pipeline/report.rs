use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use super::stages::{read_matrix, FilterOutput, SelectOutput, AUDIT, FEATURES, FILTER, MATRIX, SELECTION};
use super::store::{self, write_csv};
use super::{domain_slug, Pipeline, Stage};
use crate::dataset::{format_float, Rule, OTHER_DOMAIN};
use crate::error::Result;
use crate::selection::{ComboScore, SelectionReport};

/// Pairs and triplets kept per domain in the score table.
pub const TOP_SCORES: usize = 100;

fn combo_name(c: &ComboScore) -> String {
    c.features.join("+")
}

fn folds(c: &ComboScore) -> String {
    c.folds.iter().map(|&f| format_float(f)).collect::<Vec<_>>().join(";")
}

fn variants(s: &super::DomainSelection) -> Vec<(&'static str, &SelectionReport)> {
    let mut v = vec![("full", &s.full)];
    if let Some(u) = &s.undersampled {
        v.push(("undersampled", u));
    }
    v
}

pub(super) fn emit(p: &Pipeline, out: &Path) -> Result<()> {
    let threshold = p.config().selection.separable_threshold;
    let raw = read_matrix(&p.stage_dir(Stage::Measure).join(FEATURES))?;
    let assembled = read_matrix(&p.stage_dir(Stage::Assemble).join(MATRIX))?;
    let filtered: FilterOutput = store::read_json(&p.stage_dir(Stage::Filter).join(FILTER))?;
    let selected: SelectOutput = store::read_json(&p.stage_dir(Stage::Select).join(SELECTION))?;
    let separable = |r: &SelectionReport| r.winner.mean > threshold;

    // Domain sizes before and after the policies.
    let before: BTreeMap<String, usize> = raw.domain_rows().into_iter().map(|(d, r)| (d, r.len())).collect();
    let after: BTreeMap<String, usize> = assembled.domain_rows().into_iter().map(|(d, r)| (d, r.len())).collect();
    let mut all_domains: Vec<&String> = before.keys().chain(after.keys()).collect();
    all_domains.sort();
    all_domains.dedup();
    let sizes = all_domains.iter().map(|d| {
        let role = if d.as_str() == OTHER_DOMAIN {
            "merged"
        } else if selected.domains.contains_key(d.as_str()) {
            "target"
        } else {
            "dropped"
        };
        [
            d.to_string(),
            before.get(d.as_str()).copied().unwrap_or(0).to_string(),
            after.get(d.as_str()).copied().unwrap_or(0).to_string(),
            role.to_owned(),
        ]
    });
    write_csv(&out.join("domain_sizes.csv"), &["domain", "ingested", "retained", "role"], sizes)?;

    let mut scores = Vec::new();
    let mut winners = Vec::new();
    let mut overlaps = Vec::new();
    for (domain, s) in &selected.domains {
        for (variant, r) in variants(s) {
            for (size, list, limit) in [(1, &r.singlets, usize::MAX), (2, &r.pairs, TOP_SCORES), (3, &r.triplets, TOP_SCORES)] {
                for (rank, c) in list.iter().take(limit).enumerate() {
                    scores.push([
                        domain.clone(),
                        variant.to_owned(),
                        size.to_string(),
                        (rank + 1).to_string(),
                        combo_name(c),
                        format_float(c.mean),
                        folds(c),
                    ]);
                }
            }
            let alternates: Vec<String> = r
                .alternates
                .iter()
                .map(|(f, alts)| format!("{f}:{}", alts.len()))
                .collect();
            winners.push([
                domain.clone(),
                variant.to_owned(),
                combo_name(&r.winner),
                r.winner.features.len().to_string(),
                format_float(r.winner.mean),
                separable(r).to_string(),
                alternates.join(";"),
            ]);
            let o = r.overlap.as_ref();
            overlaps.push([
                domain.clone(),
                variant.to_owned(),
                o.map(|o| format_float(o.percent)).unwrap_or_default(),
                o.map(|o| o.candidates.to_string()).unwrap_or_default(),
                o.map(|o| o.distinct.to_string()).unwrap_or_default(),
                o.map(|o| o.shared.to_string()).unwrap_or_default(),
            ]);
        }
    }
    write_csv(
        &out.join("f1_scores.csv"),
        &["domain", "variant", "size", "rank", "features", "mean_f1", "fold_f1"],
        scores,
    )?;
    write_csv(
        &out.join("winners.csv"),
        &["domain", "variant", "features", "size", "mean_f1", "separable", "correlated_alternates"],
        winners,
    )?;
    write_csv(
        &out.join("overlap.csv"),
        &["domain", "variant", "percent", "candidates", "distinct", "shared"],
        overlaps,
    )?;

    // Everything the policies or the wrapper set aside.
    let mut dropped: Vec<[String; 4]> = Vec::new();
    let mut rdr = csv::Reader::from_path(p.stage_dir(Stage::Assemble).join(AUDIT))?;
    for rec in rdr.records() {
        let rec = rec?;
        let rule = &rec[0];
        if rule == Rule::SmallDomain.to_string() {
            dropped.push(["domain".into(), rec[3].to_owned(), rule.to_owned(), rec[4].to_owned()]);
        } else if rule == Rule::SparseNetwork.to_string() {
            dropped.push(["network".into(), rec[1].to_owned(), rule.to_owned(), rec[4].to_owned()]);
        }
    }
    for (d, reason) in &selected.skipped {
        dropped.push(["domain".into(), d.clone(), "no-task".into(), reason.clone()]);
    }
    let mut rdr = csv::Reader::from_path(p.stage_dir(Stage::Ingest).join("failed.csv"))?;
    for rec in rdr.records() {
        let rec = rec?;
        dropped.push(["network".into(), rec[0].to_owned(), "ingest".into(), rec[2].to_owned()]);
    }
    write_csv(&out.join("dropped.csv"), &["kind", "id", "rule", "detail"], dropped.iter())?;

    for (i, (domain, s)) in selected.domains.iter().enumerate() {
        let doc = json!({
            "domain": domain,
            "filter": filtered.domains.get(domain),
            "selection": s,
            "separable": separable(&s.full),
            "separable_threshold": threshold,
        });
        store::write_json(&out.join("domains").join(format!("{}.json", domain_slug(i, domain))), &doc)?;
    }

    let mut summary = String::new();
    let targets = selected.domains.len();
    let n_sep = selected.domains.values().filter(|s| separable(&s.full)).count();
    writeln!(summary, "networks: {} ingested, {} after policies", raw.rows(), assembled.rows()).ok();
    writeln!(summary, "domains: {targets} with a task, {n_sep} separable (best mean F1 > {threshold})").ok();
    writeln!(summary).ok();
    for (domain, s) in &selected.domains {
        let r = &s.full;
        let verdict = if separable(r) { "separable" } else { "not separable" };
        writeln!(
            summary,
            "{domain}: {verdict}; best {{{}}} mean F1 {:.3} ({} positives, {} negatives)",
            r.winner.features.join(", "),
            r.winner.mean,
            r.positives,
            r.negatives
        )
        .ok();
        for size in 1..=3 {
            if let Some(b) = r.best_of_size(size) {
                writeln!(summary, "  best of size {size}: {{{}}} {:.3}", b.features.join(", "), b.mean).ok();
            }
        }
        if let Some(o) = &r.overlap {
            writeln!(summary, "  pair/triplet overlap: {:.1}%", o.percent).ok();
        }
        if let Some(u) = &s.undersampled {
            writeln!(
                summary,
                "  undersampled: best {{{}}} mean F1 {:.3}",
                u.winner.features.join(", "),
                u.winner.mean
            )
            .ok();
        }
    }
    if !dropped.is_empty() {
        writeln!(summary).ok();
        writeln!(summary, "dropped:").ok();
        for [kind, id, rule, detail] in &dropped {
            writeln!(summary, "  {kind} {id}: {rule} ({detail})").ok();
        }
    }
    store::write(&out.join("summary.txt"), summary.as_bytes())
}
