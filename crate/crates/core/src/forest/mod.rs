//! Random forest classifier and repeated stratified cross-validation.

mod cv;
mod tree;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

pub use cv::{stratified_kfold_indices, CvConfig, Split};
pub use tree::{fit_tree, gini, Tree, TreeNode};

/// Stream tag separating forest randomness from CV partition randomness.
const FOREST_STREAM: u64 = 0x666f_7265_7374;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    /// `None` means `floor(sqrt(p))`, at least 1.
    pub features_per_split: Option<usize>,
    pub balanced_bootstrap: bool,
    pub min_samples_leaf: usize,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            max_depth: 3,
            features_per_split: None,
            balanced_bootstrap: true,
            min_samples_leaf: 1,
        }
    }
}

impl ForestParams {
    pub fn features_per_split(&self, p: usize) -> usize {
        let k = self
            .features_per_split
            .unwrap_or_else(|| (p as f64).sqrt().floor() as usize);
        k.clamp(1, p.max(1))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::InvalidArgument("n_trees must be positive".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidArgument("max_depth must be positive".into()));
        }
        if self.features_per_split == Some(0) {
            return Err(Error::InvalidArgument("features_per_split must be positive".into()));
        }
        Ok(())
    }
}

/// Draws `m` rows with replacement from each class of `rows`, where `m` is
/// the minority class size. Positives come first in the result.
pub fn balanced_bootstrap<R: Rng>(labels: &[bool], rows: &[usize], rng: &mut R) -> Result<Vec<usize>> {
    let pos: Vec<usize> = rows.iter().copied().filter(|&i| labels[i]).collect();
    let neg: Vec<usize> = rows.iter().copied().filter(|&i| !labels[i]).collect();
    let m = pos.len().min(neg.len());
    if m == 0 {
        let class = if pos.is_empty() { "positive" } else { "negative" };
        return Err(Error::ClassTooSmall {
            class: class.into(),
            count: 0,
            folds: 1,
        });
    }
    let mut out = Vec::with_capacity(2 * m);
    for class in [&pos, &neg] {
        out.extend((0..m).map(|_| class[rng.random_range(0..class.len())]));
    }
    Ok(out)
}

fn plain_bootstrap<R: Rng>(rows: &[usize], rng: &mut R) -> Vec<usize> {
    (0..rows.len()).map(|_| rows[rng.random_range(0..rows.len())]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub params: ForestParams,
    pub seed: u64,
    pub trees: Vec<Tree>,
}

impl Forest {
    /// Hard majority vote; an even split counts as positive.
    pub fn predict(&self, columns: &[&[f64]], row: usize) -> bool {
        let votes = self.trees.iter().filter(|t| t.predict(columns, row)).count();
        2 * votes >= self.trees.len()
    }

    /// Fraction of trees voting positive.
    pub fn vote_share(&self, columns: &[&[f64]], row: usize) -> f64 {
        let votes = self.trees.iter().filter(|t| t.predict(columns, row)).count();
        votes as f64 / self.trees.len() as f64
    }

    /// JSON export with feature indices replaced by ids.
    pub fn export(&self, feature_ids: &[String]) -> serde_json::Value {
        let trees: Vec<serde_json::Value> = self
            .trees
            .iter()
            .map(|t| {
                let nodes: Vec<serde_json::Value> = t
                    .nodes
                    .iter()
                    .map(|node| match *node {
                        TreeNode::Split {
                            feature,
                            threshold,
                            left,
                            right,
                        } => serde_json::json!({
                            "type": "split",
                            "feature": feature_ids[feature],
                            "threshold": threshold,
                            "left": left,
                            "right": right,
                        }),
                        TreeNode::Leaf { probability } => serde_json::json!({
                            "type": "leaf",
                            "probability": probability,
                        }),
                    })
                    .collect();
                serde_json::json!({ "nodes": nodes })
            })
            .collect();
        serde_json::json!({
            "features": feature_ids,
            "params": self.params,
            "seed": self.seed,
            "trees": trees,
        })
    }
}

/// Fits a forest on `rows`. Tree `t` draws from its own stream
/// `(seed, t)`, so the result is independent of thread scheduling.
pub fn fit_forest(columns: &[&[f64]], labels: &[bool], rows: &[usize], params: &ForestParams, seed: u64) -> Result<Forest> {
    params.validate()?;
    if columns.is_empty() {
        return Err(Error::InvalidArgument("no features to fit on".into()));
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no rows to fit on".into()));
    }
    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(seed, &[t as u64]);
            let sample = if params.balanced_bootstrap {
                balanced_bootstrap(labels, rows, &mut rng)?
            } else {
                plain_bootstrap(rows, &mut rng)
            };
            Ok(fit_tree(columns, labels, &sample, params, &mut rng))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Forest {
        params: params.clone(),
        seed,
        trees,
    })
}

/// F1 of the positive class. When there are no predicted and no actual
/// positives the score is 0.
pub fn f1_score(truth: &[bool], predicted: &[bool]) -> Result<f64> {
    if truth.len() != predicted.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} labels, {} predictions",
            truth.len(),
            predicted.len()
        )));
    }
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fneg = 0usize;
    for (&t, &p) in truth.iter().zip(predicted) {
        match (t, p) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fneg += 1,
            _ => {}
        }
    }
    if 2 * tp + fp + fneg == 0 {
        return Ok(0.0);
    }
    Ok(2.0 * tp as f64 / (2 * tp + fp + fneg) as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub mean: f64,
    pub folds: Vec<f64>,
    /// Folds whose test set had no predicted and no actual positives.
    pub degenerate: usize,
}

/// Cross-validated F1 of a forest restricted to `subset` of `columns`.
pub fn evaluate(columns: &[&[f64]], labels: &[bool], subset: &[usize], cv: &CvConfig, params: &ForestParams) -> Result<Score> {
    let splits = stratified_kfold_indices(labels, cv.folds, cv.repeats, cv.seed)?;
    evaluate_on_splits(columns, labels, subset, &splits, cv.seed, params)
}

/// As [`evaluate`], with partitions computed once by the caller so that
/// many subsets share them.
pub fn evaluate_on_splits(
    columns: &[&[f64]],
    labels: &[bool],
    subset: &[usize],
    splits: &[Split],
    seed: u64,
    params: &ForestParams,
) -> Result<Score> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty feature subset".into()));
    }
    if let Some(&bad) = subset.iter().find(|&&f| f >= columns.len()) {
        return Err(Error::InvalidArgument(format!("feature index {bad} out of range")));
    }
    if columns.iter().any(|c| c.len() != labels.len()) {
        return Err(Error::InvalidArgument("column length differs from label count".into()));
    }
    let chosen: Vec<&[f64]> = subset.iter().map(|&f| columns[f]).collect();
    let mut folds = Vec::with_capacity(splits.len());
    let mut degenerate = 0;
    for (i, split) in splits.iter().enumerate() {
        let forest = fit_forest(&chosen, labels, &split.train, params, seed::derive(seed, &[FOREST_STREAM, i as u64]))?;
        let truth: Vec<bool> = split.test.iter().map(|&r| labels[r]).collect();
        let predicted: Vec<bool> = split.test.iter().map(|&r| forest.predict(&chosen, r)).collect();
        if !truth.iter().any(|&t| t) && !predicted.iter().any(|&p| p) {
            degenerate += 1;
        }
        folds.push(f1_score(&truth, &predicted)?);
    }
    let mean = folds.iter().sum::<f64>() / folds.len() as f64;
    Ok(Score {
        mean,
        folds,
        degenerate,
    })
}
