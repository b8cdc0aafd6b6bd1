//! Per-domain redundancy filter: drop one feature of every pair whose
//! absolute correlation exceeds a threshold, first by Pearson, then by
//! Spearman over the Pearson survivors.

use serde::{Deserialize, Serialize};

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_THRESHOLD: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pearson,
    Spearman,
}

/// Symmetric coefficient table; `None` marks pairs involving a
/// zero-variance feature.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    pub feature_ids: Vec<String>,
    pub method: Method,
    coefficients: Vec<Option<f64>>,
}

impl CorrelationMatrix {
    pub fn len(&self) -> usize {
        self.feature_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.feature_ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.coefficients[i * self.len() + j]
    }
}

/// Sample Pearson coefficient; `None` if either input has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Ranks starting at 1; tied values share their mean rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson(&average_ranks(x), &average_ranks(y))
}

fn columns(matrix: &FeatureMatrix, rows: &[usize], features: &[usize]) -> Result<Vec<Vec<f64>>> {
    if rows.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "correlation needs at least 2 rows, got {}",
            rows.len()
        )));
    }
    features
        .iter()
        .map(|&c| {
            let col = matrix.column(c, rows);
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "feature `{}` has missing values; impute first",
                    matrix.feature_ids()[c]
                )));
            }
            Ok(col)
        })
        .collect()
}

fn build(ids: Vec<String>, cols: &[Vec<f64>], method: Method) -> CorrelationMatrix {
    let k = cols.len();
    let mut coefficients = vec![None; k * k];
    for i in 0..k {
        coefficients[i * k + i] = Some(1.0);
        for j in i + 1..k {
            let r = pearson(&cols[i], &cols[j]);
            coefficients[i * k + j] = r;
            coefficients[j * k + i] = r;
        }
    }
    CorrelationMatrix {
        feature_ids: ids,
        method,
        coefficients,
    }
}

/// Pearson matrix over `features` (column indices) restricted to `rows`.
pub fn pearson_matrix(matrix: &FeatureMatrix, rows: &[usize], features: &[usize]) -> Result<CorrelationMatrix> {
    let cols = columns(matrix, rows, features)?;
    let ids = features.iter().map(|&c| matrix.feature_ids()[c].clone()).collect();
    Ok(build(ids, &cols, Method::Pearson))
}

/// Pearson over mean-ranked values.
pub fn spearman_matrix(matrix: &FeatureMatrix, rows: &[usize], features: &[usize]) -> Result<CorrelationMatrix> {
    let cols: Vec<Vec<f64>> = columns(matrix, rows, features)?
        .iter()
        .map(|c| average_ranks(c))
        .collect();
    let ids = features.iter().map(|&c| matrix.feature_ids()[c].clone()).collect();
    Ok(build(ids, &cols, Method::Spearman))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Removal {
    pub feature: String,
    pub partner: String,
    pub method: Method,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dedup {
    /// Positions into the matrix's feature order.
    pub retained: Vec<usize>,
    pub removed: Vec<Removal>,
}

/// Greedy sweep in matrix order: a feature is dropped iff its absolute
/// coefficient with an already retained feature exceeds `threshold`.
/// Undefined coefficients count as 0.
pub fn dedup(corr: &CorrelationMatrix, threshold: f64) -> Dedup {
    let mut retained: Vec<usize> = Vec::new();
    let mut removed = Vec::new();
    for i in 0..corr.len() {
        let partner = retained
            .iter()
            .copied()
            .find(|&j| corr.get(i, j).is_some_and(|r| r.abs() > threshold));
        match partner {
            Some(j) => removed.push(Removal {
                feature: corr.feature_ids[i].clone(),
                partner: corr.feature_ids[j].clone(),
                method: corr.method,
                coefficient: corr.get(i, j).unwrap(),
            }),
            None => retained.push(i),
        }
    }
    Dedup { retained, removed }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub domain: String,
    pub retained: Vec<String>,
    pub removed: Vec<Removal>,
}

/// Pearson dedup then Spearman dedup of `candidates` (column indices in
/// canonical order) over `rows`.
pub fn filter_domain(
    matrix: &FeatureMatrix,
    domain: &str,
    rows: &[usize],
    candidates: &[usize],
    threshold: f64,
) -> Result<FilterReport> {
    if candidates.is_empty() {
        return Err(Error::Empty(format!("domain `{domain}` has no candidate features")));
    }
    let linear = dedup(&pearson_matrix(matrix, rows, candidates)?, threshold);
    let survivors: Vec<usize> = linear.retained.iter().map(|&i| candidates[i]).collect();
    let ranked = dedup(&spearman_matrix(matrix, rows, &survivors)?, threshold);
    let retained: Vec<String> = ranked
        .retained
        .iter()
        .map(|&i| matrix.feature_ids()[survivors[i]].clone())
        .collect();
    if retained.is_empty() {
        return Err(Error::Empty(format!("no features survive filtering for `{domain}`")));
    }
    let mut removed = linear.removed;
    removed.extend(ranked.removed);
    Ok(FilterReport {
        domain: domain.to_owned(),
        retained,
        removed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(cols: &[Vec<f64>]) -> FeatureMatrix {
        let n = cols[0].len();
        let rows = (0..n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        FeatureMatrix::from_dense(
            (0..n).map(|i| format!("n{i}")).collect(),
            vec!["D".into(); n],
            (0..cols.len()).map(|i| format!("f{i}")).collect(),
            rows,
        )
        .unwrap()
    }

    fn close(a: Option<f64>, b: f64) -> bool {
        a.is_some_and(|a| (a - b).abs() < 1e-12)
    }

    #[test]
    fn pearson_examples() {
        assert!(close(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]), 1.0));
        assert!(close(pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), -1.0));
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]), None);
    }

    #[test]
    fn spearman_examples() {
        let x = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let cube: Vec<f64> = x.iter().map(|v: &f64| v.powi(3)).collect();
        let square: Vec<f64> = x.iter().map(|v: &f64| v * v).collect();
        assert!(close(spearman(&x, &cube), 1.0));
        // Ranks of x² are [4.5, 2.5, 1, 2.5, 4.5]; centered, their dot product
        // with ranks of x is zero.
        assert!(close(spearman(&x, &square), 0.0));
        assert!(close(spearman(&[1.0, 1.0, 2.0], &[3.0, 3.0, 4.0]), 1.0));
        assert_eq!(average_ranks(&[1.0, 1.0, 2.0]), vec![1.5, 1.5, 3.0]);
    }

    #[test]
    fn too_few_rows_is_an_error() {
        let m = matrix(&[vec![1.0], vec![2.0]]);
        assert!(pearson_matrix(&m, &[0], &[0, 1]).is_err());
    }

    #[test]
    fn linear_duplicate_is_dropped_keeping_the_earlier() {
        let f1 = vec![1.0, 4.0, 2.0, 8.0, 5.0];
        let f2: Vec<f64> = f1.iter().map(|v| 2.0 * v + 1.0).collect();
        let m = matrix(&[f1, f2]);
        let d = dedup(&pearson_matrix(&m, &[0, 1, 2, 3, 4], &[0, 1]).unwrap(), 0.9);
        assert_eq!(d.retained, vec![0]);
        assert_eq!(d.removed[0].feature, "f1");
        assert_eq!(d.removed[0].partner, "f0");
    }

    fn synthetic(k: usize, coeffs: &[(usize, usize, f64)]) -> CorrelationMatrix {
        let mut c = vec![None; k * k];
        for i in 0..k {
            c[i * k + i] = Some(1.0);
        }
        for &(i, j, r) in coeffs {
            c[i * k + j] = Some(r);
            c[j * k + i] = Some(r);
        }
        CorrelationMatrix {
            feature_ids: (0..k).map(|i| format!("f{}", i + 1)).collect(),
            method: Method::Pearson,
            coefficients: c,
        }
    }

    #[test]
    fn chain_keeps_both_ends() {
        let corr = synthetic(3, &[(0, 1, 0.95), (1, 2, 0.95), (0, 2, 0.5)]);
        assert_eq!(dedup(&corr, 0.9).retained, vec![0, 2]);
    }

    #[test]
    fn weak_correlations_keep_everything() {
        let corr = synthetic(3, &[(0, 1, 0.9), (1, 2, -0.9), (0, 2, 0.2)]);
        assert_eq!(dedup(&corr, 0.9).retained, vec![0, 1, 2]);
        let anti = synthetic(2, &[(0, 1, -0.95)]);
        assert_eq!(dedup(&anti, 0.9).retained, vec![0]);
    }

    #[test]
    fn filter_removes_one_of_a_duplicate_pair() {
        let a = vec![3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.0, 6.0];
        let b = vec![2.0, 7.0, 1.0, 8.0, 2.5, 8.5, 1.0, 3.0];
        let m = matrix(&[a.clone(), b, a]);
        let rows: Vec<usize> = (0..8).collect();
        let report = filter_domain(&m, "D", &rows, &[0, 1, 2], 0.9).unwrap();
        assert_eq!(report.retained, vec!["f0", "f1"]);
        assert_eq!(report.removed.len(), 1);
        assert_eq!(report.removed[0].feature, "f2");
    }

    #[test]
    fn spearman_pass_catches_monotone_nonlinear_pairs() {
        let x: Vec<f64> = (1..=12).map(|v| v as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v.powi(8)).collect();
        assert!(pearson(&x, &y).unwrap() < 0.9);
        let m = matrix(&[x, y]);
        let rows: Vec<usize> = (0..12).collect();
        let report = filter_domain(&m, "D", &rows, &[0, 1], 0.9).unwrap();
        assert_eq!(report.retained, vec!["f0"]);
        assert_eq!(report.removed[0].method, Method::Spearman);
    }

    #[test]
    fn empty_candidate_set_is_an_error() {
        let m = matrix(&[vec![1.0, 2.0]]);
        assert!(filter_domain(&m, "D", &[0, 1], &[], 0.9).is_err());
    }

    proptest! {
        #[test]
        fn spearman_equals_pearson_on_ranks(
            pairs in prop::collection::vec((0i32..20, -50i32..50), 3..40)
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
            let direct = spearman(&x, &y);
            let via_ranks = pearson(&average_ranks(&x), &average_ranks(&y));
            prop_assert_eq!(direct, via_ranks);
        }

        #[test]
        fn dedup_is_idempotent(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let base: Vec<f64> = (0..20).map(|_| rng.random()).collect();
            let cols: Vec<Vec<f64>> = (0..8)
                .map(|_| {
                    let mix: f64 = rng.random();
                    base.iter().map(|b| mix * b + (1.0 - mix) * rng.random::<f64>()).collect()
                })
                .collect();
            let m = matrix(&cols);
            let rows: Vec<usize> = (0..20).collect();
            let all: Vec<usize> = (0..8).collect();
            let first = dedup(&pearson_matrix(&m, &rows, &all).unwrap(), 0.9);
            let again = dedup(&pearson_matrix(&m, &rows, &first.retained).unwrap(), 0.9);
            prop_assert_eq!(again.retained.len(), first.retained.len());
            prop_assert!(again.removed.is_empty());
        }
    }
}
