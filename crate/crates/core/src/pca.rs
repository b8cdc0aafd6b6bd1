//! Principal component embedding of standardized feature rows.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    /// One row of `dims` coordinates per input row.
    pub coordinates: Vec<Vec<f64>>,
    /// Fraction of total variance along each returned axis.
    pub explained: Vec<f64>,
    /// Unit loading vectors over `kept`, one per axis.
    pub components: Vec<Vec<f64>>,
    /// Input columns with non-zero variance, in input order.
    pub kept: Vec<usize>,
}

struct Standardized {
    data: DMatrix<f64>,
    kept: Vec<usize>,
}

fn standardize(rows: &[Vec<f64>]) -> Result<Standardized> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("PCA needs at least 2 rows, got {n}")));
    }
    let p = rows[0].len();
    if rows.iter().any(|r| r.len() != p) {
        return Err(Error::InvalidArgument("rows differ in length".into()));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("PCA input must be finite".into()));
    }
    let mut kept = Vec::new();
    let mut columns = Vec::new();
    for c in 0..p {
        let col: Vec<f64> = rows.iter().map(|r| r[c]).collect();
        let mean = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let sd = var.sqrt();
        if sd == 0.0 || col.iter().all(|&v| v == col[0]) {
            continue;
        }
        kept.push(c);
        columns.push(col.into_iter().map(|v| (v - mean) / sd).collect::<Vec<_>>());
    }
    let data = DMatrix::from_fn(n, kept.len(), |r, c| columns[c][r]);
    Ok(Standardized { data, kept })
}

/// Projects standardized rows onto the top `dims` principal axes.
///
/// Each axis is oriented so that its largest-magnitude loading is positive
/// (the first such loading on ties).
pub fn pca_embed(rows: &[Vec<f64>], dims: usize) -> Result<Embedding> {
    let Standardized { data, kept } = standardize(rows)?;
    let p = kept.len();
    if dims == 0 || dims > p {
        return Err(Error::InvalidArgument(format!(
            "cannot embed into {dims} dimensions with {p} non-constant features"
        )));
    }
    let n = data.nrows();
    let cov = (data.transpose() * &data) / (n - 1) as f64;
    let eigen = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]).then(a.cmp(&b)));
    let total: f64 = eigen.eigenvalues.iter().map(|v| v.max(0.0)).sum();

    let mut components = Vec::with_capacity(dims);
    let mut explained = Vec::with_capacity(dims);
    for &k in order.iter().take(dims) {
        let mut v: Vec<f64> = eigen.eigenvectors.column(k).iter().copied().collect();
        let lead = v
            .iter()
            .enumerate()
            .fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
        if v[lead] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        components.push(v);
        explained.push(if total > 0.0 { eigen.eigenvalues[k].max(0.0) / total } else { 0.0 });
    }
    let basis = DMatrix::from_fn(p, dims, |r, c| components[c][r]);
    let scores = &data * basis;
    let coordinates = (0..n).map(|r| scores.row(r).iter().copied().collect()).collect();
    Ok(Embedding {
        coordinates,
        explained,
        components,
        kept,
    })
}

/// Standardized input rebuilt from a full-rank embedding; used to check
/// that the projection loses nothing.
pub fn reconstruction_error(rows: &[Vec<f64>]) -> Result<f64> {
    let Standardized { data, kept } = standardize(rows)?;
    let e = pca_embed(rows, kept.len())?;
    let mut worst: f64 = 0.0;
    for (r, coords) in e.coordinates.iter().enumerate() {
        for c in 0..kept.len() {
            let rebuilt: f64 = coords.iter().zip(&e.components).map(|(s, v)| s * v[c]).sum();
            worst = worst.max((rebuilt - data[(r, c)]).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| (0..d).map(|_| StandardNormal.sample(&mut rng)).collect()).collect()
    }

    #[test]
    fn collinear_points_have_one_component() {
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let t = i as f64 * 0.37 - 2.0;
                vec![t, 2.0 * t + 1.0, -t, 0.5 * t, 3.0 - 4.0 * t]
            })
            .collect();
        let e = pca_embed(&rows, 2).unwrap();
        assert!((e.explained[0] - 1.0).abs() < 1e-12, "{:?}", e.explained);
        assert!(e.explained[1].abs() < 1e-12);
    }

    #[test]
    fn isotropic_cloud_spreads_variance_evenly() {
        let d = 4;
        let rows = gaussian(10_000, d, 3);
        let e = pca_embed(&rows, d).unwrap();
        for f in &e.explained {
            assert!((f - 1.0 / d as f64).abs() < 0.1 / d as f64, "{:?}", e.explained);
        }
    }

    #[test]
    fn duplicate_rows_share_coordinates() {
        let mut rows = gaussian(30, 3, 1);
        rows.push(rows[4].clone());
        let e = pca_embed(&rows, 2).unwrap();
        assert_eq!(e.coordinates[4], e.coordinates[30]);
    }

    #[test]
    fn constant_columns_are_dropped() {
        let rows: Vec<Vec<f64>> = gaussian(10, 2, 0).into_iter().map(|mut r| {
            r.insert(1, 7.0);
            r
        }).collect();
        let e = pca_embed(&rows, 2).unwrap();
        assert_eq!(e.kept, vec![0, 2]);
        assert!(pca_embed(&rows, 3).is_err());
    }

    #[test]
    fn too_few_rows() {
        assert!(pca_embed(&[vec![1.0, 2.0]], 1).is_err());
    }

    #[test]
    fn leading_loading_is_positive() {
        let e = pca_embed(&gaussian(50, 5, 9), 2).unwrap();
        for v in &e.components {
            let lead = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(lead > 0.0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn components_orthonormal_and_fractions_bounded(seed in any::<u64>(), n in 5usize..60, d in 2usize..8) {
            let rows = gaussian(n, d, seed);
            let e = pca_embed(&rows, d).unwrap();
            for (i, a) in e.components.iter().enumerate() {
                for (j, b) in e.components.iter().enumerate() {
                    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((dot - want).abs() < 1e-10);
                }
            }
            prop_assert!(e.explained.iter().sum::<f64>() <= 1.0 + 1e-12);
            prop_assert!(reconstruction_error(&rows).unwrap() <= 1e-8);
        }
    }
}
