//! Pearson then Spearman deduplication of one domain's features.
//!
//! cargo run --example correlation_filter

use netdomain::correlation::{filter_domain, pearson, spearman, DEFAULT_THRESHOLD};
use netdomain::dataset::FeatureMatrix;
use netdomain::seed;
use rand::Rng;

fn main() -> netdomain::Result<()> {
    let mut rng = seed::rng(3, &[]);
    let n = 40;
    let base: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    let other: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    // Linear copy, monotone (but not linear) copy, independent feature.
    let cols = [
        ("size", base.clone()),
        ("size_scaled", base.iter().map(|x| 3.0 * x + 1.0).collect::<Vec<_>>()),
        ("size_exp", base.iter().map(|x| (8.0 * x).exp()).collect()),
        ("other", other),
    ];
    println!(
        "size vs size_exp: pearson {:.3}, spearman {:.3}",
        pearson(&cols[0].1, &cols[2].1).unwrap(),
        spearman(&cols[0].1, &cols[2].1).unwrap()
    );

    let m = FeatureMatrix::new(
        (0..n).map(|i| format!("n{i}")).collect(),
        vec!["d".into(); n],
        cols.iter().map(|c| c.0.to_string()).collect(),
        (0..n).map(|r| cols.iter().map(|c| Some(c.1[r])).collect()).collect(),
    )?;
    let rows: Vec<usize> = (0..n).collect();
    let report = filter_domain(&m, "d", &rows, &[0, 1, 2, 3], DEFAULT_THRESHOLD)?;
    println!("retained: {:?}", report.retained);
    for r in &report.removed {
        println!("removed {} ({:?} {:.3} with {})", r.feature, r.method, r.coefficient, r.partner);
    }
    Ok(())
}
