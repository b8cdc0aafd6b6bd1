//! Missing-value, imputation and constant-feature policies on a small
//! hand-made matrix, with the audit log they leave.
//!
//! cargo run --example policies

use netdomain::dataset::{apply_policies, FeatureMatrix, PolicyConfig};

fn main() -> netdomain::Result<()> {
    // 30 networks in three domains over 10 features.
    let n = 30;
    let mut rows: Vec<Vec<Option<f64>>> = (0..n)
        .map(|r| {
            let x = r as f64;
            let mut row: Vec<Option<f64>> = (0..9).map(|c| Some(x * (c + 1) as f64 + (r % 7) as f64)).collect();
            row.push(Some(if r % 10 == 0 { 2.0 } else { 1.0 }));
            row
        })
        .collect();
    rows[3][0] = None; // imputed from the domain's interquartile range
    rows[4][1] = None;
    for c in 0..4 {
        rows[5][c] = None; // 40% missing: dropped
    }
    let domain = |r: usize| match r {
        0..=13 => "web",
        14..=25 => "road",
        _ => "tiny", // below min_domain_size: merged into `other`
    };
    let mut features: Vec<String> = (0..9).map(|c| format!("f{c}")).collect();
    features.push("flat".into());
    let m = FeatureMatrix::new(
        (0..n).map(|r| format!("net{r:02}")).collect(),
        (0..n).map(|r| domain(r).to_string()).collect(),
        features,
        rows,
    )?;

    let clean = apply_policies(&m, &PolicyConfig::default())?;
    println!("dropped networks: {:?}", clean.dropped_networks);
    println!("domains after merging: {:?}", clean.matrix.domain_rows().keys().collect::<Vec<_>>());
    for (r, c) in clean.matrix.imputed_cells() {
        println!(
            "imputed {} / {} = {}",
            clean.matrix.network_ids()[r],
            clean.matrix.feature_ids()[c],
            clean.matrix.get(r, c).unwrap()
        );
    }
    println!("\naudit:");
    for e in &clean.audit {
        println!(
            "  {:<20} {:<6} {:<5} {:<6} {}",
            e.rule.to_string(),
            e.network.as_deref().unwrap_or(""),
            e.feature.as_deref().unwrap_or(""),
            e.domain.as_deref().unwrap_or(""),
            e.detail
        );
    }
    Ok(())
}
