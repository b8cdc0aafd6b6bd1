//! Forward selection of singlets, pairs and triplets for one target domain.
//!
//! cargo run --release --example selection

use netdomain::dataset::FeatureMatrix;
use netdomain::forest::{CvConfig, ForestParams};
use netdomain::seed;
use netdomain::selection::{select_domain, SelectionOptions};
use rand::Rng;

fn main() -> netdomain::Result<()> {
    let mut rng = seed::rng(5, &[]);
    let (n, p) = (150, 12);
    // f00 and f01 shift for the target; f02 is a noisy copy of f00.
    let domains: Vec<String> = (0..n).map(|i| if i % 5 == 0 { "target" } else { "rest" }.into()).collect();
    let rows: Vec<Vec<Option<f64>>> = (0..n)
        .map(|i| {
            let hit = i % 5 == 0;
            let mut r: Vec<f64> = (0..p).map(|_| rng.random_range(0.0..1.0)).collect();
            if hit {
                r[0] += 0.6;
                r[1] += 0.4;
            }
            r[2] = r[0] + rng.random_range(-0.05..0.05);
            r.into_iter().map(Some).collect()
        })
        .collect();
    let m = FeatureMatrix::new(
        (0..n).map(|i| format!("n{i:03}")).collect(),
        domains,
        (0..p).map(|c| format!("f{c:02}")).collect(),
        rows,
    )?;

    let all: Vec<usize> = (0..n).collect();
    let pool: Vec<usize> = (0..p).collect();
    let candidates: Vec<usize> = pool.iter().copied().filter(|&c| c != 2).collect();
    let options = SelectionOptions { top_k: 8, ..SelectionOptions::default() };
    let params = ForestParams { n_trees: 30, ..ForestParams::default() };
    let r = select_domain(&m, "target", &all, &candidates, &pool, CvConfig::default(), params, &options)?;

    println!("{} positives, {} negatives, {} model fits", r.positives, r.negatives, r.model_fits);
    println!("finalists: {:?}", r.finalists);
    for size in 1..=3 {
        let b = r.best_of_size(size).unwrap();
        println!("best of size {size}: {{{}}} {:.3}", b.features.join(", "), b.mean);
    }
    println!("winner: {{{}}} {:.3}", r.winner.features.join(", "), r.winner.mean);
    println!("alternates: {:?}", r.alternates);
    if let Some(o) = &r.overlap {
        println!("pair/triplet overlap {:.1}% of {} candidates", o.percent, o.candidates);
    }
    Ok(())
}
