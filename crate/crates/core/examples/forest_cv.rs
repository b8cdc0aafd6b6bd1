//! Cross-validated F1 of a shallow balanced forest on an imbalanced task.
//!
//! cargo run --example forest_cv

use netdomain::forest::{evaluate, fit_forest, stratified_kfold_indices, CvConfig, ForestParams};
use netdomain::seed;
use rand::seq::SliceRandom;
use rand::Rng;

fn main() -> netdomain::Result<()> {
    let mut rng = seed::rng(4, &[]);
    let mut rows: Vec<(f64, f64, bool)> = (0..200)
        .map(|i| {
            let pos = i < 25;
            let x = if pos { rng.random_range(0.55..1.0) } else { rng.random_range(0.0..0.5) };
            (x, rng.random_range(0.0..1.0), pos)
        })
        .collect();
    rows.shuffle(&mut rng);
    let x: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let noise: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let labels: Vec<bool> = rows.iter().map(|r| r.2).collect();
    let columns: Vec<&[f64]> = vec![&x, &noise];

    let params = ForestParams::default();
    let cv = CvConfig { seed: 1, ..CvConfig::default() };
    for (name, subset) in [("x", vec![0]), ("noise", vec![1]), ("x+noise", vec![0, 1])] {
        let s = evaluate(&columns, &labels, &subset, &cv, &params)?;
        println!("{name:<8} mean F1 {:.3} over {} folds", s.mean, s.folds.len());
    }

    let splits = stratified_kfold_indices(&labels, cv.folds, cv.repeats, cv.seed)?;
    let forest = fit_forest(&columns, &labels, &splits[0].train, &params, 9)?;
    let deepest = forest.trees.iter().map(|t| t.depth()).max().unwrap_or(0);
    println!("{} trees, deepest {deepest}", forest.trees.len());
    let ids = ["x".to_string(), "noise".to_string()];
    let first = &forest.export(&ids)["trees"][0];
    println!("first tree: {}", serde_json::to_string(first).unwrap());
    Ok(())
}
