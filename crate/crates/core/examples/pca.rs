//! Standardized PCA embedding of feature rows.
//!
//! cargo run --example pca

use netdomain::pca::pca_embed;
use netdomain::seed;
use rand::Rng;

fn main() -> netdomain::Result<()> {
    let mut rng = seed::rng(9, &[]);
    let rows: Vec<Vec<f64>> = (0..100)
        .map(|_| {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            vec![a, 1000.0 * a + b, b, 7.0]
        })
        .collect();
    let e = pca_embed(&rows, 2)?;
    println!("kept columns {:?}", e.kept);
    println!("explained {:?}", e.explained);
    for (i, c) in e.components.iter().enumerate() {
        println!("component {i}: {c:?}");
    }
    println!("first row at {:?}", e.coordinates[0]);
    Ok(())
}
