//! Compute the full feature vector of a few synthetic graphs, then one
//! measure on its own with a tight budget.
//!
//! cargo run --example measures

use netdomain::measures::{run_measure, Budget, BudgetPlan, Registry};
use netdomain::seed;
use netdomain::synthetic::{grid, random_tree};

fn main() -> netdomain::Result<()> {
    let registry = Registry::core();
    let columns = registry.feature_columns();
    println!("{} measures, {} columns", registry.catalog().len(), columns.len());

    let mut rng = seed::rng(1, &[]);
    let graphs = [("grid 8x8", grid(8, 8)), ("tree 64", random_tree(64, &mut rng))];
    for (name, g) in &graphs {
        let fv = registry.compute_feature_vector(g, &BudgetPlan::default(), 42);
        println!("\n{name}: {} missing", fv.missing_count());
        for (col, value) in columns.iter().zip(&fv.values) {
            if !col.contains('.') {
                match value {
                    Some(v) => println!("  {col:<28} {v:.6}"),
                    None => println!("  {col:<28} -"),
                }
            }
        }
    }

    // Memory below what the clique search needs: the value goes missing
    // with a reason instead of failing the run.
    let tight = Budget::new(5.0, 64)?;
    let out = run_measure(&graphs[0].1, "maximal_clique_count", tight, 0)?;
    println!("\nmaximal_clique_count under 64 bytes: {:?}", out.result);
    Ok(())
}
