//! Two features that are useless alone but decisive together.
//!
//! cargo run --example xor

use netdomain::forest::{CvConfig, ForestParams};
use netdomain::selection::Task;
use netdomain::synthetic::xor_fixture;

fn main() -> netdomain::Result<()> {
    let fx = xor_fixture(606);
    let task = Task::from_columns(
        "xor",
        fx.feature_ids,
        fx.columns,
        fx.labels,
        CvConfig::default(),
        ForestParams::default(),
    )?;
    for s in task.rank_singletons()? {
        println!("{{{}}} mean F1 {:.3}", s.features.join(", "), s.mean);
    }
    let pair = task.evaluate_named(&["x", "y"])?;
    println!("{{{}}} mean F1 {:.3}", pair.features.join(", "), pair.mean);
    Ok(())
}
