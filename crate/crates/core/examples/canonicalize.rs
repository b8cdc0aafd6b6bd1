//! Parse an edge list and reduce it to the form every measure sees.
//!
//! cargo run --example canonicalize

use netdomain::graph::{canonicalize, detect_bipartite, parse_edge_str, CanonicalizeOptions, ProjectOnto};

fn main() -> netdomain::Result<()> {
    // A self loop, a duplicate edge and a detached pair.
    let text = "# authors and papers\n\
                alice p1\nbob p1\nbob p2\ncarol p2\ncarol p3\ndave p3\n\
                alice alice\nbob p1\n\
                x y\n";
    let raw = parse_edge_str(text)?;
    println!("raw: {} nodes, {} edge lines", raw.node_count(), raw.edges.len());

    let plain = canonicalize(&raw, CanonicalizeOptions::default())?;
    println!(
        "giant component: {} nodes, {} edges",
        plain.graph.node_count(),
        plain.graph.edge_count()
    );
    let parts = detect_bipartite(&plain.graph).expect("author/paper graph is bipartite");
    println!("bipartite sides: {:?}", parts.side_of);

    let projected = canonicalize(
        &raw,
        CanonicalizeOptions {
            project: Some(ProjectOnto::Larger),
            auto_project: false,
        },
    )?;
    println!("projected onto {:?}:", projected.projected.unwrap());
    print!("{}", projected.graph.to_edge_list());
    Ok(())
}
