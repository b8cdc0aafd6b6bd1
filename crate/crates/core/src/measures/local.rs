//! Degree, triangle and neighbourhood measures.

use super::budget::Halt;
use super::Ctx;
use crate::graph::Graph;

pub(crate) fn degrees(g: &Graph) -> Vec<f64> {
    (0..g.node_count()).map(|v| g.degree(v) as f64).collect()
}

pub(crate) fn density(g: &Graph) -> Result<f64, Halt> {
    let n = g.node_count();
    if n < 2 {
        return Err(Halt::UndefinedOnGraph);
    }
    Ok(2.0 * g.edge_count() as f64 / (n * (n - 1)) as f64)
}

fn common_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Triangles through each node.
pub(crate) fn node_triangles(g: &Graph, ctx: &mut Ctx) -> Result<Vec<u64>, Halt> {
    let n = g.node_count();
    let mut tri = vec![0u64; n];
    for u in 0..n {
        ctx.deadline.check()?;
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v as usize > u) {
            let nv = g.neighbors(v as usize);
            // Count w > v adjacent to both, so each triangle is seen once.
            let start_u = nu.partition_point(|&x| x <= v);
            let start_v = nv.partition_point(|&x| x <= v);
            for w in common(&nu[start_u..], &nv[start_v..]) {
                tri[u] += 1;
                tri[v as usize] += 1;
                tri[w as usize] += 1;
            }
        }
    }
    Ok(tri)
}

fn common<'a>(a: &'a [u32], b: &'a [u32]) -> impl Iterator<Item = u32> + 'a {
    let mut i = 0;
    let mut j = 0;
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let x = a[i];
                    i += 1;
                    j += 1;
                    return Some(x);
                }
            }
        }
        None
    })
}

pub(crate) fn triangle_count(g: &Graph, ctx: &mut Ctx) -> Result<f64, Halt> {
    let total: u64 = node_triangles(g, ctx)?.iter().sum();
    Ok((total / 3) as f64)
}

/// `3 · triangles / connected triples`; 0 when there are no triples.
pub(crate) fn transitivity(g: &Graph, ctx: &mut Ctx) -> Result<f64, Halt> {
    let total: u64 = node_triangles(g, ctx)?.iter().sum();
    let triples: u64 = (0..g.node_count())
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        return Ok(0.0);
    }
    Ok(total as f64 / triples as f64)
}

/// Local clustering; nodes of degree < 2 get 0.
pub(crate) fn local_clustering(g: &Graph, ctx: &mut Ctx) -> Result<Vec<f64>, Halt> {
    let tri = node_triangles(g, ctx)?;
    Ok((0..g.node_count())
        .map(|v| {
            let d = g.degree(v) as u64;
            if d < 2 {
                0.0
            } else {
                2.0 * tri[v] as f64 / (d * (d - 1)) as f64
            }
        })
        .collect())
}

/// Pearson correlation of endpoint degrees over both orientations of every
/// edge. Zero degree variance (regular graphs) is reported as 0.
pub(crate) fn degree_assortativity(g: &Graph) -> Result<f64, Halt> {
    if g.edge_count() == 0 {
        return Err(Halt::UndefinedOnGraph);
    }
    // Integer sums are exact; both orientations make the x and y marginals equal.
    let (mut s1, mut s2, mut sxy) = (0i128, 0i128, 0i128);
    for (u, v) in g.edges() {
        let (du, dv) = (g.degree(u) as i128, g.degree(v) as i128);
        s1 += du + dv;
        s2 += du * du + dv * dv;
        sxy += 2 * du * dv;
    }
    let m2 = 2 * g.edge_count() as i128;
    let var = m2 * s2 - s1 * s1;
    if var == 0 {
        return Ok(0.0);
    }
    let cov = m2 * sxy - s1 * s1;
    Ok(cov as f64 / var as f64)
}

pub(crate) fn average_neighbor_degree(g: &Graph) -> Result<Vec<f64>, Halt> {
    (0..g.node_count())
        .map(|v| {
            let nbrs = g.neighbors(v);
            if nbrs.is_empty() {
                return Err(Halt::UndefinedOnGraph);
            }
            let total: usize = nbrs.iter().map(|&w| g.degree(w as usize)).sum();
            Ok(total as f64 / nbrs.len() as f64)
        })
        .collect()
}

/// Common-neighbour count of each edge, in [`Graph::edges`] order.
pub(crate) fn edge_embeddedness(g: &Graph, ctx: &mut Ctx) -> Result<Vec<f64>, Halt> {
    if g.edge_count() == 0 {
        return Err(Halt::UndefinedOnGraph);
    }
    let mut out = Vec::with_capacity(g.edge_count());
    for u in 0..g.node_count() {
        ctx.deadline.check()?;
        for &v in g.neighbors(u).iter().filter(|&&v| v as usize > u) {
            out.push(common_count(g.neighbors(u), g.neighbors(v as usize)) as f64);
        }
    }
    Ok(out)
}
