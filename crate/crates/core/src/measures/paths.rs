//! Distance-based measures: eccentricity, closeness, efficiency and
//! betweenness (Brandes). Exact from every source up to
//! [`Ctx::exact_limit`] nodes, otherwise from a seeded uniform sample of
//! sources.

use std::collections::VecDeque;

use rand::seq::index::sample;

use super::budget::Halt;
use super::Ctx;
use crate::graph::Graph;
use crate::seed;

pub(crate) fn sources(g: &Graph, ctx: &mut Ctx, stream: &str) -> Vec<usize> {
    let n = g.node_count();
    if n <= ctx.exact_limit {
        return (0..n).collect();
    }
    ctx.sampled = true;
    let mut rng = seed::rng(ctx.seed, &[seed::key(stream)]);
    let mut picked = sample(&mut rng, n, ctx.sample_sources.min(n)).into_vec();
    picked.sort_unstable();
    picked
}

/// BFS distances from `s`; unreachable nodes stay at `u32::MAX`.
pub(crate) fn bfs(g: &Graph, s: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) {
    dist.fill(u32::MAX);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        let d = dist[v] + 1;
        for &w in g.neighbors(v) {
            let w = w as usize;
            if dist[w] == u32::MAX {
                dist[w] = d;
                queue.push_back(w);
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct SourceStats {
    pub eccentricity: u32,
    pub distance_sum: u64,
    pub inverse_sum: f64,
}

/// One BFS per source (connected graphs only).
pub(crate) fn source_stats(g: &Graph, ctx: &mut Ctx, stream: &str) -> Result<Vec<SourceStats>, Halt> {
    let n = g.node_count();
    let srcs = sources(g, ctx, stream);
    let mut dist = vec![0u32; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut out = Vec::with_capacity(srcs.len());
    for s in srcs {
        ctx.deadline.check()?;
        bfs(g, s, &mut dist, &mut queue);
        let mut ecc = 0;
        let mut sum = 0u64;
        let mut inv = 0.0;
        for (v, &d) in dist.iter().enumerate() {
            if d == u32::MAX {
                return Err(Halt::UndefinedOnGraph);
            }
            if v != s {
                ecc = ecc.max(d);
                sum += d as u64;
                inv += 1.0 / d as f64;
            }
        }
        out.push(SourceStats {
            eccentricity: ecc,
            distance_sum: sum,
            inverse_sum: inv,
        });
    }
    Ok(out)
}

pub(crate) fn eccentricities(g: &Graph, ctx: &mut Ctx) -> Result<Vec<f64>, Halt> {
    Ok(source_stats(g, ctx, "eccentricity")?
        .iter()
        .map(|s| s.eccentricity as f64)
        .collect())
}

pub(crate) fn diameter(g: &Graph, ctx: &mut Ctx) -> Result<f64, Halt> {
    let stats = source_stats(g, ctx, "eccentricity")?;
    Ok(stats.iter().map(|s| s.eccentricity).max().unwrap_or(0) as f64)
}

pub(crate) fn radius(g: &Graph, ctx: &mut Ctx) -> Result<f64, Halt> {
    let stats = source_stats(g, ctx, "eccentricity")?;
    Ok(stats.iter().map(|s| s.eccentricity).min().unwrap_or(0) as f64)
}

pub(crate) fn average_shortest_path(g: &Graph, ctx: &mut Ctx) -> Result<f64, Halt> {
    let n = g.node_count();
    if n < 2 {
        return Err(Halt::UndefinedOnGraph);
    }
    let stats = source_stats(g, ctx, "distances")?;
    let total: u64 = stats.iter().map(|s| s.distance_sum).sum();
    Ok(total as f64 / (stats.len() * (n - 1)) as f64)
}

pub(crate) fn global_efficiency(g: &Graph, ctx: &mut Ctx) -> Result<f64, Halt> {
    let n = g.node_count();
    if n < 2 {
        return Err(Halt::UndefinedOnGraph);
    }
    let stats = source_stats(g, ctx, "distances")?;
    let mut inv: Vec<f64> = stats.iter().map(|s| s.inverse_sum).collect();
    inv.sort_by(f64::total_cmp);
    Ok(inv.iter().sum::<f64>() / (stats.len() * (n - 1)) as f64)
}

/// Closeness `(n - 1) / Σ d(v, u)`, per (sampled) node.
pub(crate) fn closeness(g: &Graph, ctx: &mut Ctx) -> Result<Vec<f64>, Halt> {
    let n = g.node_count();
    if n < 2 {
        return Err(Halt::UndefinedOnGraph);
    }
    Ok(source_stats(g, ctx, "distances")?
        .iter()
        .map(|s| (n - 1) as f64 / s.distance_sum as f64)
        .collect())
}

/// Single-source shortest-path DAG for Brandes' accumulation.
struct Sssp {
    order: Vec<usize>,
    sigma: Vec<f64>,
    dist: Vec<u32>,
    queue: VecDeque<usize>,
    delta: Vec<f64>,
}

impl Sssp {
    fn new(n: usize) -> Self {
        Sssp {
            order: Vec::with_capacity(n),
            sigma: vec![0.0; n],
            dist: vec![u32::MAX; n],
            queue: VecDeque::with_capacity(n),
            delta: vec![0.0; n],
        }
    }

    fn run(&mut self, g: &Graph, s: usize) {
        self.order.clear();
        self.sigma.fill(0.0);
        self.dist.fill(u32::MAX);
        self.delta.fill(0.0);
        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let dv = self.dist[v];
            for &w in g.neighbors(v) {
                let w = w as usize;
                if self.dist[w] == u32::MAX {
                    self.dist[w] = dv + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == dv + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
    }
}

/// Node betweenness as raw unordered-pair counts (no normalization).
pub(crate) fn betweenness(g: &Graph, ctx: &mut Ctx) -> Result<Vec<f64>, Halt> {
    let n = g.node_count();
    let srcs = sources(g, ctx, "betweenness");
    let mut scores = vec![0.0; n];
    let mut sp = Sssp::new(n);
    for &s in &srcs {
        ctx.deadline.check()?;
        sp.run(g, s);
        for &w in sp.order.iter().rev() {
            let dw = sp.dist[w];
            let coeff = (1.0 + sp.delta[w]) / sp.sigma[w];
            for &v in g.neighbors(w) {
                let v = v as usize;
                if sp.dist[v] != u32::MAX && sp.dist[v] + 1 == dw {
                    sp.delta[v] += sp.sigma[v] * coeff;
                }
            }
            if w != s {
                scores[w] += sp.delta[w];
            }
        }
    }
    // Each unordered pair is seen from both endpoints.
    let scale = n as f64 / srcs.len().max(1) as f64 / 2.0;
    scores.iter_mut().for_each(|x| *x *= scale);
    Ok(scores)
}

/// Edge betweenness as raw unordered-pair counts, in [`Graph::edges`] order.
pub(crate) fn edge_betweenness(g: &Graph, ctx: &mut Ctx) -> Result<Vec<f64>, Halt> {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Err(Halt::UndefinedOnGraph);
    }
    let index = edge_index(g);
    let srcs = sources(g, ctx, "edge_betweenness");
    let mut scores = vec![0.0; g.edge_count()];
    let mut sp = Sssp::new(n);
    for &s in &srcs {
        ctx.deadline.check()?;
        sp.run(g, s);
        for &w in sp.order.iter().rev() {
            let dw = sp.dist[w];
            let coeff = (1.0 + sp.delta[w]) / sp.sigma[w];
            for (i, &v) in g.neighbors(w).iter().enumerate() {
                let v = v as usize;
                if sp.dist[v] != u32::MAX && sp.dist[v] + 1 == dw {
                    let c = sp.sigma[v] * coeff;
                    scores[index[w][i]] += c;
                    sp.delta[v] += c;
                }
            }
        }
    }
    let scale = n as f64 / srcs.len().max(1) as f64 / 2.0;
    scores.iter_mut().for_each(|x| *x *= scale);
    Ok(scores)
}

/// `index[u][i]` = position of edge `{u, neighbors(u)[i]}` in
/// [`Graph::edges`] order.
pub(crate) fn edge_index(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut index: Vec<Vec<usize>> = (0..n).map(|v| vec![0; g.degree(v)]).collect();
    let mut next = 0;
    for u in 0..n {
        for (i, &v) in g.neighbors(u).iter().enumerate() {
            let v = v as usize;
            if u < v {
                index[u][i] = next;
                let j = g.neighbors(v).binary_search(&(u as u32)).unwrap();
                index[v][j] = next;
                next += 1;
            }
        }
    }
    index
}
