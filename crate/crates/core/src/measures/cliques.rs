//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting over a
//! degeneracy ordering).

use super::budget::Halt;
use super::Ctx;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct CliqueStats {
    pub maximal: u64,
    pub largest: usize,
}

struct Search<'a> {
    g: &'a Graph,
    ctx: &'a Ctx,
    stats: CliqueStats,
    calls: u64,
}

impl Search<'_> {
    fn expand(&mut self, depth: usize, p: Vec<u32>, x: Vec<u32>) -> Result<(), Halt> {
        self.calls += 1;
        if self.calls & 0xff == 0 {
            self.ctx.deadline.check()?;
        }
        if p.is_empty() {
            if x.is_empty() {
                self.stats.maximal += 1;
                self.stats.largest = self.stats.largest.max(depth);
            }
            return Ok(());
        }
        // Pivot: vertex of P ∪ X with most neighbours in P.
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| intersect(&p, self.g.neighbors(u as usize)).len())
            .unwrap();
        let pivot_nbrs = self.g.neighbors(pivot as usize);
        let candidates: Vec<u32> = p
            .iter()
            .copied()
            .filter(|v| pivot_nbrs.binary_search(v).is_err())
            .collect();
        let mut p = p;
        let mut x = x;
        for v in candidates {
            let nv = self.g.neighbors(v as usize);
            self.expand(depth + 1, intersect(&p, nv), intersect(&x, nv))?;
            p.retain(|&w| w != v);
            let at = x.partition_point(|&w| w < v);
            x.insert(at, v);
        }
        Ok(())
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Degeneracy ordering by repeated minimum-degree removal.
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<(usize, usize)>> =
        (0..n).map(|v| std::cmp::Reverse((degree[v], v))).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
        if removed[v] || d != degree[v] {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            let u = u as usize;
            if !removed[u] {
                degree[u] -= 1;
                heap.push(std::cmp::Reverse((degree[u], u)));
            }
        }
    }
    order
}

pub(crate) fn clique_stats(g: &Graph, ctx: &Ctx) -> Result<CliqueStats, Halt> {
    let n = g.node_count();
    if n == 0 {
        return Err(Halt::UndefinedOnGraph);
    }
    let order = degeneracy_order(g);
    let mut rank = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut search = Search {
        g,
        ctx,
        stats: CliqueStats::default(),
        calls: 0,
    };
    for &v in &order {
        ctx.deadline.check()?;
        let (later, earlier): (Vec<u32>, Vec<u32>) = g
            .neighbors(v)
            .iter()
            .partition(|&&u| rank[u as usize] > rank[v]);
        search.expand(1, later, earlier)?;
    }
    Ok(search.stats)
}
