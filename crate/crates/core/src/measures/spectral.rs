//! Power-iteration measures.

use super::budget::Halt;
use super::Ctx;
use crate::graph::Graph;

/// Max-norm change between iterates at which iteration stops. The error left
/// is about `TOLERANCE · r / (1 - r)` for convergence rate `r`, so this sits
/// well below the accuracy wanted from the result.
pub(crate) const TOLERANCE: f64 = 1e-13;
pub(crate) const MAX_ITERATIONS: usize = 100_000;
pub(crate) const DAMPING: f64 = 0.85;

/// Leading eigenpair of the adjacency matrix.
///
/// Iterates on `A + I`: for a connected graph that matrix is primitive, so
/// the iteration converges even when `A` is bipartite (where `-λ` is also an
/// eigenvalue). The eigenvalue is the Rayleigh quotient of the converged
/// vector, which is accurate to the square of the vector error.
pub(crate) fn perron(g: &Graph, ctx: &Ctx) -> Result<(f64, Vec<f64>), Halt> {
    let n = g.node_count();
    if n == 0 {
        return Err(Halt::UndefinedOnGraph);
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    for iter in 0..MAX_ITERATIONS {
        if iter % 16 == 0 {
            ctx.deadline.check()?;
        }
        for v in 0..n {
            next[v] = x[v] + g.neighbors(v).iter().map(|&w| x[w as usize]).sum::<f64>();
        }
        let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
        let mut change = 0.0f64;
        for v in 0..n {
            next[v] /= norm;
            change = change.max((next[v] - x[v]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        if change <= TOLERANCE {
            let mut ax = 0.0;
            for v in 0..n {
                ax += x[v] * g.neighbors(v).iter().map(|&w| x[w as usize]).sum::<f64>();
            }
            return Ok((ax, x));
        }
    }
    Err(Halt::UndefinedOnGraph)
}

pub(crate) fn spectral_radius(g: &Graph, ctx: &Ctx) -> Result<f64, Halt> {
    perron(g, ctx).map(|(lambda, _)| lambda)
}

/// Unit-L2, non-negative principal eigenvector.
pub(crate) fn eigenvector_centrality(g: &Graph, ctx: &Ctx) -> Result<Vec<f64>, Halt> {
    perron(g, ctx).map(|(_, x)| x)
}

/// PageRank with uniform teleport; dangling mass is spread uniformly.
pub(crate) fn pagerank(g: &Graph, ctx: &Ctx) -> Result<Vec<f64>, Halt> {
    let n = g.node_count();
    if n == 0 {
        return Err(Halt::UndefinedOnGraph);
    }
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut share = vec![0.0; n];
    for iter in 0..MAX_ITERATIONS {
        if iter % 16 == 0 {
            ctx.deadline.check()?;
        }
        let mut dangling = 0.0;
        for v in 0..n {
            let d = g.degree(v);
            if d == 0 {
                dangling += x[v];
                share[v] = 0.0;
            } else {
                share[v] = x[v] / d as f64;
            }
        }
        let base = (1.0 - DAMPING) / nf + DAMPING * dangling / nf;
        let mut change = 0.0f64;
        for v in 0..n {
            let inflow: f64 = g.neighbors(v).iter().map(|&w| share[w as usize]).sum();
            next[v] = base + DAMPING * inflow;
            change = change.max((next[v] - x[v]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        if change <= TOLERANCE {
            return Ok(x);
        }
    }
    Err(Halt::UndefinedOnGraph)
}
