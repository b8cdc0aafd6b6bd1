//! Brute-force reference values for every core measure on small graphs.
//!
//! Everything here works from a dense adjacency matrix and exhaustive
//! enumeration, sharing no code with the library's algorithms.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use netdomain::graph::Graph;
use rand::Rng;

const INF: usize = usize::MAX / 4;

pub enum Expected {
    Int(f64),
    Float(f64),
    Ints(Vec<f64>),
    Floats(Vec<f64>),
}

pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
    /// Edges as `(u, v)` with `u < v`, in row-major order.
    pub edges: Vec<(usize, usize)>,
}

impl Dense {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        let mut list = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if adj[u][v] {
                    list.push((u, v));
                }
            }
        }
        Dense { n, adj, edges: list }
    }

    pub fn graph(&self) -> Graph {
        let e: Vec<(u32, u32)> = self.edges.iter().map(|&(u, v)| (u as u32, v as u32)).collect();
        Graph::from_edges(self.n, &e)
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&b| b).count()
    }

    fn distances(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut d = vec![vec![INF; n]; n];
        for u in 0..n {
            d[u][u] = 0;
            for v in 0..n {
                if self.adj[u][v] {
                    d[u][v] = 1;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    /// Every shortest path between each unordered pair, as node lists.
    fn shortest_paths(&self, d: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for s in 0..self.n {
            for t in s + 1..self.n {
                let mut paths = Vec::new();
                let mut stack = vec![vec![s]];
                while let Some(p) = stack.pop() {
                    let last = *p.last().unwrap();
                    if last == t {
                        paths.push(p);
                        continue;
                    }
                    if p.len() - 1 == d[s][t] {
                        continue;
                    }
                    for w in 0..self.n {
                        if self.adj[last][w] && !p.contains(&w) {
                            let mut q = p.clone();
                            q.push(w);
                            stack.push(q);
                        }
                    }
                }
                out.push(paths);
            }
        }
        out
    }

    fn triangles(&self) -> Vec<f64> {
        let n = self.n;
        let mut t = vec![0.0; n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if self.adj[a][b] && self.adj[b][c] && self.adj[a][c] {
                        t[a] += 1.0;
                        t[b] += 1.0;
                        t[c] += 1.0;
                    }
                }
            }
        }
        t
    }

    fn subsets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (1u32..1 << self.n).map(move |mask| (0..self.n).filter(|&i| mask >> i & 1 == 1).collect())
    }

    fn is_clique(&self, s: &[usize]) -> bool {
        s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| self.adj[a][b]))
    }

    /// Largest k such that v lies in a subgraph of minimum degree k.
    fn core_numbers(&self) -> Vec<f64> {
        let mut core = vec![0usize; self.n];
        for s in self.subsets() {
            let min_deg = s
                .iter()
                .map(|&a| s.iter().filter(|&&b| self.adj[a][b]).count())
                .min()
                .unwrap();
            for &v in &s {
                core[v] = core[v].max(min_deg);
            }
        }
        core.into_iter().map(|c| c as f64).collect()
    }

    fn adjacency_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| if self.adj[i][j] { 1.0 } else { 0.0 })
    }

    /// Leading eigenpair from a full symmetric eigendecomposition.
    fn perron(&self) -> (f64, Vec<f64>) {
        let eig = SymmetricEigen::new(self.adjacency_matrix());
        let (k, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
        if v.iter().sum::<f64>() < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        (eig.eigenvalues[k], v)
    }

    /// Stationary vector of the damped walk, by a direct linear solve.
    fn pagerank(&self, damping: f64) -> Vec<f64> {
        let n = self.n;
        let mut m = DMatrix::<f64>::identity(n, n);
        for j in 0..n {
            let d = self.degree(j) as f64;
            for i in 0..n {
                if self.adj[i][j] {
                    m[(i, j)] -= damping / d;
                }
            }
        }
        let b = DVector::from_element(n, (1.0 - damping) / n as f64);
        m.lu().solve(&b).unwrap().iter().copied().collect()
    }

    /// Reference value of one catalog measure.
    pub fn expected(&self, id: &str) -> Expected {
        let n = self.n;
        let nf = n as f64;
        let m = self.edges.len();
        let deg: Vec<f64> = (0..n).map(|v| self.degree(v) as f64).collect();
        let pairs = (n * (n - 1)) as f64;
        match id {
            "node_count" => Expected::Int(nf),
            "edge_count" => Expected::Int(m as f64),
            "density" => Expected::Float(2.0 * m as f64 / pairs),
            "transitivity" => {
                let closed: f64 = self.triangles().iter().sum();
                let triples: f64 = deg.iter().map(|d| d * (d - 1.0) / 2.0).sum();
                Expected::Float(if triples == 0.0 { 0.0 } else { closed / triples })
            }
            "degree_assortativity" => {
                // Newman's r = (Σjk/M − (Σ(j+k)/2M)²) / (Σ(j²+k²)/2M − (Σ(j+k)/2M)²),
                // scaled by 4M² so every term is an integer.
                let big_m = m as i128;
                let (mut jk, mut sum, mut sq) = (0i128, 0i128, 0i128);
                for &(u, v) in &self.edges {
                    let (j, k) = (deg[u] as i128, deg[v] as i128);
                    jk += j * k;
                    sum += j + k;
                    sq += j * j + k * k;
                }
                let num = 4 * big_m * jk - sum * sum;
                let den = 2 * big_m * sq - sum * sum;
                Expected::Float(if den == 0 { 0.0 } else { num as f64 / den as f64 })
            }
            "triangle_count" => Expected::Int(self.triangles().iter().sum::<f64>() / 3.0),
            "max_core_number" => Expected::Int(self.core_numbers().into_iter().fold(0.0, f64::max)),
            "diameter" | "radius" | "eccentricity" => {
                let ecc: Vec<f64> = self.distances().iter().map(|r| *r.iter().max().unwrap() as f64).collect();
                match id {
                    "diameter" => Expected::Int(ecc.iter().copied().fold(0.0, f64::max)),
                    "radius" => Expected::Int(ecc.iter().copied().fold(f64::INFINITY, f64::min)),
                    _ => Expected::Ints(ecc),
                }
            }
            "average_shortest_path" => {
                let total: usize = self.distances().iter().flatten().sum();
                Expected::Float(total as f64 / pairs)
            }
            "global_efficiency" => {
                let d = self.distances();
                let mut total = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            total += 1.0 / d[i][j] as f64;
                        }
                    }
                }
                Expected::Float(total / pairs)
            }
            "closeness" => Expected::Floats(
                self.distances()
                    .iter()
                    .map(|r| (nf - 1.0) / r.iter().sum::<usize>() as f64)
                    .collect(),
            ),
            "clique_number" | "maximal_clique_count" => {
                let cliques: Vec<Vec<usize>> = self.subsets().filter(|s| self.is_clique(s)).collect();
                let sets: BTreeSet<&Vec<usize>> = cliques.iter().collect();
                if id == "clique_number" {
                    Expected::Int(cliques.iter().map(Vec::len).max().unwrap() as f64)
                } else {
                    let maximal = cliques
                        .iter()
                        .filter(|c| {
                            (0..n).filter(|v| !c.contains(v)).all(|v| {
                                let mut bigger = (*c).clone();
                                bigger.push(v);
                                bigger.sort_unstable();
                                !sets.contains(&bigger)
                            })
                        })
                        .count();
                    Expected::Int(maximal as f64)
                }
            }
            "spectral_radius" => Expected::Float(self.perron().0),
            "eigenvector_centrality" => Expected::Floats(self.perron().1),
            "pagerank" => Expected::Floats(self.pagerank(0.85)),
            "degree" => Expected::Ints(deg),
            "local_clustering" => {
                let t = self.triangles();
                Expected::Floats(
                    (0..n)
                        .map(|v| if deg[v] < 2.0 { 0.0 } else { 2.0 * t[v] / (deg[v] * (deg[v] - 1.0)) })
                        .collect(),
                )
            }
            "core_number" => Expected::Ints(self.core_numbers()),
            "node_triangles" => Expected::Ints(self.triangles()),
            "average_neighbor_degree" => Expected::Floats(
                (0..n)
                    .map(|v| {
                        let nb: Vec<usize> = (0..n).filter(|&w| self.adj[v][w]).collect();
                        nb.iter().map(|&w| deg[w]).sum::<f64>() / nb.len() as f64
                    })
                    .collect(),
            ),
            "betweenness" | "edge_betweenness" => {
                let d = self.distances();
                let mut node = vec![0.0; n];
                let mut edge = vec![0.0; m];
                for paths in self.shortest_paths(&d) {
                    let share = 1.0 / paths.len() as f64;
                    for p in &paths {
                        for &v in &p[1..p.len() - 1] {
                            node[v] += share;
                        }
                        for w in p.windows(2) {
                            let key = (w[0].min(w[1]), w[0].max(w[1]));
                            let k = self.edges.iter().position(|&e| e == key).unwrap();
                            edge[k] += share;
                        }
                    }
                }
                if id == "betweenness" {
                    Expected::Floats(node)
                } else {
                    Expected::Floats(edge)
                }
            }
            "edge_embeddedness" => Expected::Ints(
                self.edges
                    .iter()
                    .map(|&(u, v)| (0..n).filter(|&w| self.adj[u][w] && self.adj[v][w]).count() as f64)
                    .collect(),
            ),
            other => panic!("no oracle for `{other}`"),
        }
    }
}

fn connected(n: usize, adj: &[Vec<bool>]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if adj[v][w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative of every isomorphism class of connected graphs on
/// `n` nodes.
pub fn connected_graphs(n: usize) -> Vec<Dense> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << slots.len() {
        let edges: Vec<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Dense::new(n, &edges);
        if !connected(n, &g.adj) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                slots
                    .iter()
                    .enumerate()
                    .filter(|(_, &(u, v))| g.adj[p[u]][p[v]])
                    .fold(0u64, |acc, (i, _)| acc | 1 << i)
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

/// Connected G(n, p) samples.
pub fn sampled_graphs<R: Rng>(n: usize, count: usize, rng: &mut R) -> Vec<Dense> {
    let mut out = Vec::new();
    while out.len() < count {
        let p = rng.random_range(0.2..0.8);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Dense::new(n, &edges);
        if connected(n, &g.adj) {
            out.push(g);
        }
    }
    out
}
