//! Edge-list parsing and canonicalization.
//!
//! Raw inputs are staged as a [`RawGraph`] that keeps every arc as read
//! (duplicates, self-loops, both directions). [`simplify`] turns that into a
//! simple undirected [`Graph`]; [`giant_component`] keeps the largest
//! connected piece; bipartite inputs can be replaced by a one-mode projection.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge list exactly as read, with labels mapped to contiguous ids in order
/// of first appearance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawGraph {
    pub edges: Vec<(u32, u32)>,
    pub labels: Vec<String>,
}

impl RawGraph {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Builds a raw graph from labelled arcs.
    pub fn from_labeled_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Self {
        let mut builder = LabelIndex::default();
        let edges = edges
            .iter()
            .map(|(a, b)| (builder.id(a.as_ref()), builder.id(b.as_ref())))
            .collect();
        RawGraph {
            edges,
            labels: builder.labels,
        }
    }
}

#[derive(Default)]
struct LabelIndex {
    ids: std::collections::HashMap<String, u32>,
    labels: Vec<String>,
}

impl LabelIndex {
    fn id(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len() as u32;
        self.ids.insert(label.to_owned(), id);
        self.labels.push(label.to_owned());
        id
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` are comments; tokens after the second one
/// (weights, timestamps) are ignored.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<RawGraph> {
    let mut index = LabelIndex::default();
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => {
                let (u, v) = (index.id(a), index.id(b));
                edges.push((u, v));
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected two node tokens, found `{trimmed}`"),
                })
            }
        }
    }
    if index.labels.is_empty() {
        return Err(Error::Empty("edge list has no edges".into()));
    }
    Ok(RawGraph {
        edges,
        labels: index.labels,
    })
}

pub fn parse_edge_str(text: &str) -> Result<RawGraph> {
    parse_edge_list(text.as_bytes())
}

/// Simple undirected unweighted graph with sorted adjacency lists.
///
/// Construct through [`simplify`], [`Graph::from_edges`] or the
/// canonicalization helpers; the adjacency is immutable afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    labels: Vec<String>,
    edge_count: usize,
}

impl Graph {
    /// Builds a simple graph on `n` nodes (labels `0..n`) from undirected
    /// edges; loops and duplicates are dropped.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::build(n, edges.iter().copied(), labels)
    }

    fn build(n: usize, edges: impl Iterator<Item = (u32, u32)>, labels: Vec<String>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                continue;
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        let mut twice_edges = 0;
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
            twice_edges += nbrs.len();
        }
        Graph {
            adjacency,
            labels,
            edge_count: twice_edges / 2,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Component id per node, components numbered in order of their
    /// smallest node id.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    let w = w as usize;
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.components().1 == 1
    }

    /// Induced subgraph on `nodes` (re-indexed in the given order).
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut new_id = vec![u32::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            new_id[v] = i as u32;
        }
        let labels = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges()
            .filter(|&(u, v)| new_id[u] != u32::MAX && new_id[v] != u32::MAX)
            .map(|(u, v)| (new_id[u], new_id[v]))
            .collect::<Vec<_>>();
        Graph::build(nodes.len(), edges.into_iter(), labels)
    }

    /// Same graph with node `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        let n = self.node_count();
        let mut labels = vec![String::new(); n];
        for v in 0..n {
            labels[perm[v]] = self.labels[v].clone();
        }
        let edges = self
            .edges()
            .map(|(u, v)| (perm[u] as u32, perm[v] as u32))
            .collect::<Vec<_>>();
        Graph::build(n, edges.into_iter(), labels)
    }

    /// Writes the graph as an edge list with original labels; isolated nodes
    /// are not representable and are lost.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&self.labels[u]);
            out.push(' ');
            out.push_str(&self.labels[v]);
            out.push('\n');
        }
        out
    }
}

/// Drops direction, duplicates and self-loops. Isolated nodes are kept.
pub fn simplify(raw: &RawGraph) -> Graph {
    Graph::build(
        raw.node_count(),
        raw.edges.iter().copied(),
        raw.labels.clone(),
    )
}

/// Orders labels numerically when both parse as integers, otherwise by
/// string; integers sort before non-integers.
pub fn compare_labels(a: &str, b: &str) -> Ordering {
    match (a.parse::<i128>(), b.parse::<i128>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Induced subgraph on the largest connected component.
///
/// Ties on size go to the component holding the smallest original label
/// (see [`compare_labels`]). Nodes keep their relative order.
pub fn giant_component(g: &Graph) -> Result<Graph> {
    if g.node_count() == 0 {
        return Err(Error::Empty("graph has no nodes".into()));
    }
    let (comp, count) = g.components();
    let mut size = vec![0usize; count];
    let mut min_label: Vec<Option<usize>> = vec![None; count];
    for v in 0..g.node_count() {
        let c = comp[v];
        size[c] += 1;
        min_label[c] = match min_label[c] {
            Some(w) if compare_labels(g.label(w), g.label(v)) != Ordering::Greater => Some(w),
            _ => Some(v),
        };
    }
    let best = (0..count)
        .max_by(|&a, &b| {
            size[a].cmp(&size[b]).then_with(|| {
                let la = g.label(min_label[a].unwrap());
                let lb = g.label(min_label[b].unwrap());
                compare_labels(lb, la)
            })
        })
        .unwrap();
    let nodes: Vec<usize> = (0..g.node_count()).filter(|&v| comp[v] == best).collect();
    Ok(g.induced(&nodes))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Which side of a bipartite graph a projection keeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectOnto {
    Left,
    Right,
    #[default]
    Larger,
    Smaller,
}

impl FromStr for ProjectOnto {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "left" => Ok(ProjectOnto::Left),
            "right" => Ok(ProjectOnto::Right),
            "larger" => Ok(ProjectOnto::Larger),
            "smaller" => Ok(ProjectOnto::Smaller),
            other => Err(Error::InvalidArgument(format!(
                "project_onto must be left/right/larger/smaller, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for ProjectOnto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProjectOnto::Left => "left",
            ProjectOnto::Right => "right",
            ProjectOnto::Larger => "larger",
            ProjectOnto::Smaller => "smaller",
        };
        f.write_str(s)
    }
}

/// Two-colouring of a bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartitePartition {
    pub side_of: Vec<Side>,
}

impl BipartitePartition {
    pub fn members(&self, side: Side) -> Vec<usize> {
        (0..self.side_of.len())
            .filter(|&v| self.side_of[v] == side)
            .collect()
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.side_of.len() == g.node_count()
            && g.edges().all(|(u, v)| self.side_of[u] != self.side_of[v])
    }
}

/// BFS two-colouring; each component's lowest id goes on the left.
pub fn detect_bipartite(g: &Graph) -> Option<BipartitePartition> {
    let n = g.node_count();
    let mut side: Vec<Option<Side>> = vec![None; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(Side::Left);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let other = match side[v] {
                Some(Side::Left) => Side::Right,
                _ => Side::Left,
            };
            for &w in g.neighbors(v) {
                let w = w as usize;
                match side[w] {
                    None => {
                        side[w] = Some(other);
                        queue.push_back(w);
                    }
                    Some(s) if s != other => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(BipartitePartition {
        side_of: side.into_iter().map(Option::unwrap).collect(),
    })
}

/// One-mode projection: nodes of the chosen side, linked iff they share a
/// neighbour on the other side. Ties between `larger`/`smaller` pick left.
pub fn project_bipartite(
    g: &Graph,
    partition: &BipartitePartition,
    onto: ProjectOnto,
) -> Result<Graph> {
    if !partition.is_valid_for(g) {
        return Err(Error::InvalidArgument(
            "partition does not match the graph".into(),
        ));
    }
    let left = partition.members(Side::Left);
    let right = partition.members(Side::Right);
    let keep = match onto {
        ProjectOnto::Left => Side::Left,
        ProjectOnto::Right => Side::Right,
        ProjectOnto::Larger if right.len() > left.len() => Side::Right,
        ProjectOnto::Larger => Side::Left,
        ProjectOnto::Smaller if right.len() < left.len() => Side::Right,
        ProjectOnto::Smaller => Side::Left,
    };
    let (kept, hubs) = match keep {
        Side::Left => (left, right),
        Side::Right => (right, left),
    };
    if kept.is_empty() {
        return Err(Error::Empty(format!("projection side `{onto}` has no nodes")));
    }
    let mut new_id = vec![u32::MAX; g.node_count()];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v] = i as u32;
    }
    let mut edges = Vec::new();
    for &hub in &hubs {
        let nbrs = g.neighbors(hub);
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                edges.push((new_id[a as usize], new_id[b as usize]));
            }
        }
    }
    let labels = kept.iter().map(|&v| g.label(v).to_owned()).collect();
    Ok(Graph::build(kept.len(), edges.into_iter(), labels))
}

/// How a graph is canonicalized before measurement.
#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalizeOptions {
    /// Project onto this side (the input must be bipartite).
    pub project: Option<ProjectOnto>,
    /// Project any bipartite input that was not explicitly flagged.
    pub auto_project: bool,
}

#[derive(Clone, Debug)]
pub struct Canonical {
    pub graph: Graph,
    pub projected: Option<ProjectOnto>,
}

/// simplify → giant component → optional projection (→ giant component).
pub fn canonicalize(raw: &RawGraph, options: CanonicalizeOptions) -> Result<Canonical> {
    let graph = giant_component(&simplify(raw))?;
    let onto = match (options.project, options.auto_project) {
        (Some(onto), _) => Some(onto),
        (None, true) if graph.edge_count() > 0 && detect_bipartite(&graph).is_some() => {
            Some(ProjectOnto::default())
        }
        _ => None,
    };
    let Some(onto) = onto else {
        return Ok(Canonical {
            graph,
            projected: None,
        });
    };
    let partition = detect_bipartite(&graph).ok_or_else(|| {
        Error::InvalidArgument("graph is flagged for projection but is not bipartite".into())
    })?;
    let projected = project_bipartite(&graph, &partition, onto)?;
    Ok(Canonical {
        graph: giant_component(&projected)?,
        projected: Some(onto),
    })
}
