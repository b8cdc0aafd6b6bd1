//! Budgeted topological measures.
//!
//! A [`Registry`] holds an ordered catalog of measures. The order is the
//! canonical feature order used everywhere downstream: scalar measures map
//! to one feature column, distribution measures to seven
//! ([`AGGREGATE_NAMES`]).
//!
//! Every run gets its own [`Budget`]. Algorithms poll a deadline at loop
//! granularity and the engine refuses to start a measure whose memory
//! estimate exceeds the budget; both cases produce a missing value rather
//! than an error.

mod aggregate;
mod budget;
mod cliques;
mod cores;
mod local;
mod paths;
mod spectral;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use aggregate::{aggregate_distribution, AggregateSet, AGGREGATE_NAMES};
pub use budget::{Budget, BudgetPlan, Deadline, Halt};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const CATALOG_VERSION: &str = "core-26/2";

/// Above this many nodes, path-based measures use sampled sources.
pub const DEFAULT_EXACT_LIMIT: usize = 5000;
pub const DEFAULT_SAMPLE_SOURCES: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    Scalar,
    NodeDistribution,
    EdgeDistribution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostClass {
    Cheap,
    Polynomial,
    Expensive,
}

impl fmt::Display for CostClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostClass::Cheap => "cheap",
            CostClass::Polynomial => "polynomial",
            CostClass::Expensive => "expensive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub id: String,
    pub kind: MeasureKind,
    pub cost_class: CostClass,
    pub needs_seed: bool,
}

impl MeasureSpec {
    pub fn new(id: &str, kind: MeasureKind, cost_class: CostClass, needs_seed: bool) -> Self {
        MeasureSpec {
            id: id.to_owned(),
            kind,
            cost_class,
            needs_seed,
        }
    }

    pub fn column_count(&self) -> usize {
        match self.kind {
            MeasureKind::Scalar => 1,
            _ => AGGREGATE_NAMES.len(),
        }
    }

    pub fn column_ids(&self) -> Vec<String> {
        match self.kind {
            MeasureKind::Scalar => vec![self.id.clone()],
            _ => AGGREGATE_NAMES
                .iter()
                .map(|a| format!("{}.{a}", self.id))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureValue {
    Scalar(f64),
    Distribution(Vec<f64>),
}

/// Either a value or the reason it is missing.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureResult {
    Value(MeasureValue),
    Missing(Halt),
}

impl MeasureResult {
    pub fn missing_reason(&self) -> Option<Halt> {
        match self {
            MeasureResult::Missing(h) => Some(*h),
            MeasureResult::Value(_) => None,
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match self {
            MeasureResult::Value(MeasureValue::Scalar(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn distribution(&self) -> Option<&[f64]> {
        match self {
            MeasureResult::Value(MeasureValue::Distribution(v)) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureOutcome {
    pub result: MeasureResult,
    /// True when the value was estimated from sampled sources.
    pub sampled: bool,
}

/// Execution context handed to a measure implementation.
pub struct Ctx {
    deadline: Deadline,
    seed: u64,
    exact_limit: usize,
    sample_sources: usize,
    sampled: bool,
}

impl Ctx {
    pub fn deadline(&self) -> &Deadline {
        &self.deadline
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Flags the current result as a sampled estimate.
    pub fn mark_sampled(&mut self) {
        self.sampled = true;
    }
}

pub type MeasureFn = Arc<dyn Fn(&Graph, &mut Ctx) -> std::result::Result<MeasureValue, Halt> + Send + Sync>;
/// Working-memory estimate in bytes from `(nodes, edges)`.
pub type MemoryEstimate = Arc<dyn Fn(usize, usize) -> u64 + Send + Sync>;

#[derive(Clone)]
struct Entry {
    spec: MeasureSpec,
    compute: MeasureFn,
    memory: MemoryEstimate,
}

/// Sampling thresholds for path-based measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineOptions {
    pub exact_limit: usize,
    pub sample_sources: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            exact_limit: DEFAULT_EXACT_LIMIT,
            sample_sources: DEFAULT_SAMPLE_SOURCES,
        }
    }
}

/// Ordered measure catalog.
#[derive(Clone)]
pub struct Registry {
    entries: Vec<Entry>,
    options: EngineOptions,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("catalog", &self.catalog())
            .field("options", &self.options)
            .finish()
    }
}

fn words(w: usize) -> u64 {
    (w as u64).saturating_mul(8)
}

fn scalar(x: f64) -> std::result::Result<MeasureValue, Halt> {
    Ok(MeasureValue::Scalar(x))
}

fn dist(v: Vec<f64>) -> std::result::Result<MeasureValue, Halt> {
    Ok(MeasureValue::Distribution(v))
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            entries: Vec::new(),
            options: EngineOptions::default(),
        }
    }

    /// The mandatory 26-measure core catalog.
    pub fn core() -> Self {
        use CostClass::*;
        use MeasureKind::*;

        let mut r = Registry::empty();
        let linear = |n: usize, m: usize| words(2 * n + m);
        let bfs = |n: usize, _m: usize| words(4 * n);
        let brandes = |n: usize, m: usize| words(6 * n + 2 * m);
        let cliques = |n: usize, m: usize| words(4 * n + 4 * m);

        // Scalars.
        r.push(Scalar, "node_count", Cheap, false, linear, |g, _| scalar(g.node_count() as f64));
        r.push(Scalar, "edge_count", Cheap, false, linear, |g, _| scalar(g.edge_count() as f64));
        r.push(Scalar, "density", Cheap, false, linear, |g, _| local::density(g).map(MeasureValue::Scalar));
        r.push(Scalar, "transitivity", Polynomial, false, linear, |g, c| {
            local::transitivity(g, c).map(MeasureValue::Scalar)
        });
        r.push(Scalar, "degree_assortativity", Cheap, false, linear, |g, _| {
            local::degree_assortativity(g).map(MeasureValue::Scalar)
        });
        r.push(Scalar, "triangle_count", Polynomial, false, linear, |g, c| {
            local::triangle_count(g, c).map(MeasureValue::Scalar)
        });
        r.push(Scalar, "max_core_number", Cheap, false, linear, |g, _| {
            scalar(cores::core_numbers(g).into_iter().max().unwrap_or(0) as f64)
        });
        r.push(Scalar, "diameter", Expensive, true, bfs, |g, c| paths::diameter(g, c).map(MeasureValue::Scalar));
        r.push(Scalar, "radius", Expensive, true, bfs, |g, c| paths::radius(g, c).map(MeasureValue::Scalar));
        r.push(Scalar, "average_shortest_path", Expensive, true, bfs, |g, c| {
            paths::average_shortest_path(g, c).map(MeasureValue::Scalar)
        });
        r.push(Scalar, "clique_number", Expensive, false, cliques, |g, c| {
            cliques::clique_stats(g, c).map(|s| MeasureValue::Scalar(s.largest as f64))
        });
        r.push(Scalar, "spectral_radius", Polynomial, false, linear, |g, c| {
            spectral::spectral_radius(g, c).map(MeasureValue::Scalar)
        });
        r.push(Scalar, "maximal_clique_count", Expensive, false, cliques, |g, c| {
            cliques::clique_stats(g, c).map(|s| MeasureValue::Scalar(s.maximal as f64))
        });
        r.push(Scalar, "global_efficiency", Expensive, true, bfs, |g, c| {
            paths::global_efficiency(g, c).map(MeasureValue::Scalar)
        });

        // Node distributions.
        r.push(NodeDistribution, "degree", Cheap, false, linear, |g, _| dist(local::degrees(g)));
        r.push(NodeDistribution, "local_clustering", Polynomial, false, linear, |g, c| {
            local::local_clustering(g, c).map(MeasureValue::Distribution)
        });
        r.push(NodeDistribution, "core_number", Cheap, false, linear, |g, _| {
            dist(cores::core_numbers(g).into_iter().map(f64::from).collect())
        });
        r.push(NodeDistribution, "eccentricity", Expensive, true, bfs, |g, c| {
            paths::eccentricities(g, c).map(MeasureValue::Distribution)
        });
        r.push(NodeDistribution, "betweenness", Expensive, true, brandes, |g, c| {
            paths::betweenness(g, c).map(MeasureValue::Distribution)
        });
        r.push(NodeDistribution, "closeness", Expensive, true, bfs, |g, c| {
            paths::closeness(g, c).map(MeasureValue::Distribution)
        });
        r.push(NodeDistribution, "eigenvector_centrality", Polynomial, false, linear, |g, c| {
            spectral::eigenvector_centrality(g, c).map(MeasureValue::Distribution)
        });
        r.push(NodeDistribution, "pagerank", Polynomial, false, linear, |g, c| {
            spectral::pagerank(g, c).map(MeasureValue::Distribution)
        });
        r.push(NodeDistribution, "average_neighbor_degree", Cheap, false, linear, |g, _| {
            local::average_neighbor_degree(g).map(MeasureValue::Distribution)
        });
        r.push(NodeDistribution, "node_triangles", Polynomial, false, linear, |g, c| {
            local::node_triangles(g, c).map(|t| MeasureValue::Distribution(t.into_iter().map(|x| x as f64).collect()))
        });

        // Edge distributions.
        r.push(EdgeDistribution, "edge_betweenness", Expensive, true, brandes, |g, c| {
            paths::edge_betweenness(g, c).map(MeasureValue::Distribution)
        });
        r.push(EdgeDistribution, "edge_embeddedness", Polynomial, false, linear, |g, c| {
            local::edge_embeddedness(g, c).map(MeasureValue::Distribution)
        });
        r
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        kind: MeasureKind,
        id: &str,
        cost_class: CostClass,
        needs_seed: bool,
        memory: impl Fn(usize, usize) -> u64 + Send + Sync + 'static,
        compute: impl Fn(&Graph, &mut Ctx) -> std::result::Result<MeasureValue, Halt> + Send + Sync + 'static,
    ) {
        self.register(
            MeasureSpec::new(id, kind, cost_class, needs_seed),
            Arc::new(memory),
            Arc::new(compute),
        )
        .expect("core catalog ids are unique");
    }

    /// Appends a measure to the end of the catalog.
    pub fn register(
        &mut self,
        spec: MeasureSpec,
        memory: MemoryEstimate,
        compute: MeasureFn,
    ) -> Result<()> {
        if self.entries.iter().any(|e| e.spec.id == spec.id) {
            return Err(Error::DuplicateMeasure(spec.id));
        }
        self.entries.push(Entry {
            spec,
            compute,
            memory,
        });
        Ok(())
    }

    pub fn with_options(mut self, options: EngineOptions) -> Self {
        self.options = options;
        self
    }

    pub fn options(&self) -> EngineOptions {
        self.options
    }

    pub fn catalog(&self) -> Vec<MeasureSpec> {
        self.entries.iter().map(|e| e.spec.clone()).collect()
    }

    pub fn spec(&self, id: &str) -> Option<&MeasureSpec> {
        self.entries.iter().map(|e| &e.spec).find(|s| s.id == id)
    }

    pub fn has_seeded_measures(&self) -> bool {
        self.entries.iter().any(|e| e.spec.needs_seed)
    }

    /// Feature column ids in canonical order.
    pub fn feature_columns(&self) -> Vec<String> {
        self.entries
            .iter()
            .flat_map(|e| e.spec.column_ids())
            .collect()
    }

    /// Runs one measure under `budget`. Unknown ids are an error; budget
    /// exhaustion and undefined values are reported as missing.
    pub fn run_measure(&self, g: &Graph, id: &str, budget: Budget, seed: u64) -> Result<MeasureOutcome> {
        let entry = self
            .entries
            .iter()
            .find(|e| e.spec.id == id)
            .ok_or_else(|| Error::UnknownMeasure(id.to_owned()))?;
        Ok(self.run_entry(entry, g, budget, seed))
    }

    fn run_entry(&self, entry: &Entry, g: &Graph, budget: Budget, seed: u64) -> MeasureOutcome {
        let missing = |h| MeasureOutcome {
            result: MeasureResult::Missing(h),
            sampled: false,
        };
        let mut ctx = Ctx {
            deadline: Deadline::new(budget.wall_time),
            seed: crate::seed::derive(seed, &[crate::seed::key(&entry.spec.id)]),
            exact_limit: self.options.exact_limit,
            sample_sources: self.options.sample_sources,
            sampled: false,
        };
        if let Err(h) = ctx.deadline.check() {
            return missing(h);
        }
        if (entry.memory)(g.node_count(), g.edge_count()) > budget.memory {
            return missing(Halt::Memory);
        }
        match (entry.compute)(g, &mut ctx) {
            Ok(MeasureValue::Scalar(x)) if !x.is_finite() => missing(Halt::UndefinedOnGraph),
            Ok(MeasureValue::Distribution(v)) if v.is_empty() || v.iter().any(|x| !x.is_finite()) => {
                missing(Halt::UndefinedOnGraph)
            }
            Ok(value) => MeasureOutcome {
                result: MeasureResult::Value(value),
                sampled: ctx.sampled,
            },
            Err(h) => missing(h),
        }
    }

    /// Computes every catalog measure and expands distributions into their
    /// aggregate columns.
    pub fn compute_feature_vector(&self, g: &Graph, budgets: &BudgetPlan, seed: u64) -> FeatureVector {
        let mut values = Vec::with_capacity(self.feature_columns().len());
        let mut measures = Vec::with_capacity(self.entries.len());
        for entry in &self.entries {
            let outcome = self.run_entry(entry, g, budgets.for_class(entry.spec.cost_class), seed);
            match &outcome.result {
                MeasureResult::Value(MeasureValue::Scalar(x)) => values.push(Some(*x)),
                MeasureResult::Value(MeasureValue::Distribution(v)) => {
                    let agg = aggregate_distribution(v).expect("validated non-empty finite");
                    values.extend(agg.to_array().into_iter().map(Some));
                }
                MeasureResult::Missing(_) => {
                    values.extend(std::iter::repeat_n(None, entry.spec.column_count()))
                }
            }
            measures.push(MeasureStatus {
                missing: outcome.result.missing_reason(),
                sampled: outcome.sampled,
            });
        }
        FeatureVector { values, measures }
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::core()
    }
}

/// Runs a measure from the core catalog.
pub fn run_measure(g: &Graph, id: &str, budget: Budget, seed: u64) -> Result<MeasureOutcome> {
    Registry::core().run_measure(g, id, budget, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureStatus {
    pub missing: Option<Halt>,
    pub sampled: bool,
}

/// One network's feature row, aligned to [`Registry::feature_columns`].
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<Option<f64>>,
    /// Per catalog measure.
    pub measures: Vec<MeasureStatus>,
}

impl FeatureVector {
    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)])
    }

    fn generous() -> Budget {
        Budget::generous()
    }

    #[test]
    fn core_catalog_shape() {
        let r = Registry::core();
        let cat = r.catalog();
        assert_eq!(cat.len(), 26);
        let scalars = cat.iter().filter(|s| s.kind == MeasureKind::Scalar).count();
        assert_eq!(scalars, 14);
        assert_eq!(r.feature_columns().len(), 14 + 12 * 7);
        assert_eq!(r.catalog(), cat);
        let ids: HashSet<_> = cat.iter().map(|s| s.id.clone()).collect();
        assert_eq!(ids.len(), cat.len());
    }

    #[test]
    fn registering_a_distribution_adds_seven_columns() {
        let mut r = Registry::core();
        let before = r.feature_columns().len();
        r.register(
            MeasureSpec::new("degree_squared", MeasureKind::NodeDistribution, CostClass::Cheap, false),
            Arc::new(|n, _| words(n)),
            Arc::new(|g, _| {
                Ok(MeasureValue::Distribution(
                    (0..g.node_count()).map(|v| (g.degree(v) * g.degree(v)) as f64).collect(),
                ))
            }),
        )
        .unwrap();
        assert_eq!(r.feature_columns().len(), before + 7);
        assert_eq!(r.catalog().last().unwrap().id, "degree_squared");
        let dup = r.register(
            MeasureSpec::new("degree", MeasureKind::Scalar, CostClass::Cheap, false),
            Arc::new(|_, _| 0),
            Arc::new(|_, _| Ok(MeasureValue::Scalar(0.0))),
        );
        assert!(matches!(dup, Err(Error::DuplicateMeasure(_))));
    }

    #[test]
    fn triangle_is_fully_transitive() {
        let out = run_measure(&triangle(), "transitivity", generous(), 0).unwrap();
        assert_eq!(out.result.scalar(), Some(1.0));
    }

    #[test]
    fn path_betweenness_counts_pairs() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let out = run_measure(&p3, "betweenness", generous(), 0).unwrap();
        assert_eq!(out.result.distribution(), Some(&[0.0, 1.0, 0.0][..]));
    }

    #[test]
    fn paw_core_numbers() {
        let paw = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (3, 0)]);
        let out = run_measure(&paw, "core_number", generous(), 0).unwrap();
        assert_eq!(out.result.distribution(), Some(&[2.0, 2.0, 2.0, 1.0][..]));
    }

    #[test]
    fn zero_wall_time_is_a_timeout() {
        let zero = Budget {
            wall_time: 0.0,
            memory: 1 << 30,
        };
        for spec in Registry::core().catalog() {
            let out = run_measure(&triangle(), &spec.id, zero, 0).unwrap();
            assert_eq!(out.result, MeasureResult::Missing(Halt::Timeout), "{}", spec.id);
        }
    }

    #[test]
    fn memory_budget_is_enforced() {
        let tiny = Budget {
            wall_time: 10.0,
            memory: 1,
        };
        let out = run_measure(&triangle(), "betweenness", tiny, 0).unwrap();
        assert_eq!(out.result.missing_reason(), Some(Halt::Memory));
    }

    #[test]
    fn unknown_measure_is_an_error() {
        assert!(matches!(
            run_measure(&triangle(), "no_such_measure", generous(), 0),
            Err(Error::UnknownMeasure(_))
        ));
    }

    #[test]
    fn triangle_feature_vector_is_complete() {
        let r = Registry::core();
        let fv = r.compute_feature_vector(&triangle(), &BudgetPlan::uniform(generous()), 1);
        assert_eq!(fv.missing_count(), 0);
        let density = r.feature_columns().iter().position(|c| c == "density").unwrap();
        assert_eq!(fv.values[density], Some(1.0));
    }

    #[test]
    fn zero_expensive_budget_hits_only_expensive_columns() {
        let r = Registry::core();
        let mut plan = BudgetPlan::uniform(generous());
        plan.expensive.wall_time = 0.0;
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]);
        let fv = r.compute_feature_vector(&g, &plan, 3);
        let mut col = 0;
        for spec in r.catalog() {
            for _ in 0..spec.column_count() {
                assert_eq!(
                    fv.values[col].is_none(),
                    spec.cost_class == CostClass::Expensive,
                    "{}",
                    spec.id
                );
                col += 1;
            }
        }
    }

    #[test]
    fn p4_distances() {
        let r = Registry::core();
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let fv = r.compute_feature_vector(&p4, &BudgetPlan::uniform(generous()), 0);
        let cols = r.feature_columns();
        let at = |name: &str| fv.values[cols.iter().position(|c| c == name).unwrap()].unwrap();
        assert_eq!(at("diameter"), 3.0);
        assert!((at("average_shortest_path") - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn large_graphs_sample_sources_deterministically() {
        let n = 60;
        let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        let ring = Graph::from_edges(n, &edges);
        let r = Registry::core().with_options(EngineOptions {
            exact_limit: 10,
            sample_sources: 8,
        });
        let a = r.run_measure(&ring, "betweenness", generous(), 11).unwrap();
        let b = r.run_measure(&ring, "betweenness", generous(), 11).unwrap();
        assert!(a.sampled);
        assert_eq!(a, b);
        // On a ring every node has the same exact betweenness; the scaled
        // estimate over a vertex-transitive graph matches it in total.
        let exact = Registry::core().run_measure(&ring, "betweenness", generous(), 11).unwrap();
        let total = |o: &MeasureOutcome| o.result.distribution().unwrap().iter().sum::<f64>();
        assert!((total(&a) - total(&exact)).abs() < 1e-6 * total(&exact));
        assert!(!exact.sampled);
    }
}
