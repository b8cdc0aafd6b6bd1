//! Modified forward selection: rank singlets, then evaluate every pair and
//! triplet drawn from the best singlets.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::{self, pearson};
use crate::dataset::{Exclusions, FeatureMatrix};
use crate::error::{Error, Result};
use crate::forest::{evaluate_on_splits, stratified_kfold_indices, CvConfig, ForestParams, Split};

pub const DEFAULT_TOP_K: usize = 15;
pub const MAX_COMBO_SIZE: usize = 3;
/// Pairs extended to triplets in the consistency check.
pub const OVERLAP_PAIRS: usize = 10;
/// Size of the triplet sets compared by the consistency check.
pub const OVERLAP_TRIPLETS: usize = 130;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectionOptions {
    /// Singlet finalists combined into pairs and triplets.
    pub top_k: usize,
    /// Largest combo size evaluated, 1 to 3.
    pub max_size: usize,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        SelectionOptions {
            top_k: DEFAULT_TOP_K,
            max_size: MAX_COMBO_SIZE,
        }
    }
}

impl SelectionOptions {
    pub fn validate(&self) -> Result<()> {
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be positive".into()));
        }
        if !(1..=MAX_COMBO_SIZE).contains(&self.max_size) {
            return Err(Error::Config(format!("max combo size must be 1 to {MAX_COMBO_SIZE}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComboScore {
    /// Canonically ordered feature ids.
    pub features: Vec<String>,
    pub mean: f64,
    pub folds: Vec<f64>,
}

/// A One-vs-Rest task: candidate columns, labels and shared CV partitions.
#[derive(Clone, Debug)]
pub struct Task {
    pub domain: String,
    feature_ids: Vec<String>,
    columns: Vec<Vec<f64>>,
    labels: Vec<bool>,
    splits: Vec<Split>,
    cv: CvConfig,
    params: ForestParams,
}

impl Task {
    /// Builds the task for `domain` over `rows` of `matrix`, restricted to
    /// the `features` columns (canonical order is preserved).
    pub fn new(
        matrix: &FeatureMatrix,
        domain: &str,
        rows: &[usize],
        features: &[usize],
        cv: CvConfig,
        params: ForestParams,
    ) -> Result<Task> {
        let mut features = features.to_vec();
        features.sort_unstable();
        features.dedup();
        let mut columns = Vec::with_capacity(features.len());
        for &f in &features {
            if let Some(&r) = rows.iter().find(|&&r| matrix.is_missing(r, f)) {
                return Err(Error::InvalidArgument(format!(
                    "feature `{}` is missing for `{}`",
                    matrix.feature_ids()[f],
                    matrix.network_ids()[r]
                )));
            }
            columns.push(matrix.column(f, rows));
        }
        let labels: Vec<bool> = rows.iter().map(|&r| matrix.domains()[r] == domain).collect();
        Task::from_columns(
            domain,
            features.iter().map(|&f| matrix.feature_ids()[f].clone()).collect(),
            columns,
            labels,
            cv,
            params,
        )
    }

    pub fn from_columns(
        domain: &str,
        feature_ids: Vec<String>,
        columns: Vec<Vec<f64>>,
        labels: Vec<bool>,
        cv: CvConfig,
        params: ForestParams,
    ) -> Result<Task> {
        if feature_ids.len() != columns.len() {
            return Err(Error::InvalidArgument("feature ids and columns differ in length".into()));
        }
        params.validate()?;
        let splits = stratified_kfold_indices(&labels, cv.folds, cv.repeats, cv.seed)?;
        Ok(Task {
            domain: domain.to_owned(),
            feature_ids,
            columns,
            labels,
            splits,
            cv,
            params,
        })
    }

    pub fn feature_ids(&self) -> &[String] {
        &self.feature_ids
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    fn score(&self, combo: &[usize]) -> Result<ComboScore> {
        let columns: Vec<&[f64]> = self.columns.iter().map(Vec::as_slice).collect();
        let s = evaluate_on_splits(&columns, &self.labels, combo, &self.splits, self.cv.seed, &self.params)?;
        Ok(ComboScore {
            features: combo.iter().map(|&i| self.feature_ids[i].clone()).collect(),
            mean: s.mean,
            folds: s.folds,
        })
    }

    /// Scores every combo (indices into this task's features) and ranks
    /// them: mean F1 descending, then canonical combo order.
    pub fn evaluate_combos(&self, combos: &[Vec<usize>]) -> Result<Vec<ComboScore>> {
        if combos.is_empty() {
            return Err(Error::Empty("no combos to evaluate".into()));
        }
        let mut scored: Vec<(Vec<usize>, ComboScore)> = combos
            .par_iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                let s = self.score(&c)?;
                Ok((c, s))
            })
            .collect::<Result<_>>()?;
        scored.sort_by(|a, b| rank_order(a.1.mean, &a.0, b.1.mean, &b.0));
        Ok(scored.into_iter().map(|(_, s)| s).collect())
    }

    /// One evaluation per feature, ranked.
    pub fn rank_singletons(&self) -> Result<Vec<ComboScore>> {
        let combos: Vec<Vec<usize>> = (0..self.feature_ids.len()).map(|i| vec![i]).collect();
        self.evaluate_combos(&combos)
    }

    /// Scores an explicit combination by id.
    pub fn evaluate_named(&self, ids: &[&str]) -> Result<ComboScore> {
        let mut combo = ids
            .iter()
            .map(|id| {
                self.feature_ids
                    .iter()
                    .position(|f| f == id)
                    .ok_or_else(|| Error::UnknownFeature(id.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        combo.sort_unstable();
        combo.dedup();
        self.score(&combo)
    }

    fn indices_of(&self, ids: &[String]) -> Vec<usize> {
        ids.iter()
            .map(|id| self.feature_ids.iter().position(|f| f == id).expect("id from this task"))
            .collect()
    }
}

fn rank_order(mean_a: f64, a: &[usize], mean_b: f64, b: &[usize]) -> Ordering {
    mean_b.total_cmp(&mean_a).then_with(|| a.cmp(b))
}

/// Evaluates a named combination on a task built for `domain`, refusing
/// features the policies excluded for it.
pub fn evaluate_named_combo(
    matrix: &FeatureMatrix,
    exclusions: &Exclusions,
    domain: &str,
    rows: &[usize],
    ids: &[&str],
    cv: CvConfig,
    params: ForestParams,
) -> Result<ComboScore> {
    let mut features = Vec::with_capacity(ids.len());
    for id in ids {
        let f = matrix
            .feature_index(id)
            .ok_or_else(|| Error::UnknownFeature(id.to_string()))?;
        if let Some(rule) = exclusions.rule_for(domain, id) {
            return Err(Error::ExcludedFeature {
                feature: id.to_string(),
                domain: domain.to_owned(),
                rule: rule.to_string(),
            });
        }
        features.push(f);
    }
    Task::new(matrix, domain, rows, &features, cv, params)?.evaluate_named(ids)
}

/// All unordered pairs and triples of `ids`, in canonical (lexicographic
/// position) order.
pub fn enumerate_combos<T: Clone>(ids: &[T]) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let n = ids.len();
    let mut pairs = Vec::new();
    let mut triplets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(vec![ids[i].clone(), ids[j].clone()]);
            for k in j + 1..n {
                triplets.push(vec![ids[i].clone(), ids[j].clone(), ids[k].clone()]);
            }
        }
    }
    (pairs, triplets)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub percent: f64,
    /// Extensions built before deduplication (pairs × completions).
    pub candidates: usize,
    /// Distinct extensions.
    pub distinct: usize,
    pub shared: usize,
}

fn combo_key(features: &[String]) -> BTreeSet<String> {
    features.iter().cloned().collect()
}

/// Share of the top-10 pairs' extensions found among the 130 best triplets,
/// as a percentage of 130.
pub fn consistency_overlap(pairs: &[ComboScore], triplets: &[ComboScore], finalists: &[String]) -> Result<Overlap> {
    if pairs.len() < OVERLAP_PAIRS || triplets.len() < OVERLAP_TRIPLETS {
        return Err(Error::InvalidArgument(format!(
            "consistency overlap needs {OVERLAP_PAIRS} pairs and {OVERLAP_TRIPLETS} triplets, got {} and {}",
            pairs.len(),
            triplets.len()
        )));
    }
    let mut candidates = 0;
    let mut extended: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    for pair in &pairs[..OVERLAP_PAIRS] {
        for f in finalists.iter().filter(|f| !pair.features.contains(f)) {
            let mut t = combo_key(&pair.features);
            t.insert(f.clone());
            extended.insert(t);
            candidates += 1;
        }
    }
    let best: BTreeSet<BTreeSet<String>> = triplets[..OVERLAP_TRIPLETS]
        .iter()
        .map(|t| combo_key(&t.features))
        .collect();
    let shared = extended.intersection(&best).count();
    Ok(Overlap {
        percent: 100.0 * shared as f64 / OVERLAP_TRIPLETS as f64,
        candidates,
        distinct: extended.len(),
        shared,
    })
}

/// Features in `pool` whose |Pearson| with `feature` over `rows` exceeds
/// `threshold`, in canonical order.
pub fn correlated_alternates(
    matrix: &FeatureMatrix,
    rows: &[usize],
    feature: &str,
    pool: &[usize],
    threshold: f64,
) -> Result<Vec<String>> {
    let f = matrix
        .feature_index(feature)
        .ok_or_else(|| Error::UnknownFeature(feature.to_owned()))?;
    let x = matrix.column(f, rows);
    let mut out = Vec::new();
    for &g in pool {
        if g == f {
            continue;
        }
        let y = matrix.column(g, rows);
        if pearson(&x, &y).is_some_and(|r| r.abs() > threshold) {
            out.push(matrix.feature_ids()[g].clone());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub domain: String,
    pub positives: usize,
    pub negatives: usize,
    pub finalists: Vec<String>,
    pub singlets: Vec<ComboScore>,
    pub pairs: Vec<ComboScore>,
    pub triplets: Vec<ComboScore>,
    /// `None` when too few finalists for the construction.
    pub overlap: Option<Overlap>,
    pub winner: ComboScore,
    /// Winner feature → correlated features removed by the filter.
    pub alternates: BTreeMap<String, Vec<String>>,
    pub model_fits: usize,
}

impl SelectionReport {
    pub fn best_of_size(&self, size: usize) -> Option<&ComboScore> {
        match size {
            1 => self.singlets.first(),
            2 => self.pairs.first(),
            3 => self.triplets.first(),
            _ => None,
        }
    }
}

/// Highest mean; ties go to the smaller combo, then canonical order.
fn pick_winner<'a>(task: &Task, lists: [&'a [ComboScore]; 3]) -> &'a ComboScore {
    let mut best: Option<&ComboScore> = None;
    for list in lists {
        for c in list {
            let better = match best {
                None => true,
                Some(b) => {
                    c.mean > b.mean
                        || (c.mean == b.mean
                            && (c.features.len(), task.indices_of(&c.features))
                                < (b.features.len(), task.indices_of(&b.features)))
                }
            };
            if better {
                best = Some(c);
            }
        }
    }
    best.expect("at least one singlet")
}

/// Runs the full wrapper for one domain.
///
/// `candidates` are the features surviving the correlation filter; `pool`
/// is the pre-filter candidate set used to look up correlated alternates.
pub fn select_domain(
    matrix: &FeatureMatrix,
    domain: &str,
    rows: &[usize],
    candidates: &[usize],
    pool: &[usize],
    cv: CvConfig,
    params: ForestParams,
    options: &SelectionOptions,
) -> Result<SelectionReport> {
    options.validate()?;
    if candidates.is_empty() {
        return Err(Error::Empty(format!("no candidate features for `{domain}`")));
    }
    let task = Task::new(matrix, domain, rows, candidates, cv, params)?;
    let singlets = task.rank_singletons()?;
    let finalists: Vec<String> = singlets.iter().take(options.top_k).map(|s| s.features[0].clone()).collect();
    let mut finalist_idx = task.indices_of(&finalists);
    finalist_idx.sort_unstable();
    let (pair_combos, triplet_combos) = enumerate_combos(&finalist_idx);
    let pairs = if pair_combos.is_empty() || options.max_size < 2 {
        Vec::new()
    } else {
        task.evaluate_combos(&pair_combos)?
    };
    let triplets = if triplet_combos.is_empty() || options.max_size < 3 {
        Vec::new()
    } else {
        task.evaluate_combos(&triplet_combos)?
    };
    let overlap = consistency_overlap(&pairs, &triplets, &finalists).ok();
    let winner = pick_winner(&task, [&singlets, &pairs, &triplets]).clone();
    let domain_rows: Vec<usize> = rows.iter().copied().filter(|&r| matrix.domains()[r] == domain).collect();
    let mut alternates = BTreeMap::new();
    for f in &winner.features {
        let alt = correlated_alternates(matrix, &domain_rows, f, pool, correlation::DEFAULT_THRESHOLD)?;
        alternates.insert(f.clone(), alt);
    }
    let positives = task.labels.iter().filter(|&&l| l).count();
    let model_fits = (singlets.len() + pairs.len() + triplets.len()) * task.splits.len();
    Ok(SelectionReport {
        domain: domain.to_owned(),
        positives,
        negatives: task.labels.len() - positives,
        finalists,
        singlets,
        pairs,
        triplets,
        overlap,
        winner,
        alternates,
        model_fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::xor_fixture;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn score(ids: &[&str], mean: f64) -> ComboScore {
        ComboScore {
            features: ids.iter().map(|s| s.to_string()).collect(),
            mean,
            folds: vec![mean],
        }
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("f{i:02}")).collect()
    }

    fn small_params() -> ForestParams {
        ForestParams {
            n_trees: 25,
            ..ForestParams::default()
        }
    }

    #[test]
    fn combo_counts_are_binomial() {
        for (n, p, t) in [(15, 105, 455), (4, 6, 4), (3, 3, 1), (2, 1, 0), (1, 0, 0)] {
            let (pairs, triplets) = enumerate_combos(&names(n));
            assert_eq!((pairs.len(), triplets.len()), (p, t), "n = {n}");
        }
        let (pairs, _) = enumerate_combos(&[0, 1, 2]);
        assert_eq!(pairs, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    // Top-10 pairs are (f00, f01) .. (f00, f10); their extensions are
    // ranked ahead of every other triplet.
    fn identity_rankings() -> (Vec<ComboScore>, Vec<ComboScore>, Vec<String>) {
        let ids = names(15);
        let (pairs, triplets) = enumerate_combos(&ids);
        let top_pairs: Vec<Vec<String>> = (1..=10).map(|i| vec![ids[0].clone(), ids[i].clone()]).collect();
        let mut extended: BTreeSet<BTreeSet<String>> = BTreeSet::new();
        for p in &top_pairs {
            for f in ids.iter().filter(|f| !p.contains(f)) {
                let mut t: BTreeSet<String> = p.iter().cloned().collect();
                t.insert(f.clone());
                extended.insert(t);
            }
        }
        let mut ranked_pairs: Vec<ComboScore> = top_pairs
            .iter()
            .map(|p| ComboScore { features: p.clone(), mean: 0.9, folds: vec![] })
            .collect();
        ranked_pairs.extend(
            pairs
                .iter()
                .filter(|p| !top_pairs.contains(p))
                .map(|p| ComboScore { features: p.clone(), mean: 0.1, folds: vec![] }),
        );
        let (mut hit, miss): (Vec<_>, Vec<_>) = triplets
            .into_iter()
            .partition(|t| extended.contains(&t.iter().cloned().collect::<BTreeSet<_>>()));
        hit.extend(miss);
        let ranked_triplets = hit
            .into_iter()
            .map(|t| ComboScore { features: t, mean: 0.5, folds: vec![] })
            .collect();
        (ranked_pairs, ranked_triplets, ids)
    }

    #[test]
    fn overlap_construction_has_130_candidates() {
        let (pairs, triplets, ids) = identity_rankings();
        let o = consistency_overlap(&pairs, &triplets, &ids).unwrap();
        assert_eq!(o.candidates, 10 * 13);
        assert!(o.distinct <= 130);
        assert_eq!(o.shared, o.distinct);
    }

    #[test]
    fn overlap_of_disjoint_sets_is_zero() {
        let (pairs, mut triplets, ids) = identity_rankings();
        let (_, hits) = {
            let o = consistency_overlap(&pairs, &triplets, &ids).unwrap();
            (o.percent, o.distinct)
        };
        triplets.rotate_left(hits);
        let o = consistency_overlap(&pairs, &triplets, &ids).unwrap();
        assert_eq!(o.percent, 0.0);
    }

    #[test]
    fn identity_ranking_is_the_maximum() {
        // Ten pairs over 15 features always share a member somewhere, so at
        // least one extension coincides and 100% cannot be reached; the
        // identity ranking attains the ceiling distinct / 130.
        let (pairs, triplets, ids) = identity_rankings();
        let o = consistency_overlap(&pairs, &triplets, &ids).unwrap();
        assert_eq!(o.distinct, 130 - 45);
        assert_eq!(o.percent, 100.0 * o.distinct as f64 / 130.0);
    }

    #[test]
    fn overlap_needs_enough_ranked_combos() {
        let pairs: Vec<ComboScore> = (0..9).map(|_| score(&["a", "b"], 0.5)).collect();
        assert!(consistency_overlap(&pairs, &[], &names(15)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn overlap_is_bounded_and_label_invariant(seed in any::<u64>()) {
            let ids = names(15);
            let (mut pairs, mut triplets) = enumerate_combos(&ids);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            use rand::seq::SliceRandom;
            pairs.shuffle(&mut rng);
            triplets.shuffle(&mut rng);
            let wrap = |v: &[Vec<String>]| v.iter().map(|c| ComboScore { features: c.clone(), mean: 0.0, folds: vec![] }).collect::<Vec<_>>();
            let a = consistency_overlap(&wrap(&pairs), &wrap(&triplets), &ids).unwrap();
            prop_assert!((0.0..=100.0).contains(&a.percent));
            prop_assert_eq!(a.candidates, 130);
            prop_assert!(a.distinct < 130);

            let mut perm = ids.clone();
            perm.shuffle(&mut rng);
            let rename: BTreeMap<&String, &String> = ids.iter().zip(perm.iter()).collect();
            let relabel = |v: &[Vec<String>]| v.iter().map(|c| c.iter().map(|f| rename[f].clone()).collect()).collect::<Vec<Vec<String>>>();
            let b = consistency_overlap(&wrap(&relabel(&pairs)), &wrap(&relabel(&triplets)), &perm).unwrap();
            prop_assert_eq!(a.percent, b.percent);
        }
    }

    fn signal_task(noise: usize, seed: u64) -> Task {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 150;
        let labels: Vec<bool> = (0..n).map(|i| i % 5 == 0).collect();
        let mut columns = Vec::new();
        let mut ids = Vec::new();
        for k in 0..noise {
            columns.push((0..n).map(|_| rng.random::<f64>()).collect());
            ids.push(format!("noise{k}"));
        }
        columns.push(labels.iter().map(|&l| if l { 1.0 } else { 0.0 } + rng.random_range(-0.2..0.2)).collect());
        ids.push("signal".into());
        Task::from_columns("D", ids, columns, labels, CvConfig::default(), small_params()).unwrap()
    }

    #[test]
    fn informative_feature_ranks_first() {
        let task = signal_task(9, 1);
        let ranked = task.rank_singletons().unwrap();
        assert_eq!(ranked.len(), 10);
        assert_eq!(ranked[0].features, vec!["signal".to_string()]);
        assert!(ranked.windows(2).all(|w| w[0].mean >= w[1].mean));
    }

    #[test]
    fn duplicate_columns_rank_adjacent_in_canonical_order() {
        let task = signal_task(0, 2);
        let col = task.columns[0].clone();
        let dup = Task::from_columns(
            "D",
            vec!["a".into(), "b".into()],
            vec![col.clone(), col],
            task.labels.clone(),
            CvConfig::default(),
            small_params(),
        )
        .unwrap();
        let ranked = dup.rank_singletons().unwrap();
        assert_eq!(ranked[0].mean, ranked[1].mean);
        assert_eq!(ranked[0].features, vec!["a".to_string()]);
    }

    #[test]
    fn single_candidate_gives_single_entry() {
        let task = signal_task(0, 3);
        assert_eq!(task.rank_singletons().unwrap().len(), 1);
        assert_eq!(task.evaluate_combos(&[vec![0]]).unwrap().len(), 1);
        assert!(task.evaluate_combos(&[]).is_err());
    }

    #[test]
    fn named_combo_reproduces_ranked_score() {
        let task = signal_task(3, 4);
        let (pairs, _) = enumerate_combos(&[0usize, 1, 2, 3]);
        let ranked = task.evaluate_combos(&pairs).unwrap();
        let ids: Vec<&str> = ranked[0].features.iter().map(String::as_str).collect();
        assert_eq!(task.evaluate_named(&ids).unwrap(), ranked[0]);
        assert!(matches!(task.evaluate_named(&["nope"]), Err(Error::UnknownFeature(_))));
    }

    fn xor_task(seed: u64) -> Task {
        let fx = xor_fixture(seed);
        Task::from_columns("one", fx.feature_ids, fx.columns, fx.labels, CvConfig::default(), ForestParams::default()).unwrap()
    }

    /// Classic greedy forward selection, kept as a baseline.
    fn greedy_forward(task: &Task, size: usize) -> ComboScore {
        let mut chosen: Vec<usize> = Vec::new();
        let mut best = None;
        while chosen.len() < size {
            let options: Vec<Vec<usize>> = (0..task.feature_ids.len())
                .filter(|f| !chosen.contains(f))
                .map(|f| {
                    let mut c = chosen.clone();
                    c.push(f);
                    c
                })
                .collect();
            let top = task.evaluate_combos(&options).unwrap().remove(0);
            chosen = task.indices_of(&top.features);
            best = Some(top);
        }
        best.unwrap()
    }

    #[test]
    fn xor_pair_beats_every_singlet() {
        let task = xor_task(11);
        let singlets = task.rank_singletons().unwrap();
        let pairs = task.evaluate_combos(&[vec![0, 1]]).unwrap();
        assert!(pairs[0].mean >= 0.9, "pair {}", pairs[0].mean);
        assert!(pairs[0].mean - singlets[0].mean >= 0.3, "{} vs {}", pairs[0].mean, singlets[0].mean);
        let named = task.evaluate_named(&["x", "y"]).unwrap();
        assert_eq!(named, pairs[0]);
        let greedy = greedy_forward(&task, 1);
        assert!(pairs[0].mean - greedy.mean >= 0.3);
    }
}
