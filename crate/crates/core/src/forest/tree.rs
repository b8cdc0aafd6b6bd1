use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ForestParams;

/// Gini reductions smaller than this are treated as no reduction.
const MIN_GAIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        probability: f64,
    },
}

/// Binary classification tree; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    /// Positive-class probability of the leaf `row` falls into. Values
    /// `<= threshold` go left.
    pub fn predict_proba(&self, columns: &[&[f64]], row: usize) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                TreeNode::Leaf { probability } => return probability,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if columns[feature][row] <= threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn predict(&self, columns: &[&[f64]], row: usize) -> bool {
        self.predict_proba(columns, row) >= 0.5
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match nodes[at] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

/// Gini impurity of a node with `pos` positives out of `n`.
pub fn gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

fn weighted_gini(left_pos: usize, left_n: usize, right_pos: usize, right_n: usize) -> f64 {
    let n = (left_n + right_n) as f64;
    (left_n as f64 * gini(left_pos, left_n) + right_n as f64 * gini(right_pos, right_n)) / n
}

struct Grower<'a, R> {
    columns: &'a [&'a [f64]],
    labels: &'a [bool],
    params: &'a ForestParams,
    per_split: usize,
    rng: &'a mut R,
    nodes: Vec<TreeNode>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

impl<R: Rng> Grower<'_, R> {
    fn grow(&mut self, samples: &[usize], depth: usize) -> usize {
        let n = samples.len();
        let pos = samples.iter().filter(|&&i| self.labels[i]).count();
        let at = self.nodes.len();
        self.nodes.push(TreeNode::Leaf {
            probability: if n == 0 { 0.0 } else { pos as f64 / n as f64 },
        });
        if depth >= self.params.max_depth || pos == 0 || pos == n {
            return at;
        }
        let Some(best) = self.best_split(samples, pos) else {
            return at;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = samples
            .iter()
            .partition(|&&i| self.columns[best.feature][i] <= best.threshold);
        let left = self.grow(&left, depth + 1);
        let right = self.grow(&right, depth + 1);
        self.nodes[at] = TreeNode::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        at
    }

    fn best_split(&mut self, samples: &[usize], pos: usize) -> Option<Candidate> {
        let n = samples.len();
        let parent = gini(pos, n);
        let mut features: Vec<usize> = (0..self.columns.len()).collect();
        features.shuffle(self.rng);
        let min_leaf = self.params.min_samples_leaf.max(1);
        let mut best: Option<Candidate> = None;
        let mut order: Vec<(f64, bool)> = Vec::with_capacity(n);
        let mut examined = 0;
        for feature in features {
            if examined == self.per_split {
                break;
            }
            let col = self.columns[feature];
            order.clear();
            order.extend(samples.iter().map(|&i| (col[i], self.labels[i])));
            order.sort_by(|a, b| a.0.total_cmp(&b.0));
            // Features constant in this node do not use up the budget.
            if order[0].0 == order[n - 1].0 {
                continue;
            }
            examined += 1;
            let mut left_pos = 0;
            for k in 0..n - 1 {
                if order[k].1 {
                    left_pos += 1;
                }
                let left_n = k + 1;
                if order[k].0 == order[k + 1].0 || left_n < min_leaf || n - left_n < min_leaf {
                    continue;
                }
                let impurity = weighted_gini(left_pos, left_n, pos - left_pos, n - left_n);
                if impurity < parent - MIN_GAIN
                    && best.as_ref().is_none_or(|b| impurity < b.impurity)
                {
                    best = Some(Candidate {
                        feature,
                        threshold: order[k].0 + (order[k + 1].0 - order[k].0) / 2.0,
                        impurity,
                    });
                }
            }
        }
        best
    }
}

/// CART on the (multi)set of row indices `samples`.
///
/// At each node features are visited in random order until
/// `features_per_split` non-constant ones have been examined. Candidate
/// thresholds are midpoints between consecutive distinct values; the split
/// with the lowest weighted Gini wins if it is lower than the node's own
/// impurity.
pub fn fit_tree<R: Rng>(
    columns: &[&[f64]],
    labels: &[bool],
    samples: &[usize],
    params: &ForestParams,
    rng: &mut R,
) -> Tree {
    let per_split = params.features_per_split(columns.len());
    let mut grower = Grower {
        columns,
        labels,
        params,
        per_split,
        rng,
        nodes: Vec::new(),
    };
    grower.grow(samples, 0);
    Tree {
        nodes: grower.nodes,
    }
}
