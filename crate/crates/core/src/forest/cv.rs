use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 5,
            repeats: 3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub repeat: usize,
    pub fold: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Repeated stratified k-fold partitions.
///
/// Per repeat, each class is shuffled with a repeat-specific seed and dealt
/// round-robin into the folds; dealing continues from where the previous
/// class stopped, so fold sizes stay balanced too.
pub fn stratified_kfold_indices(labels: &[bool], folds: usize, repeats: usize, seed: u64) -> Result<Vec<Split>> {
    if folds < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {folds}")));
    }
    let positives: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let negatives: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    for (name, members) in [("positive", &positives), ("negative", &negatives)] {
        if members.len() < folds {
            return Err(Error::ClassTooSmall {
                class: name.into(),
                count: members.len(),
                folds,
            });
        }
    }
    let mut splits = Vec::with_capacity(folds * repeats);
    for repeat in 0..repeats {
        let mut rng = seed::rng(seed, &[repeat as u64]);
        let mut test: Vec<Vec<usize>> = vec![Vec::new(); folds];
        let mut slot = 0;
        for class in [&positives, &negatives] {
            let mut shuffled = class.clone();
            shuffled.shuffle(&mut rng);
            for i in shuffled {
                test[slot % folds].push(i);
                slot += 1;
            }
        }
        for (fold, mut t) in test.into_iter().enumerate() {
            t.sort_unstable();
            let mut in_test = vec![false; labels.len()];
            for &i in &t {
                in_test[i] = true;
            }
            let train = (0..labels.len()).filter(|&i| !in_test[i]).collect();
            splits.push(Split {
                repeat,
                fold,
                train,
                test: t,
            });
        }
    }
    Ok(splits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(pos: usize, neg: usize) -> Vec<bool> {
        let mut y = vec![true; pos];
        y.extend(vec![false; neg]);
        y
    }

    fn positives(y: &[bool], s: &Split) -> usize {
        s.test.iter().filter(|&&i| y[i]).count()
    }

    #[test]
    fn divisible_case_is_exact() {
        let y = labels(10, 90);
        let splits = stratified_kfold_indices(&y, 5, 1, 3).unwrap();
        for s in &splits {
            assert_eq!(positives(&y, s), 2);
            assert_eq!(s.test.len() - positives(&y, s), 18);
        }
    }

    #[test]
    fn remainder_goes_round_robin() {
        let y = labels(11, 40);
        let splits = stratified_kfold_indices(&y, 5, 1, 3).unwrap();
        let mut counts: Vec<usize> = splits.iter().map(|s| positives(&y, s)).collect();
        counts.sort_unstable();
        assert_eq!(counts, vec![2, 2, 2, 2, 3]);
    }

    #[test]
    fn repeats_multiply_splits() {
        let y = labels(10, 20);
        let splits = stratified_kfold_indices(&y, 5, 3, 0).unwrap();
        assert_eq!(splits.len(), 15);
        for r in 0..3 {
            let mut all: Vec<usize> = splits
                .iter()
                .filter(|s| s.repeat == r)
                .flat_map(|s| s.test.iter().copied())
                .collect();
            all.sort_unstable();
            assert_eq!(all, (0..30).collect::<Vec<_>>());
        }
        assert_ne!(splits[0].test, splits[5].test);
    }

    #[test]
    fn small_class_is_named_in_the_error() {
        let y = labels(3, 20);
        match stratified_kfold_indices(&y, 5, 1, 0) {
            Err(Error::ClassTooSmall { class, count, folds }) => {
                assert_eq!((class.as_str(), count, folds), ("positive", 3, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
