use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ExampleSet;
use crate::error::{Error, Result};

/// Fold index per example, in [`ExampleSet::labeled`] order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSpec {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub seed: u64,
}

impl FoldSpec {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect()
    }
}

/// Stratified k-fold split: each class is shuffled under `seed` and dealt
/// round-robin, so per-class fold sizes differ by at most one.
pub fn split_folds(examples: &ExampleSet, k: usize, seed: u64) -> Result<FoldSpec> {
    if k < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {k}")));
    }
    let np = examples.positives.len();
    let nn = examples.negatives.len();
    for (class, count) in [("positive", np), ("negative", nn)] {
        if count < k {
            return Err(Error::TooFewExamples { class, count, folds: k });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0; np + nn];
    let mut pos: Vec<usize> = (0..np).collect();
    pos.shuffle(&mut rng);
    for (slot, &i) in pos.iter().enumerate() {
        assignments[i] = slot % k;
    }
    // Negatives continue the rotation where positives stopped so that total
    // fold sizes also stay within one of each other.
    let offset = np % k;
    let mut neg: Vec<usize> = (np..np + nn).collect();
    neg.shuffle(&mut rng);
    for (slot, &i) in neg.iter().enumerate() {
        assignments[i] = (slot + offset) % k;
    }
    Ok(FoldSpec { k, assignments, seed })
}
