use crate::error::{Error, Result};
use crate::logic::Atom;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct ScoredExample<T> {
    pub query: Atom,
    pub label: bool,
    pub score: T,
}

fn pairs<T: Scalar>(scored: &[ScoredExample<T>]) -> Vec<(f64, bool)> {
    scored.iter().map(|s| (s.score.to_f64_lossy(), s.label)).collect()
}

/// Area under the ROC curve: the probability that a random positive scores
/// above a random negative, ties counting one half.
pub fn auc_roc<T: Scalar>(scored: &[ScoredExample<T>]) -> Result<f64> {
    auc_roc_pairs(&pairs(scored))
}

/// Average precision: the mean, over positives, of the precision at the
/// rank where each positive appears, ranking by descending score with ties
/// kept in input order.
pub fn auc_pr<T: Scalar>(scored: &[ScoredExample<T>]) -> Result<f64> {
    auc_pr_pairs(&pairs(scored))
}

/// [`auc_roc`] over `(score, label)` pairs, via midranks.
pub fn auc_roc_pairs(items: &[(f64, bool)]) -> Result<f64> {
    let np = items.iter().filter(|(_, l)| *l).count();
    let nn = items.len() - np;
    if np == 0 {
        return Err(Error::EmptyClass("positive"));
    }
    if nn == 0 {
        return Err(Error::EmptyClass("negative"));
    }
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[a].0.total_cmp(&items[b].0));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && items[order[j + 1]].0 == items[order[i]].0 {
            j += 1;
        }
        // Ranks i+1..=j+1 share their mean.
        let mid = (i + j + 2) as f64 / 2.0;
        rank_sum += mid * order[i..=j].iter().filter(|&&k| items[k].1).count() as f64;
        i = j + 1;
    }
    let (np, nn) = (np as f64, nn as f64);
    Ok((rank_sum - np * (np + 1.0) / 2.0) / (np * nn))
}

/// [`auc_pr`] over `(score, label)` pairs.
pub fn auc_pr_pairs(items: &[(f64, bool)]) -> Result<f64> {
    let np = items.iter().filter(|(_, l)| *l).count();
    if np == 0 {
        return Err(Error::EmptyClass("positive"));
    }
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[b].0.total_cmp(&items[a].0));
    let mut hits = 0usize;
    let mut total = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        if items[i].1 {
            hits += 1;
            total += hits as f64 / (rank + 1) as f64;
        }
    }
    Ok(total / np as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(pos: &[f64], neg: &[f64]) -> Vec<(f64, bool)> {
        pos.iter()
            .map(|&s| (s, true))
            .chain(neg.iter().map(|&s| (s, false)))
            .collect()
    }

    #[test]
    fn roc_examples() {
        assert_eq!(auc_roc_pairs(&items(&[0.9, 0.8], &[0.1, 0.2])).unwrap(), 1.0);
        assert_eq!(auc_roc_pairs(&items(&[0.5, 0.5], &[0.5, 0.5, 0.5])).unwrap(), 0.5);
        assert_eq!(auc_roc_pairs(&items(&[0.9, 0.4], &[0.6, 0.2])).unwrap(), 0.75);
    }

    #[test]
    fn pr_examples() {
        assert_eq!(auc_pr_pairs(&items(&[0.9, 0.8], &[0.1, 0.2])).unwrap(), 1.0);
        assert_eq!(auc_pr_pairs(&items(&[0.1], &[0.9, 0.8, 0.7])).unwrap(), 0.25);
        let ap = auc_pr_pairs(&items(&[0.9, 0.4], &[0.6, 0.2])).unwrap();
        assert!((ap - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn empty_classes_are_errors() {
        assert!(matches!(
            auc_roc_pairs(&items(&[], &[0.1])),
            Err(Error::EmptyClass("positive"))
        ));
        assert!(matches!(
            auc_roc_pairs(&items(&[0.1], &[])),
            Err(Error::EmptyClass("negative"))
        ));
        assert!(auc_pr_pairs(&items(&[], &[0.1])).is_err());
    }

    #[test]
    fn pr_ties_follow_input_order() {
        // Positive listed first wins the tie.
        assert_eq!(auc_pr_pairs(&[(0.5, true), (0.5, false)]).unwrap(), 1.0);
        assert_eq!(auc_pr_pairs(&[(0.5, false), (0.5, true)]).unwrap(), 0.5);
    }
}
