use std::fmt::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{auc_pr_pairs, auc_roc_pairs};
use crate::dataset::{ExampleSet, FoldSpec, Schema};
use crate::error::{Error, Result};
use crate::explain::distill_single_tree;
use crate::logic::{Atom, KnowledgeBase};
use crate::lrbm::{train, train_unboosted, BoostedModel, TrainConfig};
use crate::scalar::Scalar;

/// Which model each fold trains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Variant {
    /// The boosted ensemble.
    Boosted,
    /// One tree of bounded depth fit to the prior model's gradients.
    NoBoost { max_depth: usize },
    /// The boosted ensemble distilled into one tree of bounded depth.
    Distilled { max_depth: usize },
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Boosted => f.write_str("boosted"),
            Variant::NoBoost { max_depth } => write!(f, "noboost(depth {max_depth})"),
            Variant::Distilled { max_depth } => write!(f, "distilled(depth {max_depth})"),
        }
    }
}

/// Ground-truth oracle for held-out examples.
pub type Truth<'a> = &'a (dyn Fn(&Atom) -> bool + Sync);

#[derive(Clone, Copy)]
pub struct CvOptions<'a> {
    pub variant: Variant,
    /// When set, held-out examples are scored against this oracle instead
    /// of their (possibly noisy) labels. Training always uses the labels.
    pub truth: Option<Truth<'a>>,
}

impl Default for CvOptions<'_> {
    fn default() -> Self {
        CvOptions {
            variant: Variant::Boosted,
            truth: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub auc_roc: f64,
    pub auc_pr: f64,
    pub train_seconds: f64,
    pub test_seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Population standard deviation (divides by the fold count).
    pub stdev: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Summary {
            mean,
            stdev: var.sqrt(),
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} ± {:.4}", self.mean, self.stdev)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub variant: Variant,
    pub folds: Vec<FoldMetrics>,
    pub auc_roc: Summary,
    pub auc_pr: Summary,
    pub fold_seed: u64,
    pub scored_against_truth: bool,
    pub config: serde_json::Value,
    pub wall_seconds: f64,
    pub conventions: String,
}

const CONVENTIONS: &str = "AUC-ROC counts ties as 1/2; AUC-PR is average precision with tied scores kept in input order; stdev is the population formula";

impl MetricsReport {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "variant: {}", self.variant);
        let _ = writeln!(out, "fold seed: {}", self.fold_seed);
        if self.scored_against_truth {
            let _ = writeln!(out, "held-out labels: ground truth");
        }
        let _ = writeln!(out, "config: {}", self.config);
        let _ = writeln!(out, "fold  train  test  auc_roc  auc_pr  train_s  test_s");
        for f in &self.folds {
            let _ = writeln!(
                out,
                "{:>4}  {:>5}  {:>4}  {:.4}   {:.4}  {:>7.2}  {:>6.2}",
                f.fold, f.train_size, f.test_size, f.auc_roc, f.auc_pr, f.train_seconds, f.test_seconds
            );
        }
        let _ = writeln!(out, "AUC-ROC {}", self.auc_roc);
        let _ = writeln!(out, "AUC-PR  {}", self.auc_pr);
        let _ = writeln!(out, "wall time {:.2}s", self.wall_seconds);
        let _ = writeln!(out, "({})", self.conventions);
        out
    }
}

pub fn cross_validate<T: Scalar>(
    kb: &KnowledgeBase,
    schema: &Schema,
    examples: &ExampleSet,
    folds: &FoldSpec,
    config: &TrainConfig<T>,
) -> Result<MetricsReport> {
    cross_validate_with(kb, schema, examples, folds, config, CvOptions::default())
}

fn fit_variant<T: Scalar>(
    kb: &KnowledgeBase,
    schema: &Schema,
    train_set: &ExampleSet,
    config: &TrainConfig<T>,
    variant: Variant,
) -> Result<BoostedModel<T>> {
    match variant {
        Variant::Boosted => train(kb, schema, train_set, config),
        Variant::NoBoost { max_depth } => train_unboosted(kb, schema, train_set, config, max_depth),
        Variant::Distilled { max_depth } => {
            let model = train(kb, schema, train_set, config)?;
            Ok(distill_single_tree(&model, train_set, kb, max_depth)?.to_model(&model))
        }
    }
}

/// Trains on all folds but one and scores the held-out fold, for every
/// fold. Folds run concurrently.
pub fn cross_validate_with<T: Scalar>(
    kb: &KnowledgeBase,
    schema: &Schema,
    examples: &ExampleSet,
    folds: &FoldSpec,
    config: &TrainConfig<T>,
    options: CvOptions<'_>,
) -> Result<MetricsReport> {
    if folds.assignments.len() != examples.len() {
        return Err(Error::Config(format!(
            "fold assignment covers {} examples, data has {}",
            folds.assignments.len(),
            examples.len()
        )));
    }
    if let Some(&bad) = folds.assignments.iter().find(|&&f| f >= folds.k) {
        return Err(Error::Config(format!(
            "fold index {bad} out of range for k = {}",
            folds.k
        )));
    }
    config.validate()?;
    let start = Instant::now();
    let per_fold = (0..folds.k)
        .into_par_iter()
        .map(|fold| {
            run_fold(kb, schema, examples, folds, config, options, fold).map_err(|e| Error::Fold {
                fold,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rocs: Vec<f64> = per_fold.iter().map(|f| f.auc_roc).collect();
    let prs: Vec<f64> = per_fold.iter().map(|f| f.auc_pr).collect();
    Ok(MetricsReport {
        variant: options.variant,
        auc_roc: Summary::of(&rocs),
        auc_pr: Summary::of(&prs),
        folds: per_fold,
        fold_seed: folds.seed,
        scored_against_truth: options.truth.is_some(),
        config: serde_json::to_value(config)?,
        wall_seconds: start.elapsed().as_secs_f64(),
        conventions: CONVENTIONS.into(),
    })
}

fn run_fold<T: Scalar>(
    kb: &KnowledgeBase,
    schema: &Schema,
    examples: &ExampleSet,
    folds: &FoldSpec,
    config: &TrainConfig<T>,
    options: CvOptions<'_>,
    fold: usize,
) -> Result<FoldMetrics> {
    let train_set = examples.select(&folds.train_indices(fold));
    let test_set = examples.select(&folds.test_indices(fold));
    let t0 = Instant::now();
    let model = fit_variant(kb, schema, &train_set, config, options.variant)?;
    let train_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let test: Vec<(&Atom, bool)> = test_set.labeled().collect();
    let items = test
        .par_iter()
        .map(|(q, label)| {
            let label = options.truth.map_or(*label, |truth| truth(q));
            Ok((model.predict(q, kb)?.probability.to_f64_lossy(), label))
        })
        .collect::<Result<Vec<_>>>()?;
    let auc_roc = auc_roc_pairs(&items)?;
    let auc_pr = auc_pr_pairs(&items)?;
    Ok(FoldMetrics {
        fold,
        train_size: train_set.len(),
        test_size: test_set.len(),
        auc_roc,
        auc_pr,
        train_seconds,
        test_seconds: t1.elapsed().as_secs_f64(),
    })
}
