//! Ranking metrics and the cross-validation harness.

mod cv;
mod metrics;

pub use cv::{cross_validate, cross_validate_with, CvOptions, FoldMetrics, MetricsReport, Summary, Truth, Variant};
pub use metrics::{auc_pr, auc_pr_pairs, auc_roc, auc_roc_pairs, ScoredExample};
