use serde::{Deserialize, Serialize};

use super::potential::{leaf_potential, leaf_potential_gradient};
use crate::rrt::LeafParams;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CdMode {
    /// Each coordinate step uses the gradient of the mean squared error over
    /// all of the leaf's targets.
    #[default]
    Batch,
    /// Each coordinate step uses one target at a time, in input order.
    Online,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdConfig<T> {
    pub learning_rate: T,
    pub max_iters: usize,
    pub tolerance: T,
    pub mode: CdMode,
}

impl<T: Scalar> Default for CdConfig<T> {
    fn default() -> Self {
        CdConfig {
            learning_rate: T::of(0.05),
            max_iters: 500,
            tolerance: T::of(1e-8),
            mode: CdMode::Batch,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CdOutcome<T> {
    pub params: LeafParams<T>,
    /// Completed sweeps over the five coordinates.
    pub iterations: usize,
    /// Final mean squared error between the leaf value and the targets.
    pub objective: T,
}

/// Fits the leaf parameters so that the leaf value matches `targets` in the
/// least-squares sense, cycling through `d, c, w, u0, u1`.
///
/// The leaf value is the same for every target, so the optimum is reached
/// when it equals their mean. Stops after `max_iters` sweeps or once a sweep
/// improves the objective by less than `tolerance`. Empty input returns
/// `theta0` unchanged.
pub fn coordinate_descent<T: Scalar>(targets: &[T], theta0: LeafParams<T>, config: &CdConfig<T>) -> LeafParams<T> {
    coordinate_descent_traced(targets, theta0, config).params
}

pub fn coordinate_descent_traced<T: Scalar>(
    targets: &[T],
    theta0: LeafParams<T>,
    config: &CdConfig<T>,
) -> CdOutcome<T> {
    if targets.is_empty() {
        return CdOutcome {
            params: theta0,
            iterations: 0,
            objective: T::zero(),
        };
    }
    let n = T::from_usize(targets.len()).expect("length fits");
    let mean = targets.iter().copied().sum::<T>() / n;
    let variance = targets.iter().map(|&t| (t - mean) * (t - mean)).sum::<T>() / n;
    let objective = |theta: &LeafParams<T>| {
        let e = leaf_potential(theta) - mean;
        e * e + variance
    };
    let two = T::of(2.0);
    let lr = config.learning_rate;

    let mut coords = theta0.to_array();
    let mut current = objective(&theta0);
    let mut iterations = 0;
    while iterations < config.max_iters {
        match config.mode {
            CdMode::Batch => {
                for k in 0..5 {
                    let theta = LeafParams::from_array(coords);
                    let residual = leaf_potential(&theta) - mean;
                    coords[k] = coords[k] - lr * two * residual * leaf_potential_gradient(&theta)[k];
                }
            }
            CdMode::Online => {
                for &target in targets {
                    for k in 0..5 {
                        let theta = LeafParams::from_array(coords);
                        let residual = leaf_potential(&theta) - target;
                        coords[k] = coords[k] - lr * two * residual * leaf_potential_gradient(&theta)[k];
                    }
                }
            }
        }
        iterations += 1;
        let next = objective(&LeafParams::from_array(coords));
        let improvement = current - next;
        current = next;
        if improvement < config.tolerance {
            break;
        }
    }
    CdOutcome {
        params: LeafParams::from_array(coords),
        iterations,
        objective: current,
    }
}
