use crate::rrt::LeafParams;
use crate::scalar::Scalar;

/// `log(1 + e^x)` without overflow: `max(x, 0) + log1p(e^-|x|)`.
pub fn softplus<T: Scalar>(x: T) -> T {
    x.max(T::zero()) + (-x.abs()).exp().ln_1p()
}

/// Logistic function, evaluated on the side that cannot overflow.
pub fn sigmoid<T: Scalar>(x: T) -> T {
    if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

/// Contribution of one active hidden unit to the potential:
///
/// `d + log((1 + e^(c + u1 + w)) / (1 + e^(c + u0 + w)))`
pub fn leaf_potential<T: Scalar>(theta: &LeafParams<T>) -> T {
    let base = theta.c + theta.w;
    theta.d + softplus(base + theta.u1) - softplus(base + theta.u0)
}

/// Partial derivatives of [`leaf_potential`] in `[d, c, w, u0, u1]` order.
pub fn leaf_potential_gradient<T: Scalar>(theta: &LeafParams<T>) -> [T; 5] {
    let base = theta.c + theta.w;
    let s1 = sigmoid(base + theta.u1);
    let s0 = sigmoid(base + theta.u0);
    [T::one(), s1 - s0, s1 - s0, -s0, s1]
}

/// `P(y = 1)` for a potential, clamped to `±T::SATURATION` first.
pub fn probability<T: Scalar>(psi: T) -> T {
    probability_clamped(psi, T::of(T::SATURATION))
}

pub fn probability_clamped<T: Scalar>(psi: T, clamp: T) -> T {
    sigmoid(psi.max(-clamp).min(clamp))
}

/// `log P(y = label | psi)` (unclamped).
pub fn log_likelihood<T: Scalar>(psi: T, label: bool) -> T {
    if label {
        -softplus(-psi)
    } else {
        -softplus(psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(d: f64, c: f64, w: f64, u0: f64, u1: f64) -> LeafParams<f64> {
        LeafParams { d, c, w, u0, u1 }
    }

    #[test]
    fn zero_parameters_give_zero() {
        assert_eq!(leaf_potential(&theta(0.0, 0.0, 0.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn bias_only() {
        assert!((leaf_potential(&theta(0.5, 0.0, 0.0, 0.0, 0.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matches_direct_evaluation() {
        // log((1 + e^2) / (1 + e^1)), evaluated independently.
        let direct = ((1.0 + 2f64.exp()) / (1.0 + 1f64.exp())).ln();
        let v = leaf_potential(&theta(0.0, 0.0, 1.0, 0.0, 1.0));
        assert!((v - direct).abs() < 1e-14);
        assert!((v - 0.8137).abs() < 1e-4);
    }

    #[test]
    fn large_arguments_do_not_overflow() {
        let v = leaf_potential(&theta(0.0, 800.0, 0.0, -800.0, 0.0));
        assert!(v.is_finite());
        assert!((v - (800.0 - 2f64.ln())).abs() < 1e-9);
        assert!(softplus(-800.0f64) >= 0.0);
    }

    #[test]
    fn probability_examples() {
        assert_eq!(probability(0.0f64), 0.5);
        assert!((1.0 - probability(30.0f64)) < 1e-9);
        assert!(probability(30.0f64) < 1.0);
        assert!((probability(0.8137f64) - 0.6929).abs() < 1e-4);
        let p = probability(0.8137f64);
        assert!((p - 1.0 / (1.0 + (-0.8137f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn f32_saturation_stays_open() {
        let hi = probability(1e6f32);
        let lo = probability(-1e6f32);
        assert!(hi < 1.0 && lo > 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let t = theta(0.3, -0.2, 0.7, 0.4, -1.1);
        let g = leaf_potential_gradient(&t);
        let h = 1e-6;
        for k in 0..5 {
            let mut a = t.to_array();
            let mut b = t.to_array();
            a[k] += h;
            b[k] -= h;
            let fd =
                (leaf_potential(&LeafParams::from_array(a)) - leaf_potential(&LeafParams::from_array(b))) / (2.0 * h);
            assert!((fd - g[k]).abs() < 1e-8, "coordinate {k}");
        }
    }
}
