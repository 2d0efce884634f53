use serde::{Deserialize, Serialize};

use crate::lrbm::leaf_potential;
use crate::scalar::Scalar;

/// Parameters of the hidden unit a leaf contributes to the lifted RBM.
///
/// `d` is the output-bias difference `d1 - d0`, `c` the hidden bias, `w` the
/// weight on the leaf's path feature, and `u0`/`u1` the hidden-to-output
/// weights for the negative and positive class.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct LeafParams<T> {
    pub d: T,
    pub c: T,
    pub w: T,
    pub u0: T,
    pub u1: T,
}

impl<T: Scalar> LeafParams<T> {
    pub fn zeros() -> Self {
        Self::from_array([T::zero(); 5])
    }

    /// Order: `[d, c, w, u0, u1]`.
    pub fn from_array([d, c, w, u0, u1]: [T; 5]) -> Self {
        LeafParams { d, c, w, u0, u1 }
    }

    pub fn to_array(self) -> [T; 5] {
        [self.d, self.c, self.w, self.u0, self.u1]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// The value this leaf adds to the potential, see [`leaf_potential`].
    pub fn potential(&self) -> T {
        leaf_potential(self)
    }

    pub fn cast<U: Scalar>(self) -> LeafParams<U> {
        LeafParams::from_array(self.to_array().map(|x| U::of(x.to_f64_lossy())))
    }
}
