//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A real scalar usable for potentials, gradients and metrics.
///
/// Implemented for `f32` and `f64`. The crate root exports `f64` aliases for
/// the common model types.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Default clamp for the potential before the sigmoid. Chosen so that
    /// `sigmoid(±SATURATION)` is still strictly inside (0, 1) at this precision.
    const SATURATION: f64;

    /// Lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to every Scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const SATURATION: f64 = 30.0;
}

impl Scalar for f32 {
    const SATURATION: f64 = 15.0;
}
