use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

use crate::dimension::Exponent;

/// Floating-point magnitude type for quantities and statistics.
///
/// Blanket-implemented for anything that looks like `f32`/`f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an exact integer. Exact below 2^53 for `f64`.
    fn from_count(n: u128) -> Self {
        Self::from_u128(n).unwrap_or_else(Self::infinity)
    }

    fn from_exponent(r: Exponent) -> Self {
        let num = Self::from_i64(*r.numer()).unwrap_or_else(Self::nan);
        let den = Self::from_i64(*r.denom()).unwrap_or_else(Self::nan);
        num / den
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}
