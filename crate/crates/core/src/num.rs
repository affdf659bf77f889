//! Scalar abstraction for the numeric pipeline.
//!
//! Association scores, similarities and correlations are generic over a
//! floating-point scalar so the same code runs at `f32` or `f64`. Counts are
//! never generic; they stay exact integers ([`u64`]).

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + AddAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an exact count.
    fn from_count(count: u64) -> Self {
        Self::from_u64(count).expect("count representable as scalar")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + AddAssign + Sum + Debug + Display + Send + Sync + 'static
{
}
