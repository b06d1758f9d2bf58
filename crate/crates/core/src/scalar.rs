//! Coefficient field abstraction.
//!
//! Every algebraic type in the crate is generic over a [`Scalar`]. The engine
//! only ever tests results for exact equality with zero, so the intended
//! instantiations are exact fields such as [`num_rational::BigRational`]
//! (the crate-root aliases) or [`num_rational::Rational64`] for small
//! instances where overflow is not a concern.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

pub trait Scalar:
    Clone + PartialEq + Debug + Display + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("integer not representable in scalar field")
    }

    fn half() -> Self {
        Self::one() / Self::from_int(2)
    }
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Debug
        + Display
        + Num
        + Neg<Output = T>
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}
