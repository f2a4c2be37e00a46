//! Coefficient rings.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Num, Signed};

/// Exact commutative ring with a total order, used for series coefficients.
pub trait Coefficient:
    Clone + PartialEq + PartialOrd + Debug + Display + Num + std::ops::Neg<Output = Self> + FromPrimitive
{
}

impl<T> Coefficient for T where
    T: Clone + PartialEq + PartialOrd + Debug + Display + Num + std::ops::Neg<Output = Self> + FromPrimitive
{
}

/// Integer-like rings with exact division and gcd, needed for fraction-free
/// elimination and content removal.
pub trait ExactRing: Coefficient + Integer + Signed {}

impl<T: Coefficient + Integer + Signed> ExactRing for T {}

pub(crate) fn from_i64<T: Coefficient>(v: i64) -> T {
    T::from_i64(v).expect("coefficient ring holds every i64")
}
