//! Numeric scalar abstraction.
//!
//! Every demand, price and cost in the crate is generic over [`Scalar`], so the
//! same planner runs on `f32`, `f64` or exact rationals. Operations that need
//! transcendental functions (Zipf weights) additionally require
//! [`num_traits::Float`].

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// A real-valued quantity: a demand, a price or a cost.
pub trait Scalar:
    Num + Copy + PartialOrd + Sum + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Total order on validated (non-NaN) values.
    #[inline]
    fn total_cmp_valid(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    /// True for values that are comparable with themselves and finite.
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.partial_cmp(self).is_some() && self.to_f64().is_some_and(f64::is_finite)
    }

    #[inline]
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num + Copy + PartialOrd + Sum + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Exact rational arithmetic, used to certify optimality without rounding.
pub type Rational = num_rational::Ratio<i64>;
