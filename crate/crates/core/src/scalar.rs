//! Scalar types usable as objective values.
//!
//! Everything that compares or measures objective vectors is generic over
//! [`Scalar`]. The experiments use [`crate::Exact`], a 128-bit rational whose
//! ordering is decided without rounding; `f64`/`f32` are available for quick
//! exploratory work where ties do not matter.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Num, Signed, ToPrimitive};

pub trait Scalar:
    Copy + PartialOrd + Debug + Display + Num + Signed + ToPrimitive + Send + Sync + 'static
{
    /// The value `numer / denom`. `denom` must be positive.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_float_scalar {
    ($f:ty) => {
        impl Scalar for $f {
            fn from_ratio(numer: i64, denom: i64) -> Self {
                debug_assert!(denom > 0);
                (numer as f64 / denom as f64) as $f
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

macro_rules! impl_ratio_scalar {
    ($i:ty) => {
        impl Scalar for Ratio<$i> {
            fn from_ratio(numer: i64, denom: i64) -> Self {
                assert!(denom > 0, "rational denominator must be positive");
                Ratio::new(numer as $i, denom as $i)
            }
        }
    };
}

impl_ratio_scalar!(i64);
impl_ratio_scalar!(i128);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_comparison_has_no_rounding() {
        // 2k + 1/n and its neighbour 2k + 1/(n+1) differ by far less than f32 epsilon at this scale
        let a = <Ratio<i128>>::from_ratio(2_000_000_001, 1_000_000_000);
        let b = <Ratio<i128>>::from_ratio(2_000_000_002, 1_000_000_000);
        assert!(a < b);
        assert_ne!(a, b);
        assert_eq!(a.as_f64() as f32, b.as_f64() as f32);
    }

    #[test]
    fn equal_values_with_different_representations_compare_equal() {
        let a = <Ratio<i128>>::from_ratio(402, 40);
        let b = <Ratio<i128>>::from_ratio(201, 20);
        assert_eq!(a, b);
        assert_eq!(f64::from_ratio(201, 20), 10.05);
    }
}
