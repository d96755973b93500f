//! Number types the traffic engine runs on.
//!
//! `f64` is the fast mode. `BigRational` is the oracle mode: every geodesic
//! count and every split fraction is carried exactly.

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    Fast,
    Oracle,
}

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + for<'a> AddAssign<&'a Self>
{
    const MODE: Mode;

    /// Converts a measure weight. Exact for the rational implementation,
    /// since every finite `f64` is a dyadic rational.
    fn from_weight(w: f64) -> Self;

    fn from_count(c: u64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_rational(r: BigRational) -> Self;

    /// `self * a / b` without intermediate rounding where possible.
    fn mul_ratio(&self, a: &Self, b: &Self) -> Self {
        self.clone() * a.clone() / b.clone()
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Fast;

    fn from_rational(r: BigRational) -> Self {
        ToPrimitive::to_f64(&r).unwrap_or(f64::NAN)
    }

    fn from_weight(w: f64) -> Self {
        w
    }

    fn from_count(c: u64) -> Self {
        c as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn mul_ratio(&self, a: &Self, b: &Self) -> Self {
        self * (a / b)
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Oracle;

    fn from_rational(r: BigRational) -> Self {
        r
    }

    fn from_weight(w: f64) -> Self {
        BigRational::from_float(w).expect("measure weights are finite")
    }

    fn from_count(c: u64) -> Self {
        BigRational::from_integer(BigInt::from(c))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn mul_ratio(&self, a: &Self, b: &Self) -> Self {
        // Integers are the common case (tree counts, uniform weights); keep
        // the numerator product unreduced until the single division.
        if self.is_zero() {
            return BigRational::zero();
        }
        self * a / b
    }
}
