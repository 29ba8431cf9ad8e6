//! Scalar types that heatmaps can accumulate in.
//!
//! Every deposit made by the detectors is an integer, so `i64` is exact. The
//! float instantiations exist for callers that post-process heat with real
//! arithmetic (normalization, blending).

use std::fmt::{Debug, Display};
use std::ops::AddAssign;

use num_traits::{Num, NumCast, ToPrimitive};

pub trait HeatValue:
    Num + NumCast + ToPrimitive + Copy + PartialOrd + AddAssign + Debug + Display + Send + Sync
{
    /// Converts an exact integer deposit. Panics only if the value cannot be
    /// represented at all, which does not happen for the built-in instances.
    fn from_deposit(v: i64) -> Self {
        <Self as NumCast>::from(v).expect("heat deposit out of range for scalar type")
    }

    fn is_finite_value(&self) -> bool;
}

impl HeatValue for i32 {
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl HeatValue for i64 {
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl HeatValue for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl HeatValue for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}
