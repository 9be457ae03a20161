use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by the information measures: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    /// Tolerance for "sums to one" and nonnegativity checks on pmfs.
    fn pmf_tol() -> Self;

    /// Converts a literal; every `f64` constant used here is representable.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f64 {
    fn pmf_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn pmf_tol() -> Self {
        1e-5
    }
}

/// `-x log2 x` with the convention `0 log 0 = 0`.
pub(crate) fn neg_xlog2x<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        -x * x.log2()
    }
}
