use crate::error::{invalid, Result};
use crate::scalar::{neg_xlog2x, Real};

fn check_unit<T: Real>(name: &str, x: T) -> Result<()> {
    if x.is_nan() || x < T::zero() || x > T::one() {
        return Err(invalid(format!("{name} = {x} is outside [0, 1]")));
    }
    Ok(())
}

/// Binary entropy `h2(x)` in bits.
pub fn binary_entropy<T: Real>(x: T) -> Result<T> {
    check_unit("x", x)?;
    Ok(h2(x))
}

/// Binary convolution `a * b = a(1-b) + (1-a)b`.
pub fn binary_star<T: Real>(a: T, b: T) -> Result<T> {
    check_unit("a", a)?;
    check_unit("b", b)?;
    Ok(star(a, b))
}

/// Inverse of `h2` on `[0, 1/2]`, by bisection.
pub fn inverse_binary_entropy<T: Real>(y: T) -> Result<T> {
    check_unit("y", y)?;
    let (mut lo, mut hi) = (T::zero(), T::lit(0.5));
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if h2(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if y <= T::zero() {
        T::zero()
    } else if y >= T::one() {
        T::lit(0.5)
    } else {
        hi
    })
}

pub(crate) fn h2<T: Real>(x: T) -> T {
    neg_xlog2x(x) + neg_xlog2x(T::one() - x)
}

pub(crate) fn star<T: Real>(a: T, b: T) -> T {
    a * (T::one() - b) + (T::one() - a) * b
}
