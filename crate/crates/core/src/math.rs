//! Float routines routed through `num-traits`, which falls back to `libm`
//! when the crate is built without `std`.

use num_traits::Float;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    Float::ln(x)
}

#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    Float::ln_1p(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    Float::exp(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    Float::abs(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    Float::floor(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    Float::hypot(x, y)
}

pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[inline]
pub(crate) fn mul_add(a: f64, b: f64, c: f64) -> f64 {
    Float::mul_add(a, b, c)
}
