//! Float functions that are not available in `core`.
//!
//! Everything routes through `libm` so results are identical with and
//! without `std`.

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn round_half_even(x: f64) -> f64 {
    libm::rint(x)
}
