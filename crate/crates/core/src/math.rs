//! Float helpers that `core` does not provide.

/// Values of measures that are non-negative in theory are floored to zero
/// when they fall within this distance below it.
pub(crate) const NONNEG_FLOOR: f64 = 1e-12;

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// `-p log2 p` with the `0 log 0 = 0` limit.
#[inline]
pub(crate) fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * log2(p)
    } else {
        0.0
    }
}

#[inline]
pub(crate) fn clamp_nonneg(v: f64) -> f64 {
    if v < 0.0 && v > -NONNEG_FLOOR {
        0.0
    } else {
        v
    }
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}
