//! Positive real intervals with endpoint-openness flags.
//!
//! One type covers both the open intervals used for allotments and the
//! compact intervals used for temperings. Products and powers track the
//! flags; downstream feasibility checks always work with the closed hull,
//! so an open endpoint is informational rather than load-bearing.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IntervalError {
    #[error("interval endpoints out of order or empty: lo={lo}, hi={hi}")]
    Empty { lo: f64, hi: f64 },
    #[error("lower endpoint must be >= 0, got {0}")]
    NegativeLower(f64),
    #[error("endpoint is NaN")]
    NaN,
    #[error("endpoint at {0} must be open")]
    MustBeOpen(f64),
}

/// A nonempty subinterval of `[0, +inf]` with per-endpoint openness.
///
/// Invariants: `lo <= hi`; `lo == 0` forces `lo_open`; `hi == +inf` forces
/// `hi_open`; a degenerate point `lo == hi` must be closed on both sides
/// and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositiveInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl PositiveInterval {
    pub fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(IntervalError::NaN);
        }
        if lo < 0.0 {
            return Err(IntervalError::NegativeLower(lo));
        }
        if lo > hi || (lo == hi && (lo_open || hi_open || lo == 0.0)) {
            return Err(IntervalError::Empty { lo, hi });
        }
        if lo == 0.0 && !lo_open {
            return Err(IntervalError::MustBeOpen(0.0));
        }
        if hi == f64::INFINITY && !hi_open {
            return Err(IntervalError::MustBeOpen(f64::INFINITY));
        }
        Ok(Self { lo, hi, lo_open, hi_open })
    }

    /// Closed interval `[lo, hi]`, `0 < lo <= hi < inf`.
    pub fn closed(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        Self::new(lo, hi, false, false)
    }

    /// Open interval `(lo, hi)`.
    pub fn open(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        Self::new(lo, hi, true, true)
    }

    /// Degenerate point interval `[x, x]`.
    pub fn point(x: f64) -> Result<Self, IntervalError> {
        Self::new(x, x, false, false)
    }

    /// The whole open ray `(0, inf)`.
    pub fn positive_ray() -> Self {
        Self { lo: 0.0, hi: f64::INFINITY, lo_open: true, hi_open: true }
    }

    /// Bounded away from both `0` and `inf`.
    pub fn is_bounded(&self) -> bool {
        self.lo > 0.0 && self.hi < f64::INFINITY
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Membership in the closed hull `[lo, hi]`.
    pub fn closure_contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Smallest interval containing both operands; an endpoint of the hull
    /// is open only if every operand attaining it is open there.
    pub fn hull(&self, other: &Self) -> Self {
        let (lo, lo_open) = match self.lo.partial_cmp(&other.lo).unwrap() {
            std::cmp::Ordering::Less => (self.lo, self.lo_open),
            std::cmp::Ordering::Greater => (other.lo, other.lo_open),
            std::cmp::Ordering::Equal => (self.lo, self.lo_open && other.lo_open),
        };
        let (hi, hi_open) = match self.hi.partial_cmp(&other.hi).unwrap() {
            std::cmp::Ordering::Greater => (self.hi, self.hi_open),
            std::cmp::Ordering::Less => (other.hi, other.hi_open),
            std::cmp::Ordering::Equal => (self.hi, self.hi_open && other.hi_open),
        };
        Self { lo, hi, lo_open, hi_open }
    }
}

/// Endpoint-wise interval product: `[a,b] * [c,d] = [a*c, b*d]` on
/// nonnegative endpoints. A resulting endpoint is open iff either factor's
/// corresponding endpoint is open; overflow to `+inf` is recorded as an
/// open upper endpoint.
pub fn interval_mul(a: &PositiveInterval, b: &PositiveInterval) -> PositiveInterval {
    let lo = a.lo * b.lo;
    let hi = a.hi * b.hi;
    let mut lo_open = a.lo_open || b.lo_open;
    let mut hi_open = a.hi_open || b.hi_open;
    if lo == 0.0 {
        lo_open = true;
    }
    if hi == f64::INFINITY {
        hi_open = true;
    }
    PositiveInterval { lo, hi, lo_open, hi_open }
}

/// Interval power with a real exponent, on intervals within the closure of
/// `(0, inf)`. For `c >= 0` the map is monotone increasing, so endpoints map
/// in place; for `c < 0` it is decreasing, so they swap. `c == 0` gives the
/// exact point `[1, 1]`. Openness flags travel with the endpoint that
/// supplies each bound. Integer exponents `c >= 1` are computed by repeated
/// multiplication so that the result agrees exactly with folded
/// [`interval_mul`].
pub fn interval_pow(base: &PositiveInterval, c: f64) -> PositiveInterval {
    if c == 0.0 {
        return PositiveInterval::point(1.0).unwrap();
    }
    if c >= 1.0 && c.fract() == 0.0 && c <= 64.0 {
        let mut acc = *base;
        for _ in 1..(c as u32) {
            acc = interval_mul(base, &acc);
        }
        return acc;
    }
    let (mut lo, mut hi, mut lo_open, mut hi_open) = if c > 0.0 {
        (base.lo.powf(c), base.hi.powf(c), base.lo_open, base.hi_open)
    } else {
        // powf maps 0 to +inf and +inf to 0 for negative exponents.
        (base.hi.powf(c), base.lo.powf(c), base.hi_open, base.lo_open)
    };
    if lo == 0.0 {
        lo_open = true;
    }
    if hi == f64::INFINITY {
        hi_open = true;
    }
    if lo.is_nan() {
        lo = 0.0;
        lo_open = true;
    }
    if hi.is_nan() {
        hi = f64::INFINITY;
        hi_open = true;
    }
    PositiveInterval { lo, hi, lo_open, hi_open }
}
