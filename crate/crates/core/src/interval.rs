//! Two-sided enclosures with an explicit certification status.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How an enclosure was produced.
///
/// `Certified` intervals come only from certified inputs combined with
/// outward rounding or explicit remainder bounds. `Heuristic` marks a bound
/// obtained by optimization without a matching certificate (typically the
/// upper end of a sup taken over a non-compact parametrization). `Clamped`
/// records that a mathematically larger value was cut to a required range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Certified,
    Heuristic,
    Clamped,
}

impl Status {
    /// Combined status of an arithmetic combination of two enclosures.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Certified, Certified) => Certified,
            (Clamped, Certified) | (Certified, Clamped) | (Clamped, Clamped) => Clamped,
            _ => Heuristic,
        }
    }

    pub fn is_certified(self) -> bool {
        matches!(self, Status::Certified)
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Certified => "certified",
            Status::Heuristic => "heuristic",
            Status::Clamped => "clamped",
        };
        f.write_str(s)
    }
}

/// A `[lo, hi]` enclosure of a real quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub lo: f64,
    pub hi: f64,
    pub status: Status,
}

impl BoundInterval {
    pub fn new(lo: f64, hi: f64, status: Status) -> Result<Self> {
        // Negated form also rejects NaN endpoints.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(lo <= hi) {
            return Err(Error::InvalidParameter(format!(
                "interval endpoints out of order: lo = {lo}, hi = {hi}"
            )));
        }
        Ok(Self { lo, hi, status })
    }

    pub fn certified(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Status::Certified)
    }

    pub fn heuristic(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Status::Heuristic)
    }

    /// Exact point value.
    pub fn degenerate(x: f64, status: Status) -> Self {
        Self {
            lo: x,
            hi: x,
            status,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Widen both ends outward by `eps` (absolute).
    pub fn widened(&self, eps: f64) -> Self {
        Self {
            lo: self.lo - eps,
            hi: self.hi + eps,
            status: self.status,
        }
    }

    /// Outward-rounded sum.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: (self.lo + other.lo).next_down(),
            hi: (self.hi + other.hi).next_up(),
            status: self.status.combine(other.status),
        }
    }

    /// Outward-rounded scaling by a non-negative factor.
    pub fn scale(&self, c: f64) -> Self {
        debug_assert!(c >= 0.0);
        Self {
            lo: (self.lo * c).next_down(),
            hi: (self.hi * c).next_up(),
            status: self.status,
        }
    }

    /// Outward-rounded square root of a non-negative interval.
    pub fn sqrt(&self) -> Self {
        debug_assert!(self.lo >= 0.0);
        Self {
            lo: self.lo.sqrt().next_down().max(0.0),
            hi: self.hi.sqrt().next_up(),
            status: self.status,
        }
    }

    /// Intersection with `[lo, hi]`, keeping the status. The intersection of
    /// two valid enclosures of the same quantity is again valid.
    pub fn intersect_range(&self, lo: f64, hi: f64) -> Result<Self> {
        Self::new(self.lo.max(lo), self.hi.min(hi), self.status)
    }

    /// Clamp to `[lo, hi]`; marks the result `Clamped` when clamping moved
    /// an endpoint.
    pub fn clamp_to(&self, lo: f64, hi: f64) -> Self {
        let new_lo = self.lo.clamp(lo, hi);
        let new_hi = self.hi.clamp(lo, hi);
        let status = if new_lo != self.lo || new_hi != self.hi {
            Status::Clamped
        } else {
            self.status
        };
        Self {
            lo: new_lo,
            hi: new_hi,
            status,
        }
    }
}

impl std::fmt::Display for BoundInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.12e}, {:.12e}] ({})", self.lo, self.hi, self.status)
    }
}
