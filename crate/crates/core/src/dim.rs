use crate::error::{DspError, Result};

/// Default upper bound on the ambient dimension. Dense per-mask structures
/// take `2^d` bits, so 25 keeps a single edge set at or below 4 MiB.
pub const DEFAULT_MAX_DIMENSION: u32 = 25;

/// Absolute ceiling: edge masks are stored in a `u32` and per-mask bit
/// arrays must stay addressable.
pub const HARD_MAX_DIMENSION: u32 = 31;

/// Ambient dimension `d`: vertices are `1..=d` externally, bits `0..d`
/// internally (vertex `i` is bit `i-1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(d: u32) -> Result<Self> {
        Self::with_limit(d, DEFAULT_MAX_DIMENSION)
    }

    /// Same guard with a caller-chosen limit (still capped at the hard
    /// ceiling). The CLI threads `DSP_MAX_D` through here.
    pub fn with_limit(d: u32, limit: u32) -> Result<Self> {
        let max = limit.min(HARD_MAX_DIMENSION);
        if d == 0 || d > max {
            return Err(DspError::DimensionOutOfRange { d, max });
        }
        Ok(Dimension(d))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn usize(self) -> usize {
        self.0 as usize
    }

    /// Bitmask with all `d` vertex bits set (the edge `{1,..,d}`).
    #[inline]
    pub fn full_mask(self) -> u32 {
        if self.0 == 32 {
            u32::MAX
        } else {
            (1u32 << self.0) - 1
        }
    }

    /// Number of nonzero masks, `2^d - 1`.
    #[inline]
    pub fn mask_count(self) -> u64 {
        (1u64 << self.0) - 1
    }

    /// Largest attainable degree: every vertex lies in `2^{d-1}` edges.
    #[inline]
    pub fn max_degree(self) -> i64 {
        1i64 << (self.0 - 1)
    }

    /// `x <= 2^{d-2}`, computed as `4x <= 2^d` so that d = 1 (where the
    /// threshold is the fraction 1/2) still compares exactly.
    #[inline]
    pub fn le_half_center(self, x: i64) -> bool {
        4 * x <= (1i64 << self.0)
    }

    /// `x < 2^{d-2}` (scaled, exact for every d >= 1).
    #[inline]
    pub fn lt_half_center(self, x: i64) -> bool {
        4 * x < (1i64 << self.0)
    }

    /// `x >= 2^{d-2}` (scaled).
    #[inline]
    pub fn ge_half_center(self, x: i64) -> bool {
        4 * x >= (1i64 << self.0)
    }

    pub fn check_same(self, other: Dimension) -> Result<()> {
        if self != other {
            return Err(DspError::DimensionMismatch {
                left: self.0,
                right: other.0,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
