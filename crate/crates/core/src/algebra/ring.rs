use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("half degree k must be at least 1, got {0}")]
    InvalidHalfDegree(i64),
}

/// The graded polynomial ring `Q[a]` with `deg a = 2k`.
///
/// Homogeneous elements are monomials `λ·a^e`, so a homogeneous matrix entry is
/// determined by its scalar and the degree gap it bridges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedRing {
    k: u32,
}

impl GradedRing {
    pub fn new(k: i64) -> Result<Self, RingError> {
        if k < 1 || k > u32::MAX as i64 {
            return Err(RingError::InvalidHalfDegree(k));
        }
        Ok(GradedRing { k: k as u32 })
    }

    #[inline]
    pub fn k(&self) -> i64 {
        self.k as i64
    }

    /// Polynomial degree of `a`.
    #[inline]
    pub fn a_degree(&self) -> i64 {
        2 * self.k as i64
    }

    /// Exponent `e` with `gap = 2k·e`, if `gap` is a non-negative multiple of `2k`.
    pub fn exponent_for_gap(&self, gap: i64) -> Option<u32> {
        let d = self.a_degree();
        if gap < 0 || gap % d != 0 {
            None
        } else {
            Some((gap / d) as u32)
        }
    }
}
