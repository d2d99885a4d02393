use num_traits::Zero;
use thiserror::Error;

use super::{GradedRing, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("matrix is {rows}x{cols} but degree lists have target {targets} and source {sources} entries")]
    ShapeMismatch { rows: usize, cols: usize, targets: usize, sources: usize },
    #[error("entry ({row}, {col}) is not homogeneous: degree gap {gap} is not a non-negative multiple of {a_degree}")]
    NotHomogeneous { row: usize, col: usize, gap: i64, a_degree: i64 },
}

/// A graded free `Q[a]`-module given by the polynomial degrees of its basis.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GradedFreeModule {
    pub degrees: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(degrees: Vec<i64>) -> Self {
        GradedFreeModule { degrees }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }
}

/// Degree-preserving homomorphism between graded free modules. Only scalars are
/// stored: the entry at `(r, c)` means `scalar · a^e` with
/// `2k·e = source[c] - target[r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomMatrix {
    pub ring: GradedRing,
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub scalars: Matrix,
}

impl HomMatrix {
    pub fn new(ring: GradedRing, source: Vec<i64>, target: Vec<i64>, scalars: Matrix) -> Result<Self, HomError> {
        let m = HomMatrix { ring, source, target, scalars };
        m.validate()?;
        Ok(m)
    }

    pub fn zero(ring: GradedRing, source: Vec<i64>, target: Vec<i64>) -> Self {
        let scalars = Matrix::zeros(target.len(), source.len());
        HomMatrix { ring, source, target, scalars }
    }

    /// Checks the shape and that every nonzero entry bridges a non-negative
    /// multiple of `deg a`. Reports the first violation in row-major order.
    pub fn validate(&self) -> Result<(), HomError> {
        let (rows, cols) = self.scalars.shape();
        if rows != self.target.len() || cols != self.source.len() {
            return Err(HomError::ShapeMismatch {
                rows,
                cols,
                targets: self.target.len(),
                sources: self.source.len(),
            });
        }
        for r in 0..rows {
            for c in 0..cols {
                if self.scalars.get(r, c).is_zero() {
                    continue;
                }
                let gap = self.source[c] - self.target[r];
                if self.ring.exponent_for_gap(gap).is_none() {
                    return Err(HomError::NotHomogeneous { row: r, col: c, gap, a_degree: self.ring.a_degree() });
                }
            }
        }
        Ok(())
    }

    /// Exponent of `a` carried by entry `(r, c)` if it is nonzero.
    pub fn exponent(&self, r: usize, c: usize) -> Option<u32> {
        if self.scalars.get(r, c).is_zero() {
            None
        } else {
            self.ring.exponent_for_gap(self.source[c] - self.target[r])
        }
    }

    /// `self ∘ other`. Exponents add, so the scalar part is the ordinary product.
    pub fn compose(&self, other: &HomMatrix) -> HomMatrix {
        assert_eq!(self.source, other.target, "composing incompatible homomorphisms");
        HomMatrix {
            ring: self.ring,
            source: other.source.clone(),
            target: self.target.clone(),
            scalars: self.scalars.mul(&other.scalars),
        }
    }
}
