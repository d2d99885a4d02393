//! Bounded chain complexes of graded free `Q[a]`-modules and their field
//! specializations.
//!
//! A [`GradedComplex`] stores only scalars; the power of `a` carried by an entry
//! is recovered from the generator degrees. Reducing mod `a` keeps the
//! exponent-zero entries, specializing at `a = 1` keeps every scalar and turns
//! the polynomial degree into a filtration level.

mod chain;
mod elimination;
mod first_differential;
mod homology;

pub use chain::ChainData;
pub use first_differential::{first_differential, FirstDifferential};
pub use homology::{homology_field, ClassId, FieldHomology, HomologyBlock};

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{GradedRing, HomError, HomMatrix, Matrix, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differential at degree {degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch { degree: i64, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("differential at degree {degree}: {source}")]
    NotHomogeneous { degree: i64, source: HomError },
    #[error("d∘d ≠ 0 on the square C^{degree} → C^{} → C^{}: d^{} ∘ d^{degree} is nonzero", degree + 1, degree + 2, degree + 1)]
    DSquaredNonzero { degree: i64 },
    #[error("differential at degree {degree} raises the filtration at entry ({row}, {col})")]
    RaisesFiltration { degree: i64, row: usize, col: usize },
    #[error("differential at degree {degree} changes the polynomial degree at entry ({row}, {col})")]
    NotDegreePreserving { degree: i64, row: usize, col: usize },
    #[error("pivot ({row}, {col}) at degree {degree} is zero")]
    PivotZero { degree: i64, row: usize, col: usize },
    #[error("pivot ({row}, {col}) at degree {degree} carries a^{exponent} and is not invertible")]
    PivotNotUnit { degree: i64, row: usize, col: usize, exponent: i64 },
    #[error("pivot ({row}, {col}) at degree {degree} is out of range")]
    PivotOutOfRange { degree: i64, row: usize, col: usize },
    #[error("lifted cycle at degree {degree} has a boundary that is not divisible by a")]
    DivisionByA { degree: i64 },
    #[error("complexes over different rings")]
    RingMismatch,
}

/// Bounded complex `C^i → C^{i+1}` of graded free `Q[a]`-modules with a
/// degree-preserving differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    ring: GradedRing,
    chain: ChainData,
}

impl GradedComplex {
    pub fn zero(ring: GradedRing) -> Self {
        GradedComplex { ring, chain: ChainData::default() }
    }

    /// Builds and validates a complex from generator degrees and scalar matrices.
    pub fn new(
        ring: GradedRing,
        modules: BTreeMap<i64, Vec<i64>>,
        differentials: BTreeMap<i64, Matrix>,
    ) -> Result<Self, ComplexError> {
        let chain = ChainData::new(modules, differentials)?;
        let c = GradedComplex { ring, chain };
        c.validate()?;
        Ok(c)
    }

    /// `F_{i,s}`: a single generator of degree `s` at homological degree `i`.
    pub fn free_piece(ring: GradedRing, i: i64, s: i64) -> Self {
        let mut chain = ChainData::default();
        chain.set_module(i, vec![s]);
        GradedComplex { ring, chain }
    }

    /// `T_{i,m,s}`: `Q[a]{s+2km}` at degree `i-1` mapping by `a^m` onto `Q[a]{s}` at degree `i`.
    pub fn torsion_piece(ring: GradedRing, i: i64, m: u32, s: i64) -> Self {
        let mut chain = ChainData::default();
        chain.set_module(i - 1, vec![s + ring.a_degree() * m as i64]);
        chain.set_module(i, vec![s]);
        chain.set_differential(i - 1, Matrix::identity(1));
        GradedComplex { ring, chain }
    }

    pub fn ring(&self) -> GradedRing {
        self.ring
    }

    pub fn k(&self) -> i64 {
        self.ring.k()
    }

    pub fn chain(&self) -> &ChainData {
        &self.chain
    }

    pub fn degrees(&self, i: i64) -> &[i64] {
        self.chain.labels(i)
    }

    pub fn rank(&self, i: i64) -> usize {
        self.chain.rank(i)
    }

    pub fn total_rank(&self) -> usize {
        self.chain.total_rank()
    }

    pub fn support(&self) -> Vec<i64> {
        self.chain.support()
    }

    /// Scalar matrix of `d^i: C^i → C^{i+1}`.
    pub fn differential(&self, i: i64) -> Matrix {
        self.chain.differential(i)
    }

    /// `d^i` as a homogeneous matrix.
    pub fn hom(&self, i: i64) -> HomMatrix {
        HomMatrix {
            ring: self.ring,
            source: self.degrees(i).to_vec(),
            target: self.degrees(i + 1).to_vec(),
            scalars: self.differential(i),
        }
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        self.chain.check_shapes()?;
        for i in self.chain.differential_degrees() {
            self.hom(i).validate().map_err(|source| ComplexError::NotHomogeneous { degree: i, source })?;
        }
        self.chain.check_d_squared()
    }

    pub fn direct_sum(&self, other: &GradedComplex) -> Result<GradedComplex, ComplexError> {
        if self.ring != other.ring {
            return Err(ComplexError::RingMismatch);
        }
        Ok(GradedComplex { ring: self.ring, chain: self.chain.direct_sum(&other.chain) })
    }

    /// `‖hom‖{poly}`: moves everything up `hom` homological degrees and shifts
    /// all polynomial degrees by `poly`.
    pub fn shifted(&self, hom: i64, poly: i64) -> GradedComplex {
        GradedComplex { ring: self.ring, chain: self.chain.shifted(hom, poly) }
    }

    /// Elementary change of basis of `C^i`: replaces generator `target` by
    /// `target + factor·a^e·source` where `e` is forced by the degrees.
    /// Panics if the move is not homogeneous.
    pub fn add_generator_multiple(&mut self, i: i64, target: usize, source: usize, factor: &Q) {
        let degs = self.degrees(i);
        assert!(target != source);
        assert!(
            self.ring.exponent_for_gap(degs[target] - degs[source]).is_some(),
            "non-homogeneous basis change"
        );
        self.chain.add_generator_multiple(i, target, source, factor);
    }

    /// Rescales generator `idx` of `C^i` by a nonzero scalar.
    pub fn scale_generator(&mut self, i: i64, idx: usize, factor: &Q) {
        assert!(!factor.is_zero());
        self.chain.scale_generator(i, idx, factor);
    }

    /// Reorders `C^i` so that new generator `j` is old generator `perm[j]`.
    pub fn permute_generators(&mut self, i: i64, perm: &[usize]) {
        self.chain.permute(i, perm);
    }

    /// Drops a generator that spans a direct summand.
    pub(crate) fn remove_generator(&mut self, i: i64, idx: usize) {
        self.chain.remove_generator(i, idx);
    }

    /// Swaps two generators of `C^i`.
    pub fn swap_generators(&mut self, i: i64, a: usize, b: usize) {
        self.chain.swap_generators(i, a, b);
    }

    /// Gaussian elimination of the unit entry `(row, col)` of `d^i`: `col` indexes
    /// `C^i`, `row` indexes `C^{i+1}`. The result is homotopy equivalent.
    pub fn gaussian_eliminate(&self, i: i64, row: usize, col: usize) -> Result<GradedComplex, ComplexError> {
        let d = self.differential(i);
        if row >= d.rows() || col >= d.cols() {
            return Err(ComplexError::PivotOutOfRange { degree: i, row, col });
        }
        if d.get(row, col).is_zero() {
            return Err(ComplexError::PivotZero { degree: i, row, col });
        }
        let gap = self.degrees(i)[col] - self.degrees(i + 1)[row];
        if gap != 0 {
            return Err(ComplexError::PivotNotUnit { degree: i, row, col, exponent: gap / self.ring.a_degree() });
        }
        Ok(GradedComplex { ring: self.ring, chain: elimination::eliminate(&self.chain, i, row, col) })
    }

    /// `C / aC`: entries carrying a positive power of `a` vanish.
    pub fn reduce_mod_a(&self) -> FieldComplex {
        let mut chain = self.chain.clone();
        for i in self.chain.differential_degrees() {
            let src = self.degrees(i).to_vec();
            let tgt = self.degrees(i + 1).to_vec();
            chain.map_differential(i, |r, c, x| if src[c] == tgt[r] { x.clone() } else { Q::zero() });
        }
        FieldComplex { kind: LabelKind::PolyDegree, chain }
    }

    /// `C / (a-1)C` with the filtration induced by the polynomial degree.
    pub fn specialize_a_to_1(&self) -> FieldComplex {
        FieldComplex { kind: LabelKind::Filtration, chain: self.chain.clone() }
    }
}

/// What the per-generator integer label of a [`FieldComplex`] means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelKind {
    /// Polynomial degree; the differential preserves it.
    PolyDegree,
    /// Increasing filtration level; the differential does not raise it.
    Filtration,
}

/// Complex of finite-dimensional rational vector spaces with one integer label
/// per basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldComplex {
    kind: LabelKind,
    chain: ChainData,
}

impl FieldComplex {
    pub fn new(
        kind: LabelKind,
        modules: BTreeMap<i64, Vec<i64>>,
        differentials: BTreeMap<i64, Matrix>,
    ) -> Result<Self, ComplexError> {
        let chain = ChainData::new(modules, differentials)?;
        let c = FieldComplex { kind, chain };
        c.validate()?;
        Ok(c)
    }

    pub fn kind(&self) -> LabelKind {
        self.kind
    }

    pub fn chain(&self) -> &ChainData {
        &self.chain
    }

    pub fn labels(&self, i: i64) -> &[i64] {
        self.chain.labels(i)
    }

    pub fn rank(&self, i: i64) -> usize {
        self.chain.rank(i)
    }

    pub fn support(&self) -> Vec<i64> {
        self.chain.support()
    }

    pub fn differential(&self, i: i64) -> Matrix {
        self.chain.differential(i)
    }

    pub fn is_empty(&self) -> bool {
        self.chain.total_rank() == 0
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        self.chain.check_shapes()?;
        for i in self.chain.differential_degrees() {
            let d = self.chain.differential(i);
            let src = self.labels(i);
            let tgt = self.labels(i + 1);
            for r in 0..d.rows() {
                for c in 0..d.cols() {
                    if d.get(r, c).is_zero() {
                        continue;
                    }
                    match self.kind {
                        LabelKind::PolyDegree if src[c] != tgt[r] => {
                            return Err(ComplexError::NotDegreePreserving { degree: i, row: r, col: c })
                        }
                        LabelKind::Filtration if tgt[r] > src[c] => {
                            return Err(ComplexError::RaisesFiltration { degree: i, row: r, col: c })
                        }
                        _ => {}
                    }
                }
            }
        }
        self.chain.check_d_squared()
    }

    pub fn direct_sum(&self, other: &FieldComplex) -> FieldComplex {
        assert_eq!(self.kind, other.kind);
        FieldComplex { kind: self.kind, chain: self.chain.direct_sum(&other.chain) }
    }

    /// Gaussian elimination of an isomorphism `(row, col)` of `d^i`. In the
    /// filtered case the two generators must sit at the same level, in the
    /// graded case at the same degree.
    pub fn gaussian_eliminate(&self, i: i64, row: usize, col: usize) -> Result<FieldComplex, ComplexError> {
        let d = self.differential(i);
        if row >= d.rows() || col >= d.cols() {
            return Err(ComplexError::PivotOutOfRange { degree: i, row, col });
        }
        if d.get(row, col).is_zero() {
            return Err(ComplexError::PivotZero { degree: i, row, col });
        }
        let gap = self.labels(i)[col] - self.labels(i + 1)[row];
        if gap != 0 {
            return Err(ComplexError::PivotNotUnit { degree: i, row, col, exponent: gap });
        }
        Ok(FieldComplex { kind: self.kind, chain: elimination::eliminate(&self.chain, i, row, col) })
    }
}
