use num_traits::Zero;

use super::{homology_field, ComplexError, GradedComplex};
use crate::algebra::{BigradedTable, Matrix, Q};

/// The differential induced on `H(C/aC)` by the short exact sequence
/// `0 → C{2k} → C → C/aC → 0`: a class at `(i, s)` goes to `(i+1, s-2k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstDifferential {
    pub k: i64,
    /// Basis of `H(C/aC)`, one `(degree, poly degree)` per class.
    pub classes: Vec<(i64, i64)>,
    /// Square matrix on [`Self::classes`].
    pub matrix: Matrix,
}

impl FirstDifferential {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn homology_table(&self) -> BigradedTable {
        BigradedTable::from_entries(crate::algebra::IndexConvention::HomPoly, self.classes.iter().map(|&p| (p, 1)))
    }

    /// Block of the matrix from degree `i` to degree `i + 1`.
    pub fn component(&self, i: i64) -> Matrix {
        let src: Vec<usize> = self.indices_at(i);
        let tgt: Vec<usize> = self.indices_at(i + 1);
        self.matrix.select_rows(&tgt).select_cols(&src)
    }

    /// Source degrees where the differential is nonzero.
    pub fn nonzero_degrees(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self.classes.iter().map(|c| c.0).collect();
        out.dedup();
        out.retain(|&i| !self.component(i).is_zero());
        out
    }

    fn indices_at(&self, i: i64) -> Vec<usize> {
        self.classes.iter().enumerate().filter(|(_, c)| c.0 == i).map(|(j, _)| j).collect()
    }
}

pub fn first_differential(c: &GradedComplex) -> Result<FirstDifferential, ComplexError> {
    let two_k = c.ring().a_degree();
    let h = homology_field(&c.reduce_mod_a());
    let ids = h.classes();
    let classes: Vec<(i64, i64)> = ids.iter().map(|id| (id.degree, id.label.unwrap())).collect();
    let mut matrix = Matrix::zeros(ids.len(), ids.len());
    for (col, id) in ids.iter().enumerate() {
        let n = id.degree;
        let s = id.label.unwrap();
        let x = h.representative(*id);
        let dx = c.differential(n).mul_vec(&x);
        let targets = c.degrees(n + 1);
        let mut y = vec![Q::zero(); targets.len()];
        for (r, v) in dx.into_iter().enumerate() {
            if targets[r] == s {
                if !v.is_zero() {
                    return Err(ComplexError::DivisionByA { degree: n });
                }
            } else if targets[r] == s - two_k {
                y[r] = v;
            }
        }
        let coords = h.coordinates(n + 1, &y).ok_or(ComplexError::DivisionByA { degree: n })?;
        let rows: Vec<usize> = ids.iter().enumerate().filter(|(_, t)| t.degree == n + 1).map(|(j, _)| j).collect();
        for (r, v) in rows.into_iter().zip(coords) {
            matrix.set(r, col, v);
        }
    }
    Ok(FirstDifferential { k: c.k(), classes, matrix })
}
