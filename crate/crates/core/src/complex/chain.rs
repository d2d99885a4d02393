use std::collections::BTreeMap;

use num_traits::Zero;

use super::ComplexError;
use crate::algebra::{Matrix, Q};

/// Underlying data of a bounded complex: one integer label per generator and a
/// scalar matrix `d^i` of shape `rank(i+1) × rank(i)` per degree. Empty modules and
/// zero differentials are never stored, so equality is structural.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainData {
    modules: BTreeMap<i64, Vec<i64>>,
    differentials: BTreeMap<i64, Matrix>,
}

impl ChainData {
    pub fn new(modules: BTreeMap<i64, Vec<i64>>, differentials: BTreeMap<i64, Matrix>) -> Result<Self, ComplexError> {
        let mut c = ChainData { modules, differentials };
        c.check_shapes()?;
        c.normalize();
        Ok(c)
    }

    fn normalize(&mut self) {
        self.modules.retain(|_, v| !v.is_empty());
        self.differentials.retain(|_, d| !d.is_zero());
    }

    pub fn labels(&self, i: i64) -> &[i64] {
        self.modules.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rank(&self, i: i64) -> usize {
        self.labels(i).len()
    }

    pub fn total_rank(&self) -> usize {
        self.modules.values().map(Vec::len).sum()
    }

    /// Degrees carrying at least one generator, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.modules.keys().copied().collect()
    }

    pub fn modules(&self) -> &BTreeMap<i64, Vec<i64>> {
        &self.modules
    }

    pub fn differential(&self, i: i64) -> Matrix {
        self.differentials
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rank(i + 1), self.rank(i)))
    }

    /// Degrees with a nonzero differential, ascending.
    pub fn differential_degrees(&self) -> Vec<i64> {
        self.differentials.keys().copied().collect()
    }

    pub(crate) fn set_module(&mut self, i: i64, labels: Vec<i64>) {
        self.modules.insert(i, labels);
        self.normalize();
    }

    pub(crate) fn set_differential(&mut self, i: i64, d: Matrix) {
        assert_eq!(d.shape(), (self.rank(i + 1), self.rank(i)), "differential shape");
        self.differentials.insert(i, d);
        self.normalize();
    }

    pub(crate) fn map_differential(&mut self, i: i64, f: impl Fn(usize, usize, &Q) -> Q) {
        if let Some(d) = self.differentials.get_mut(&i) {
            for r in 0..d.rows() {
                for c in 0..d.cols() {
                    let x = f(r, c, d.get(r, c));
                    d.set(r, c, x);
                }
            }
        }
        self.normalize();
    }

    pub fn check_shapes(&self) -> Result<(), ComplexError> {
        for (&i, d) in &self.differentials {
            let (er, ec) = (self.rank(i + 1), self.rank(i));
            if d.shape() != (er, ec) {
                return Err(ComplexError::ShapeMismatch {
                    degree: i,
                    rows: d.rows(),
                    cols: d.cols(),
                    expected_rows: er,
                    expected_cols: ec,
                });
            }
        }
        Ok(())
    }

    /// Reports the lowest `i` with `d^{i+1} ∘ d^i ≠ 0`.
    pub fn check_d_squared(&self) -> Result<(), ComplexError> {
        for (&i, d) in &self.differentials {
            if let Some(next) = self.differentials.get(&(i + 1)) {
                if !next.mul(d).is_zero() {
                    return Err(ComplexError::DSquaredNonzero { degree: i });
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &ChainData) -> ChainData {
        let mut degrees: Vec<i64> = self.support();
        degrees.extend(other.support());
        degrees.sort_unstable();
        degrees.dedup();
        let mut out = ChainData::default();
        for &i in &degrees {
            let mut labels = self.labels(i).to_vec();
            labels.extend_from_slice(other.labels(i));
            out.modules.insert(i, labels);
        }
        for &i in &degrees {
            if out.rank(i + 1) > 0 {
                out.differentials.insert(i, self.differential(i).block_diag(&other.differential(i)));
            }
        }
        out.normalize();
        out
    }

    pub fn shifted(&self, hom: i64, label: i64) -> ChainData {
        ChainData {
            modules: self
                .modules
                .iter()
                .map(|(&i, v)| (i + hom, v.iter().map(|s| s + label).collect()))
                .collect(),
            differentials: self.differentials.iter().map(|(&i, d)| (i + hom, d.clone())).collect(),
        }
    }

    /// Basis change `e_t ← e_t + factor·e_s` in `C^i`.
    pub(crate) fn add_generator_multiple(&mut self, i: i64, target: usize, source: usize, factor: &Q) {
        if let Some(d) = self.differentials.get_mut(&i) {
            d.add_col_multiple(target, source, factor);
        }
        if let Some(d) = self.differentials.get_mut(&(i - 1)) {
            d.add_row_multiple(source, target, &-factor.clone());
        }
        self.normalize();
    }

    /// Basis change `e_idx ← factor·e_idx` in `C^i`.
    pub(crate) fn scale_generator(&mut self, i: i64, idx: usize, factor: &Q) {
        assert!(!factor.is_zero());
        if let Some(d) = self.differentials.get_mut(&i) {
            d.scale_col(idx, factor);
        }
        if let Some(d) = self.differentials.get_mut(&(i - 1)) {
            d.scale_row(idx, &factor.recip());
        }
    }

    pub(crate) fn swap_generators(&mut self, i: i64, a: usize, b: usize) {
        let mut perm: Vec<usize> = (0..self.rank(i)).collect();
        perm.swap(a, b);
        self.permute(i, &perm);
    }

    /// Reorders `C^i` so that new generator `j` is old generator `perm[j]`.
    pub(crate) fn permute(&mut self, i: i64, perm: &[usize]) {
        assert_eq!(perm.len(), self.rank(i));
        if let Some(v) = self.modules.get_mut(&i) {
            *v = perm.iter().map(|&p| v[p]).collect();
        }
        if let Some(d) = self.differentials.get_mut(&i) {
            *d = d.select_cols(perm);
        }
        if let Some(d) = self.differentials.get_mut(&(i - 1)) {
            *d = d.select_rows(perm);
        }
    }

    /// Drops generator `idx` of `C^i` together with its column of `d^i` and its
    /// row of `d^{i-1}`.
    pub(crate) fn remove_generator(&mut self, i: i64, idx: usize) {
        if let Some(v) = self.modules.get_mut(&i) {
            v.remove(idx);
        }
        if let Some(d) = self.differentials.get_mut(&i) {
            d.remove_col(idx);
        }
        if let Some(d) = self.differentials.get_mut(&(i - 1)) {
            d.remove_row(idx);
        }
        self.normalize();
    }
}
