use std::fmt;

use super::{BigradedTable, IndexConvention};

/// A finitely generated graded `Q[a]`-module `⊕ Q[a]{s} ⊕ ⊕ (Q[a]/(a^m)){s}`,
/// stored in canonical sorted form so that equality is structural.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedModuleDescriptor {
    free: Vec<i64>,
    torsion: Vec<(u32, i64)>,
}

impl GradedModuleDescriptor {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Panics if some torsion exponent is zero.
    pub fn new(mut free: Vec<i64>, mut torsion: Vec<(u32, i64)>) -> Self {
        assert!(torsion.iter().all(|&(m, _)| m >= 1), "torsion exponent must be positive");
        free.sort_unstable();
        torsion.sort_unstable();
        GradedModuleDescriptor { free, torsion }
    }

    pub fn free(s: i64) -> Self {
        Self::new(vec![s], vec![])
    }

    pub fn torsion(m: u32, s: i64) -> Self {
        Self::new(vec![], vec![(m, s)])
    }

    pub fn free_shifts(&self) -> &[i64] {
        &self.free
    }

    pub fn torsions(&self) -> &[(u32, i64)] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free.is_empty() && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut free = self.free.clone();
        free.extend_from_slice(&other.free);
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        Self::new(free, torsion)
    }

    pub fn shifted(&self, by: i64) -> Self {
        Self::new(
            self.free.iter().map(|s| s + by).collect(),
            self.torsion.iter().map(|&(m, s)| (m, s + by)).collect(),
        )
    }

    /// `n` copies of `self`.
    pub fn scaled(&self, n: usize) -> Self {
        let mut out = Self::zero();
        for _ in 0..n {
            out = out.direct_sum(self);
        }
        out
    }

    /// Contribution of this module, sitting at homological degree `i`, to the
    /// mod-`a` homology: a free shift `s` gives `(i, s)`, a torsion `(m, s)` gives
    /// `(i, s)` and `(i - 1, s + 2km)`.
    pub fn dim_table(&self, i: i64, k: i64) -> BigradedTable {
        let mut t = BigradedTable::new(IndexConvention::HomPoly);
        for &s in &self.free {
            t.add((i, s), 1);
        }
        for &(m, s) in &self.torsion {
            t.add((i, s), 1);
            t.add((i - 1, s + 2 * k * m as i64), 1);
        }
        t
    }
}

impl fmt::Debug for GradedModuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GradedModuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.free.iter().map(|s| format!("Q[a]{{{s}}}")).collect();
        parts.extend(self.torsion.iter().map(|(m, s)| {
            if *m == 1 {
                format!("Q[a]/(a){{{s}}}")
            } else {
                format!("Q[a]/(a^{m}){{{s}}}")
            }
        }));
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_makes_equality_structural() {
        let a = GradedModuleDescriptor::new(vec![3, -1], vec![(2, 5), (1, 7), (1, -2)]);
        let b = GradedModuleDescriptor::new(vec![-1, 3], vec![(1, -2), (2, 5), (1, 7)]);
        assert_eq!(a, b);
        assert_eq!(a.torsions(), &[(1, -2), (1, 7), (2, 5)]);
    }

    #[test]
    fn dim_table_free() {
        let t = GradedModuleDescriptor::free(0).dim_table(0, 1);
        assert_eq!(t, BigradedTable::from_entries(IndexConvention::HomPoly, [((0, 0), 1)]));
    }

    #[test]
    fn dim_table_torsion() {
        let t = GradedModuleDescriptor::torsion(2, 0).dim_table(1, 1);
        assert_eq!(t, BigradedTable::from_entries(IndexConvention::HomPoly, [((1, 0), 1), ((0, 4), 1)]));
    }

    #[test]
    #[should_panic]
    fn zero_exponent_rejected() {
        GradedModuleDescriptor::torsion(0, 1);
    }
}
