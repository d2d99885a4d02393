use std::collections::BTreeMap;
use std::fmt;

/// Meaning of the two indices of a [`BigradedTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexConvention {
    /// `(i, s)`: homological degree, polynomial degree.
    HomPoly,
    /// `(p, q)`: spectral sequence position, `p` the filtration degree and
    /// `p + q` the homological degree.
    Page,
}

/// Finite-support table of dimensions indexed by two integers. Zero entries are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigradedTable {
    convention: IndexConvention,
    entries: BTreeMap<(i64, i64), usize>,
}

impl BigradedTable {
    pub fn new(convention: IndexConvention) -> Self {
        BigradedTable { convention, entries: BTreeMap::new() }
    }

    pub fn from_entries<I>(convention: IndexConvention, entries: I) -> Self
    where
        I: IntoIterator<Item = ((i64, i64), usize)>,
    {
        let mut t = Self::new(convention);
        for (pos, dim) in entries {
            t.add(pos, dim);
        }
        t
    }

    pub fn convention(&self) -> IndexConvention {
        self.convention
    }

    pub fn add(&mut self, pos: (i64, i64), dim: usize) {
        if dim > 0 {
            *self.entries.entry(pos).or_insert(0) += dim;
        }
    }

    /// Removes `dim` from the entry at `pos`; `None` if that would go negative.
    pub fn subtract(&mut self, pos: (i64, i64), dim: usize) -> Option<()> {
        if dim == 0 {
            return Some(());
        }
        let cur = self.entries.get_mut(&pos)?;
        if *cur < dim {
            return None;
        }
        *cur -= dim;
        if *cur == 0 {
            self.entries.remove(&pos);
        }
        Some(())
    }

    pub fn get(&self, pos: (i64, i64)) -> usize {
        self.entries.get(&pos).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), usize)> + '_ {
        self.entries.iter().map(|(&p, &d)| (p, d))
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), usize> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn total_dim(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn direct_sum(&self, other: &BigradedTable) -> BigradedTable {
        assert_eq!(self.convention, other.convention, "direct sum of tables in different conventions");
        let mut out = self.clone();
        for (p, d) in other.iter() {
            out.add(p, d);
        }
        out
    }

    /// Converts between `(i, s)` and `(p, q) = (s, i - s)`.
    pub fn to_convention(&self, target: IndexConvention) -> BigradedTable {
        use IndexConvention::*;
        let map = |(a, b): (i64, i64)| match (self.convention, target) {
            (HomPoly, Page) => (b, a - b),
            (Page, HomPoly) => (a + b, a),
            _ => (a, b),
        };
        BigradedTable::from_entries(target, self.iter().map(|(p, d)| (map(p), d)))
    }

    /// Pointwise `self ≤ other`.
    pub fn is_dominated_by(&self, other: &BigradedTable) -> bool {
        self.iter().all(|(p, d)| other.get(p) >= d)
    }

    /// Sum of dimensions along each first index (e.g. per homological degree).
    pub fn first_index_totals(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for ((a, _), d) in self.iter() {
            *out.entry(a).or_insert(0) += d;
        }
        out
    }
}

impl fmt::Debug for BigradedTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.convention)?;
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// The twisted product `H ⊠ E`: `(H ⊠ E)^{α,β} = ⊕_{j+p=α, q+i-j=β} H^{i,j} ⊗ E^{p,q}`,
/// with `H` in `(i, s)` convention and `E` in page convention.
pub fn boxtimes(h: &BigradedTable, e: &BigradedTable) -> BigradedTable {
    assert_eq!(h.convention(), IndexConvention::HomPoly);
    assert_eq!(e.convention(), IndexConvention::Page);
    let mut out = BigradedTable::new(IndexConvention::Page);
    for ((i, j), hd) in h.iter() {
        for ((p, q), ed) in e.iter() {
            out.add((j + p, q + i - j), hd * ed);
        }
    }
    out
}
