//! Pages of the spectral sequence of the polynomial-degree filtration.
//!
//! Positions are `(p, q)` with `p` the filtration degree and `p + q` the
//! homological degree. Field-valued pages come either from closed forms per
//! piece or from the generic `Z/B/E` computation on a filtered complex;
//! module-valued pages only from closed forms.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{boxtimes, joint_rank, BigradedTable, GradedModuleDescriptor, IndexConvention, Matrix, Q};
use crate::complex::{FieldComplex, LabelKind};
use crate::decomposition::{Decomposition, FreePiece, TorsionPiece};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Free(FreePiece),
    Torsion(TorsionPiece),
}

/// Entries of a page: dimensions over the field, or graded `Q[a]`-modules.
#[derive(Clone, PartialEq, Eq)]
pub enum PageEntries {
    Field(BigradedTable),
    Module(BTreeMap<(i64, i64), GradedModuleDescriptor>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageTable {
    pub r: u32,
    pub entries: PageEntries,
}

impl fmt::Debug for PageEntries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PageEntries::Field(t) => write!(f, "{t:?}"),
            PageEntries::Module(m) => f.debug_map().entries(m.iter()).finish(),
        }
    }
}

impl PageTable {
    pub fn empty(r: u32, hat: bool) -> Self {
        let entries = if hat {
            PageEntries::Field(BigradedTable::new(IndexConvention::Page))
        } else {
            PageEntries::Module(BTreeMap::new())
        };
        PageTable { r, entries }
    }

    pub fn is_hat(&self) -> bool {
        matches!(self.entries, PageEntries::Field(_))
    }

    /// The dimension table of a field-valued page.
    pub fn field(&self) -> Option<&BigradedTable> {
        match &self.entries {
            PageEntries::Field(t) => Some(t),
            PageEntries::Module(_) => None,
        }
    }

    pub fn modules(&self) -> Option<&BTreeMap<(i64, i64), GradedModuleDescriptor>> {
        match &self.entries {
            PageEntries::Module(m) => Some(m),
            PageEntries::Field(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.entries {
            PageEntries::Field(t) => t.is_empty(),
            PageEntries::Module(m) => m.is_empty(),
        }
    }

    fn add_field(&mut self, pos: (i64, i64), dim: usize) {
        match &mut self.entries {
            PageEntries::Field(t) => t.add(pos, dim),
            PageEntries::Module(_) => panic!("field entry on a module page"),
        }
    }

    fn add_module(&mut self, pos: (i64, i64), m: GradedModuleDescriptor) {
        match &mut self.entries {
            PageEntries::Module(map) => {
                let e = map.entry(pos).or_default();
                *e = e.direct_sum(&m);
            }
            PageEntries::Field(_) => panic!("module entry on a field page"),
        }
    }

    /// Entrywise direct sum of two pages of the same kind.
    pub fn direct_sum(&self, other: &PageTable) -> PageTable {
        let mut out = self.clone();
        match &other.entries {
            PageEntries::Field(t) => {
                for (pos, d) in t.iter() {
                    out.add_field(pos, d);
                }
            }
            PageEntries::Module(m) => {
                for (pos, d) in m {
                    out.add_module(*pos, d.clone());
                }
            }
        }
        out
    }

    /// Compares entries only, ignoring the page index.
    pub fn same_entries(&self, other: &PageTable) -> bool {
        self.entries == other.entries
    }
}

/// Closed-form page `r` of a single piece.
pub fn piece_pages(piece: Piece, hat: bool, r: u32, k: i64) -> PageTable {
    let mut page = PageTable::empty(r, hat);
    match piece {
        Piece::Free(FreePiece { i, s }) => {
            if hat {
                page.add_field((s, i - s), 1);
            } else {
                page.add_module((s, i - s), GradedModuleDescriptor::free(s));
            }
        }
        Piece::Torsion(TorsionPiece { i, m, s }) => {
            let span = 2 * k * m as i64;
            let top = s + span;
            if (r as i64) <= span {
                if hat {
                    page.add_field((s, i - s), 1);
                    page.add_field((top, i - 1 - top), 1);
                } else {
                    page.add_module((s, i - s), GradedModuleDescriptor::free(s));
                    page.add_module((top, i - 1 - top), GradedModuleDescriptor::free(top));
                }
            } else if !hat {
                page.add_module((s, i - s), GradedModuleDescriptor::torsion(m, s));
            }
        }
    }
    page
}

/// Sum of [`piece_pages`] over every piece of `d`.
pub fn summed_piece_pages(d: &Decomposition, hat: bool, r: u32) -> PageTable {
    let mut page = PageTable::empty(r, hat);
    for p in d.free() {
        page = page.direct_sum(&piece_pages(Piece::Free(*p), hat, r, d.k));
    }
    for t in d.torsion() {
        page = page.direct_sum(&piece_pages(Piece::Torsion(*t), hat, r, d.k));
    }
    page
}

/// Page `r ≥ 1` assembled as `(free part ⊠ E_r(F_{0,0})) ⊕ ⨁ E_r(T)`.
pub fn assembled_pages(d: &Decomposition, hat: bool, r: u32) -> PageTable {
    assert!(r >= 1, "assembled pages start at r = 1");
    let unit = BigradedTable::from_entries(IndexConvention::Page, [((0, 0), 1)]);
    let free_part = boxtimes(&d.free_table(), &unit);
    let mut page = PageTable::empty(r, hat);
    for (pos, dim) in free_part.iter() {
        if hat {
            page.add_field(pos, dim);
        } else {
            // The ⊠ product places each free generator at (s, i - s), so the
            // shift of the C[a] copy is the first index.
            page.add_module(pos, GradedModuleDescriptor::free(pos.0).scaled(dim));
        }
    }
    for t in d.torsion() {
        page = page.direct_sum(&piece_pages(Piece::Torsion(*t), hat, r, d.k));
    }
    page
}

/// `2k·tw + 1`, or `1` when there is no torsion.
pub fn collapse_page(d: &Decomposition) -> u32 {
    (2 * d.k as u32) * d.torsion_width() + 1
}

/// Page `r` of the spectral sequence of an increasingly filtered complex,
/// computed from `E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p-1,q+1} + B_{r-1}^{p,q})`
/// with `Z_r^{p,q} = F^p C^{p+q} ∩ d⁻¹(F^{p-r} C^{p+q+1})` and
/// `B_r^{p,q} = F^p C^{p+q} ∩ d(F^{p+r} C^{p+q-1})`.
pub fn generic_pages(c: &FieldComplex, r: u32) -> PageTable {
    assert_eq!(c.kind(), LabelKind::Filtration);
    let r = r as i64;
    let mut table = BigradedTable::new(IndexConvention::Page);
    for n in c.support() {
        let mut levels: Vec<i64> = c.labels(n).to_vec();
        levels.sort_unstable();
        levels.dedup();
        let slice = Slice::new(c, n);
        for p in levels {
            let z = slice.z(p, p - r);
            let zz = slice.z(p - 1, p - r);
            let b = slice.b(p, p + r - 1);
            let dim = z.cols() - joint_rank(&[&zz, &b], slice.rank);
            table.add((p, n - p), dim);
        }
    }
    PageTable { r: r as u32, entries: PageEntries::Field(table) }
}

/// Pages `from..=to` of [`generic_pages`].
pub fn generic_page_range(c: &FieldComplex, from: u32, to: u32) -> Vec<PageTable> {
    (from..=to).map(|r| generic_pages(c, r)).collect()
}

/// Largest minus smallest filtration level; pages with `r` above this are
/// all equal.
pub fn filtration_spread(c: &FieldComplex) -> u32 {
    let all: Vec<i64> = c.support().into_iter().flat_map(|n| c.labels(n).to_vec()).collect();
    match (all.iter().min(), all.iter().max()) {
        (Some(lo), Some(hi)) => (hi - lo) as u32,
        _ => 0,
    }
}

/// The page `t ≥ 1` at which the sequence collapses exactly: `E_{t-1} ≠ E_t`
/// and `E_t = E_{t+j}` for all `j ≥ 0`, looking only at pages `r ≥ 1`.
/// Returns 1 if all pages from the first on agree.
pub fn generic_collapse_page(c: &FieldComplex) -> u32 {
    let last = filtration_spread(c) + 2;
    let pages = generic_page_range(c, 1, last);
    let mut t = 1;
    for w in pages.windows(2) {
        if !w[0].same_entries(&w[1]) {
            t = w[1].r;
        }
    }
    t
}

/// One homological degree of a filtered complex with the incoming and outgoing
/// differentials.
struct Slice<'a> {
    rank: usize,
    levels: &'a [i64],
    next_levels: &'a [i64],
    prev_levels: &'a [i64],
    d_out: Matrix,
    d_in: Matrix,
}

impl<'a> Slice<'a> {
    fn new(c: &'a FieldComplex, n: i64) -> Self {
        Slice {
            rank: c.rank(n),
            levels: c.labels(n),
            next_levels: c.labels(n + 1),
            prev_levels: c.labels(n - 1),
            d_out: c.differential(n),
            d_in: c.differential(n - 1),
        }
    }

    /// Basis (as columns over `C^n`) of `F^p C^n ∩ d⁻¹(F^{bound} C^{n+1})`.
    fn z(&self, p: i64, bound: i64) -> Matrix {
        let cols = indices(self.levels, |l| l <= p);
        let rows = indices(self.next_levels, |l| l > bound);
        let k = self.d_out.select_rows(&rows).select_cols(&cols).kernel();
        embed(&cols, &k, self.rank)
    }

    /// Spanning set of `F^p C^n ∩ d(F^{src} C^{n-1})`.
    fn b(&self, p: i64, src: i64) -> Matrix {
        let cols = indices(self.prev_levels, |l| l <= src);
        let d = self.d_in.select_cols(&cols);
        let high = indices(self.levels, |l| l > p);
        let k = d.select_rows(&high).kernel();
        d.mul(&k)
    }
}

fn indices(levels: &[i64], keep: impl Fn(i64) -> bool) -> Vec<usize> {
    levels.iter().enumerate().filter(|(_, &l)| keep(l)).map(|(g, _)| g).collect()
}

/// Lifts columns expressed on the generators `idx` to all `rank` generators.
fn embed(idx: &[usize], m: &Matrix, rank: usize) -> Matrix {
    let mut out = Matrix::zeros(rank, m.cols());
    for (row, &g) in idx.iter().enumerate() {
        for c in 0..m.cols() {
            let x: &Q = m.get(row, c);
            out.set(g, c, x.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedRing;
    use crate::complex::GradedComplex;

    fn ring(k: i64) -> GradedRing {
        GradedRing::new(k).unwrap()
    }

    fn field(entries: &[((i64, i64), usize)]) -> PageEntries {
        PageEntries::Field(BigradedTable::from_entries(IndexConvention::Page, entries.iter().copied()))
    }

    #[test]
    fn free_piece_every_page() {
        for r in 0..6 {
            let p = piece_pages(Piece::Free(FreePiece { i: 3, s: 5 }), false, r, 2);
            assert_eq!(p.modules().unwrap()[&(5, -2)], GradedModuleDescriptor::free(5));
            assert_eq!(p.modules().unwrap().len(), 1);
        }
    }

    #[test]
    fn hat_torsion_transition() {
        let t = Piece::Torsion(TorsionPiece { i: 1, m: 2, s: 0 });
        assert_eq!(piece_pages(t, true, 4, 1).entries, field(&[((0, 1), 1), ((4, -4), 1)]));
        assert!(piece_pages(t, true, 5, 1).is_empty());
    }

    #[test]
    fn module_torsion_transition() {
        let t = Piece::Torsion(TorsionPiece { i: 1, m: 2, s: 0 });
        let late = piece_pages(t, false, 5, 1);
        assert_eq!(late.modules().unwrap()[&(0, 1)], GradedModuleDescriptor::torsion(2, 0));
        assert_eq!(late.modules().unwrap().len(), 1);
        let early = piece_pages(t, false, 4, 1);
        assert_eq!(early.modules().unwrap()[&(4, -4)], GradedModuleDescriptor::free(4));
    }

    #[test]
    fn generic_matches_free_piece() {
        let c = GradedComplex::free_piece(ring(1), 2, -3).specialize_a_to_1();
        for r in 0..5 {
            assert_eq!(generic_pages(&c, r).entries, field(&[((-3, 5), 1)]));
        }
    }

    #[test]
    fn generic_matches_torsion_piece() {
        for k in 1..=3 {
            for m in 1..=2u32 {
                let t = TorsionPiece { i: 1, m, s: 2 };
                let c = GradedComplex::torsion_piece(ring(k), t.i, t.m, t.s).specialize_a_to_1();
                for r in 0..=(2 * k as u32 * m + 2) {
                    assert_eq!(generic_pages(&c, r), piece_pages(Piece::Torsion(t), true, r, k), "k={k} m={m} r={r}");
                }
                assert_eq!(generic_collapse_page(&c), 2 * k as u32 * m + 1);
            }
        }
    }

    #[test]
    fn assembled_torsion_pages() {
        let d = Decomposition::from_tuples(1, &[], &[(1, 2, 0)]);
        for r in 1..=4 {
            assert_eq!(assembled_pages(&d, true, r).field().unwrap().len(), 2);
        }
        for r in 5..8 {
            assert!(assembled_pages(&d, true, r).is_empty());
        }
        assert_eq!(collapse_page(&d), 5);
    }

    #[test]
    fn free_only_pages_are_constant() {
        let d = Decomposition::from_tuples(2, &[(0, 1), (2, -3), (2, -3)], &[]);
        let first = assembled_pages(&d, false, 1);
        assert_eq!(first.modules().unwrap()[&(-3, 5)], GradedModuleDescriptor::free(-3).scaled(2));
        for r in 2..6 {
            assert!(assembled_pages(&d, false, r).same_entries(&first));
        }
        assert_eq!(collapse_page(&d), 1);
    }

    #[test]
    fn collapse_for_tw_one_k_two() {
        assert_eq!(collapse_page(&Decomposition::from_tuples(2, &[], &[(0, 1, 0)])), 5);
    }
}
