//! Splitting a graded complex into elementary pieces
//!
//! `F_{i,s} = Q[a]{s}` at degree `i`, and
//! `T_{i,m,s} = Q[a]{s+2km} --a^m--> Q[a]{s}` sitting at degrees `i-1 → i`.
//! A torsion piece is always recorded at the degree `i` of its target, which is
//! where its homology `Q[a]/(a^m){s}` lives.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::algebra::{BigradedTable, GradedModuleDescriptor, GradedRing, IndexConvention, Q};
use crate::complex::{ComplexError, GradedComplex};

/// A free piece `F_{i,s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreePiece {
    pub i: i64,
    pub s: i64,
}

/// A torsion piece `T_{i,m,s}` with `m ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionPiece {
    pub i: i64,
    pub m: u32,
    pub s: i64,
}

/// Multisets of free and torsion pieces, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub k: i64,
    free: Vec<FreePiece>,
    torsion: Vec<TorsionPiece>,
}

impl Decomposition {
    pub fn new(k: i64, mut free: Vec<FreePiece>, mut torsion: Vec<TorsionPiece>) -> Self {
        assert!(torsion.iter().all(|t| t.m >= 1), "torsion exponent must be positive");
        free.sort_unstable();
        torsion.sort_unstable();
        Decomposition { k, free, torsion }
    }

    pub fn from_tuples(k: i64, free: &[(i64, i64)], torsion: &[(i64, u32, i64)]) -> Self {
        Self::new(
            k,
            free.iter().map(|&(i, s)| FreePiece { i, s }).collect(),
            torsion.iter().map(|&(i, m, s)| TorsionPiece { i, m, s }).collect(),
        )
    }

    pub fn free(&self) -> &[FreePiece] {
        &self.free
    }

    pub fn torsion(&self) -> &[TorsionPiece] {
        &self.torsion
    }

    pub fn rank(&self) -> usize {
        self.free.len() + 2 * self.torsion.len()
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty() && self.torsion.is_empty()
    }

    pub fn a_degree(&self) -> i64 {
        2 * self.k
    }

    /// `H^i` of the complex as a graded module, per homological degree.
    pub fn homology_structure(&self) -> BTreeMap<i64, GradedModuleDescriptor> {
        let mut free: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        let mut tors: BTreeMap<i64, Vec<(u32, i64)>> = BTreeMap::new();
        for p in &self.free {
            free.entry(p.i).or_default().push(p.s);
        }
        for t in &self.torsion {
            tors.entry(t.i).or_default().push((t.m, t.s));
        }
        let mut degrees: Vec<i64> = free.keys().chain(tors.keys()).copied().collect();
        degrees.sort_unstable();
        degrees.dedup();
        degrees
            .into_iter()
            .map(|i| {
                let d = GradedModuleDescriptor::new(
                    free.remove(&i).unwrap_or_default(),
                    tors.remove(&i).unwrap_or_default(),
                );
                (i, d)
            })
            .collect()
    }

    /// Dimensions of the homology mod `a`.
    pub fn hn_table(&self) -> BigradedTable {
        let mut t = BigradedTable::new(IndexConvention::HomPoly);
        for (i, d) in self.homology_structure() {
            t = t.direct_sum(&d.dim_table(i, self.k));
        }
        t
    }

    /// Bigraded dimensions of the free part, i.e. of the associated graded of
    /// the homology at `a = 1`.
    pub fn free_table(&self) -> BigradedTable {
        BigradedTable::from_entries(IndexConvention::HomPoly, self.free.iter().map(|p| ((p.i, p.s), 1)))
    }

    /// Largest torsion exponent, `0` when the homology is free.
    pub fn torsion_width(&self) -> u32 {
        self.torsion.iter().map(|t| t.m).max().unwrap_or(0)
    }

    /// Direct sum of the elementary complexes.
    pub fn reassemble(&self) -> GradedComplex {
        let ring = GradedRing::new(self.k).expect("k is positive");
        let mut c = GradedComplex::zero(ring);
        for p in &self.free {
            c = c.direct_sum(&GradedComplex::free_piece(ring, p.i, p.s)).unwrap();
        }
        for t in &self.torsion {
            c = c.direct_sum(&GradedComplex::torsion_piece(ring, t.i, t.m, t.s)).unwrap();
        }
        c
    }

    pub fn direct_sum(&self, other: &Decomposition) -> Decomposition {
        assert_eq!(self.k, other.k);
        let mut free = self.free.clone();
        free.extend_from_slice(&other.free);
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        Decomposition::new(self.k, free, torsion)
    }
}

impl fmt::Debug for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.free.iter().map(|p| format!("F({},{})", p.i, p.s)).collect();
        parts.extend(self.torsion.iter().map(|t| format!("T({},{},{})", t.i, t.m, t.s)));
        if parts.is_empty() {
            write!(f, "k={} 0", self.k)
        } else {
            write!(f, "k={} {}", self.k, parts.join(" + "))
        }
    }
}

/// Result of running the splitting procedure, including the contractible
/// pieces `Q[a]{s} --1--> Q[a]{s}` (unit pivots) that [`decompose`] discards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullDecomposition {
    pub decomposition: Decomposition,
    /// `(i, s)` for each contractible pair at degrees `i-1 → i`.
    pub contractible: Vec<(i64, i64)>,
}

impl FullDecomposition {
    pub fn rank(&self) -> usize {
        self.decomposition.rank() + 2 * self.contractible.len()
    }
}

/// Splits `c` into free and torsion pieces, dropping contractible summands.
pub fn decompose(c: &GradedComplex) -> Result<Decomposition, ComplexError> {
    decompose_full(c).map(|f| f.decomposition)
}

/// The splitting procedure: repeatedly work at the lowest nonzero degree `n`,
/// order `C^n` by ascending and `C^{n+1}` by descending degree, and peel off
/// either a free generator or a two-term piece after clearing its row and
/// column.
pub fn decompose_full(c: &GradedComplex) -> Result<FullDecomposition, ComplexError> {
    c.validate()?;
    let two_k = c.ring().a_degree();
    let mut work = c.clone();
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    let mut contractible = Vec::new();
    while let Some(&n) = work.support().first() {
        sort_degrees(&mut work, n, false);
        sort_degrees(&mut work, n + 1, true);
        let d = work.differential(n);
        let u1 = work.degrees(n)[0];
        let Some(l) = (0..d.rows()).find(|&r| !d.get(r, 0).is_zero()) else {
            free.push(FreePiece { i: n, s: u1 });
            work.remove_generator(n, 0);
            continue;
        };
        let pivot = d.get(l, 0).clone();
        // Rows below l: change basis of C^{n+1} so that column 0 has one entry.
        for r in (l + 1)..d.rows() {
            if !d.get(r, 0).is_zero() {
                let factor: Q = d.get(r, 0) / &pivot;
                work.add_generator_multiple(n + 1, l, r, &factor);
            }
        }
        // Columns right of 0: change basis of C^n so that row l has one entry.
        let d = work.differential(n);
        for j in 1..d.cols() {
            if !d.get(l, j).is_zero() {
                let factor: Q = -(d.get(l, j) / &pivot);
                work.add_generator_multiple(n, j, 0, &factor);
            }
        }
        let v_l = work.degrees(n + 1)[l];
        debug_assert!(work.differential(n + 1).column(l).iter().all(Zero::is_zero));
        let m = ((u1 - v_l) / two_k) as u32;
        if m == 0 {
            contractible.push((n + 1, v_l));
        } else {
            torsion.push(TorsionPiece { i: n + 1, m, s: v_l });
        }
        work.remove_generator(n + 1, l);
        work.remove_generator(n, 0);
    }
    Ok(FullDecomposition { decomposition: Decomposition::new(c.k(), free, torsion), contractible })
}

/// Stable sort of the generators of `C^i` by degree.
fn sort_degrees(c: &mut GradedComplex, i: i64, descending: bool) {
    let degs = c.degrees(i).to_vec();
    let mut perm: Vec<usize> = (0..degs.len()).collect();
    if descending {
        perm.sort_by_key(|&g| std::cmp::Reverse(degs[g]));
    } else {
        perm.sort_by_key(|&g| degs[g]);
    }
    if perm.iter().enumerate().any(|(a, &b)| a != b) {
        c.permute_generators(i, &perm);
    }
}

/// Homological thickness and its local version. Both are half-integers in
/// general, so they are kept as rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thickness {
    pub ht: Rational64,
    pub lht: Option<Rational64>,
}

/// `ht = max 1 + ((2i₁+j₁) - (2i₂+j₂))/2` over nonzero entries, and
/// `lht = max (j₁ - j₂)/2` over nonzero entries at `(i, j₁)` and `(i+1, j₂)`.
/// `None` for an empty table.
pub fn thickness(t: &BigradedTable) -> Option<Thickness> {
    let weights: Vec<i64> = t.iter().map(|((i, j), _)| 2 * i + j).collect();
    let (lo, hi) = (weights.iter().min()?, weights.iter().max()?);
    let ht = Rational64::from_integer(1) + Rational64::new(hi - lo, 2);
    let mut by_degree: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
    for ((i, j), _) in t.iter() {
        let e = by_degree.entry(i).or_insert((j, j));
        e.0 = e.0.min(j);
        e.1 = e.1.max(j);
    }
    let lht = by_degree
        .iter()
        .filter_map(|(&i, &(_, top))| by_degree.get(&(i + 1)).map(|&(bottom, _)| Rational64::new(top - bottom, 2)))
        .max();
    Some(Thickness { ht, lht })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Matrix;

    fn ring(k: i64) -> GradedRing {
        GradedRing::new(k).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn elementary_torsion() {
        let c = GradedComplex::new(
            ring(1),
            BTreeMap::from([(0, vec![4]), (1, vec![0])]),
            BTreeMap::from([(0, Matrix::identity(1))]),
        )
        .unwrap();
        assert_eq!(decompose(&c).unwrap(), Decomposition::from_tuples(1, &[], &[(1, 2, 0)]));
    }

    #[test]
    fn single_free_generator() {
        let c = GradedComplex::free_piece(ring(3), 7, 0);
        assert_eq!(decompose(&c).unwrap(), Decomposition::from_tuples(3, &[(7, 0)], &[]));
    }

    #[test]
    fn unit_pivots_are_contractible() {
        // T_{1,1,0} plus a unit map Q[a]{2} -> Q[a]{2}.
        let c = GradedComplex::new(
            ring(1),
            BTreeMap::from([(0, vec![2, 2]), (1, vec![0, 2])]),
            BTreeMap::from([(0, Matrix::identity(2))]),
        )
        .unwrap();
        let full = decompose_full(&c).unwrap();
        assert_eq!(full.decomposition, Decomposition::from_tuples(1, &[], &[(1, 1, 0)]));
        assert_eq!(full.contractible, vec![(1, 2)]);
        assert_eq!(full.rank(), 4);
    }

    #[test]
    fn mixed_column_needs_both_clearings() {
        // C^0 = <u1{0}, u2{2}>, C^1 = <v1{0}, v2{-2}>, k = 1.
        // d u1 = v1 + a v2, d u2 = a v1 + a² v2: rank one over Q[a].
        let c = GradedComplex::new(
            ring(1),
            BTreeMap::from([(0, vec![0, 2]), (1, vec![0, -2])]),
            BTreeMap::from([(0, Matrix::from_i64_rows(&[&[1, 1], &[1, 1]]))]),
        )
        .unwrap();
        let d = decompose(&c).unwrap();
        assert_eq!(d, Decomposition::from_tuples(1, &[(0, 2), (1, -2)], &[]));
    }

    #[test]
    fn homology_structure_of_torsion() {
        let d = Decomposition::from_tuples(1, &[], &[(1, 2, 0)]);
        let h = d.homology_structure();
        assert_eq!(h.len(), 1);
        assert_eq!(h[&1], GradedModuleDescriptor::torsion(2, 0));
        assert_eq!(
            d.hn_table(),
            BigradedTable::from_entries(IndexConvention::HomPoly, [((1, 0), 1), ((0, 4), 1)])
        );
    }

    #[test]
    fn torsion_width_is_max() {
        assert_eq!(Decomposition::from_tuples(1, &[(0, 0)], &[]).torsion_width(), 0);
        assert_eq!(Decomposition::from_tuples(1, &[], &[(1, 2, 0), (5, 1, 3)]).torsion_width(), 2);
    }

    #[test]
    fn thickness_examples() {
        let single = BigradedTable::from_entries(IndexConvention::HomPoly, [((3, 1), 1)]);
        assert_eq!(thickness(&single), Some(Thickness { ht: r(1, 1), lht: None }));
        let two = BigradedTable::from_entries(IndexConvention::HomPoly, [((0, 0), 1), ((1, -4), 1)]);
        assert_eq!(thickness(&two), Some(Thickness { ht: r(2, 1), lht: Some(r(2, 1)) }));
        assert_eq!(thickness(&BigradedTable::new(IndexConvention::HomPoly)), None);
    }

    #[test]
    fn torsion_pair_has_thickness_km() {
        for k in 1..4 {
            for m in 1..4u32 {
                let t = Decomposition::from_tuples(k, &[], &[(2, m, 5)]).hn_table();
                let th = thickness(&t).unwrap();
                assert_eq!(th.ht, r(k * m as i64, 1));
                assert_eq!(th.lht, Some(r(k * m as i64, 1)));
            }
        }
    }

    #[test]
    fn reassemble_round_trip() {
        let d = Decomposition::from_tuples(2, &[(0, 3), (0, -1), (4, 2)], &[(1, 2, 0), (3, 1, -7)]);
        let c = d.reassemble();
        assert_eq!(c.total_rank(), d.rank());
        assert_eq!(decompose(&c).unwrap(), d);
        assert_eq!(Decomposition::from_tuples(1, &[], &[]).reassemble().total_rank(), 0);
    }
}
