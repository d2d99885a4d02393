//! Exact couples of bigraded vector spaces and their derived couples.
//!
//! Bidegrees are `(i, s)`: homological degree, polynomial degree. The maps are
//! `f: A(i,s) → A(i,s+2k)`, `g: A(i,s) → E(i,s+g_shift)` and
//! `h: E(i,s) → A(i+1,s-2k)`. Deriving keeps `f` and `h` bidegrees and lowers
//! `g_shift` by `2k`.
//!
//! `A` is infinite over the field, so it is kept only for `s` in a window
//! `[lo, hi]`. Below the lowest generator `A` vanishes, so the lower edge is
//! exact. At the upper edge `f` leaves the window; exactness `ker f = im h` is
//! therefore only checked for `s ≤ hi - 2k`, and nothing downstream reads `f`
//! out of the top slice.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebra::{BigradedTable, IndexConvention, Matrix, Subquotient};
use crate::complex::GradedComplex;
use crate::decomposition::Decomposition;
use crate::spectral::assembled_pages;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoupleError {
    #[error("map {map} at ({i}, {s}) has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape { map: &'static str, i: i64, s: i64, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("composition {what} is nonzero at ({i}, {s})")]
    NonzeroComposition { what: &'static str, i: i64, s: i64 },
    #[error("not exact at {space}({i}, {s}): kernel {kernel} vs image {image}")]
    NotExact { space: &'static str, i: i64, s: i64, kernel: usize, image: usize },
    #[error("insufficient window: need A up to polynomial degree {needed}, window ends at {hi}")]
    InsufficientWindow { needed: i64, hi: i64 },
}

type Pos = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCouple {
    k: i64,
    lo: i64,
    hi: i64,
    g_shift: i64,
    a: BTreeMap<Pos, usize>,
    e: BTreeMap<Pos, usize>,
    f: BTreeMap<Pos, Matrix>,
    g: BTreeMap<Pos, Matrix>,
    h: BTreeMap<Pos, Matrix>,
}

impl ExactCouple {
    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn g_shift(&self) -> i64 {
        self.g_shift
    }

    fn two_k(&self) -> i64 {
        2 * self.k
    }

    pub fn a_dim(&self, p: Pos) -> usize {
        if p.1 < self.lo || p.1 > self.hi {
            return 0;
        }
        self.a.get(&p).copied().unwrap_or(0)
    }

    pub fn e_dim(&self, p: Pos) -> usize {
        self.e.get(&p).copied().unwrap_or(0)
    }

    /// `E` dimensions in `(i, s)` convention.
    pub fn e_table(&self) -> BigradedTable {
        BigradedTable::from_entries(IndexConvention::HomPoly, self.e.iter().map(|(&p, &d)| (p, d)))
    }

    pub fn a_table(&self) -> BigradedTable {
        BigradedTable::from_entries(IndexConvention::HomPoly, self.a.iter().map(|(&p, &d)| (p, d)))
    }

    /// `f` out of `A(i,s)`; `None` at the top slice where it leaves the window.
    pub fn f(&self, (i, s): Pos) -> Option<Matrix> {
        if s + self.two_k() > self.hi {
            return None;
        }
        Some(self.f.get(&(i, s)).cloned().unwrap_or_else(|| Matrix::zeros(self.a_dim((i, s + self.two_k())), self.a_dim((i, s)))))
    }

    pub fn g(&self, (i, s): Pos) -> Matrix {
        self.g
            .get(&(i, s))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.e_dim((i, s + self.g_shift)), self.a_dim((i, s))))
    }

    pub fn h(&self, (i, s): Pos) -> Matrix {
        self.h
            .get(&(i, s))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.a_dim((i + 1, s - self.two_k())), self.e_dim((i, s))))
    }

    /// `d = g ∘ h: E(i,s) → E(i+1, s-2k+g_shift)`.
    pub fn d(&self, (i, s): Pos) -> Matrix {
        self.g((i + 1, s - self.two_k())).mul(&self.h((i, s)))
    }

    /// Largest polynomial degree of `A` that `g` must read to reach every
    /// class of `E`.
    fn needed_hi(&self) -> i64 {
        self.e.keys().map(|&(_, s)| s - self.g_shift).max().unwrap_or(self.lo)
    }

    fn positions(&self) -> BTreeSet<Pos> {
        self.a.keys().chain(self.e.keys()).copied().collect()
    }

    pub fn validate(&self) -> Result<(), CoupleError> {
        let tk = self.two_k();
        let shape = |map: &'static str, (i, s): Pos, m: &Matrix, rows: usize, cols: usize| {
            if m.shape() != (rows, cols) {
                Err(CoupleError::Shape { map, i, s, rows: m.rows(), cols: m.cols(), expected_rows: rows, expected_cols: cols })
            } else {
                Ok(())
            }
        };
        for (&(i, s), m) in &self.f {
            shape("f", (i, s), m, self.a_dim((i, s + tk)), self.a_dim((i, s)))?;
        }
        for (&(i, s), m) in &self.g {
            shape("g", (i, s), m, self.e_dim((i, s + self.g_shift)), self.a_dim((i, s)))?;
        }
        for (&(i, s), m) in &self.h {
            shape("h", (i, s), m, self.a_dim((i + 1, s - tk)), self.e_dim((i, s)))?;
        }
        if self.needed_hi() > self.hi {
            return Err(CoupleError::InsufficientWindow { needed: self.needed_hi(), hi: self.hi });
        }
        for (i, s) in self.positions() {
            // Exactness at A(i,s) as the target of f: ker g = im f.
            if self.a_dim((i, s)) > 0 {
                let g = self.g((i, s));
                let into = self.f((i, s - tk)).unwrap_or_else(|| Matrix::zeros(self.a_dim((i, s)), 0));
                if !g.mul(&into).is_zero() {
                    return Err(CoupleError::NonzeroComposition { what: "g∘f", i, s });
                }
                let kernel = g.cols() - g.rank();
                let image = into.rank();
                if kernel != image {
                    return Err(CoupleError::NotExact { space: "A", i, s, kernel, image });
                }
                // Exactness at A(i,s) as the target of h: ker f = im h.
                if let Some(f) = self.f((i, s)) {
                    let h = self.h((i - 1, s + tk));
                    if !f.mul(&h).is_zero() {
                        return Err(CoupleError::NonzeroComposition { what: "f∘h", i, s });
                    }
                    let kernel = f.cols() - f.rank();
                    let image = h.rank();
                    if kernel != image {
                        return Err(CoupleError::NotExact { space: "A", i, s, kernel, image });
                    }
                }
            }
            // Exactness at E(i,s): ker h = im g.
            if self.e_dim((i, s)) > 0 {
                let h = self.h((i, s));
                let g = self.g((i, s - self.g_shift));
                if !h.mul(&g).is_zero() {
                    return Err(CoupleError::NonzeroComposition { what: "h∘g", i, s });
                }
                let kernel = h.cols() - h.rank();
                let image = g.rank();
                if kernel != image {
                    return Err(CoupleError::NotExact { space: "E", i, s, kernel, image });
                }
            }
        }
        Ok(())
    }

    /// The derived couple: `A' = im f`, `E' = ker d / im d`, `f' = f|A'`,
    /// `g'(fβ) = [gβ]`, `h'[η] = hη`.
    pub fn derive(&self) -> Result<ExactCouple, CoupleError> {
        self.validate()?;
        let tk = self.two_k();
        let g_shift = self.g_shift - tk;
        let needed = self.e.keys().map(|&(_, s)| s - g_shift).max().unwrap_or(self.lo);
        if needed > self.hi {
            return Err(CoupleError::InsufficientWindow { needed, hi: self.hi });
        }
        // A' as column spans inside A.
        let mut a_basis: BTreeMap<Pos, Matrix> = BTreeMap::new();
        for &(i, s) in self.a.keys() {
            if let Some(f) = self.f((i, s - tk)) {
                let img = f.image();
                if img.cols() > 0 {
                    a_basis.insert((i, s), img);
                }
            }
        }
        let basis = |p: Pos| a_basis.get(&p).cloned().unwrap_or_else(|| Matrix::zeros(self.a_dim(p), 0));
        // E' as ker d / im d.
        let mut e_sub: BTreeMap<Pos, Subquotient> = BTreeMap::new();
        for &(i, s) in self.e.keys() {
            let out = self.d((i, s));
            let incoming = self.d((i - 1, s + tk - self.g_shift));
            let q = Subquotient::new(&out.kernel(), &incoming);
            if q.dim() > 0 {
                e_sub.insert((i, s), q);
            }
        }
        let mut out = ExactCouple {
            k: self.k,
            lo: self.lo,
            hi: self.hi,
            g_shift,
            a: a_basis.iter().map(|(&p, m)| (p, m.cols())).collect(),
            e: e_sub.iter().map(|(&p, q)| (p, q.dim())).collect(),
            f: BTreeMap::new(),
            g: BTreeMap::new(),
            h: BTreeMap::new(),
        };
        for (&(i, s), b) in &a_basis {
            if let Some(f) = self.f((i, s)) {
                let image = f.mul(b);
                let m = basis((i, s + tk)).solve_matrix(&image).expect("f preserves im f");
                if !m.is_zero() {
                    out.f.insert((i, s), m);
                }
            }
            let pre = self.f((i, s - tk)).unwrap().solve_matrix(b).expect("A' lies in im f");
            let g_vals = self.g((i, s - tk)).mul(&pre);
            let target = (i, s - tk + self.g_shift);
            if let Some(q) = e_sub.get(&target) {
                let m = q.coords_matrix(&g_vals).expect("g lands in cycles");
                if !m.is_zero() {
                    out.g.insert((i, s), m);
                }
            }
        }
        for (&(i, s), q) in &e_sub {
            let vals = self.h((i, s)).mul(q.reps());
            let m = basis((i + 1, s - tk)).solve_matrix(&vals).expect("h of a d-cycle lies in im f");
            if !m.is_zero() {
                out.h.insert((i, s), m);
            }
        }
        debug_assert_eq!(out.validate(), Ok(()));
        Ok(out)
    }

    /// Window padding needed so that `r - 1` derivations stay exact-checkable.
    pub fn required_hi(&self, r: u32) -> i64 {
        self.e.keys().map(|&(_, s)| s - self.g_shift + self.two_k() * (r as i64 - 1)).max().unwrap_or(self.lo)
    }
}

/// Dimensions of `E^(r)`, first index homological, second polynomial degree.
pub fn couple_pages(c: &ExactCouple, r: u32) -> Result<BigradedTable, CoupleError> {
    assert!(r >= 1);
    let mut cur = c.clone();
    for _ in 1..r {
        cur = cur.derive()?;
    }
    cur.validate()?;
    Ok(cur.e_table())
}

/// All pages `E^(1) ..= E^(r_max)`.
pub fn couple_page_range(c: &ExactCouple, r_max: u32) -> Result<Vec<BigradedTable>, CoupleError> {
    let mut cur = c.clone();
    cur.validate()?;
    let mut out = vec![cur.e_table()];
    for _ in 1..r_max {
        cur = cur.derive()?;
        out.push(cur.e_table());
    }
    Ok(out)
}

/// Polynomial-degree window `[lo, hi]` large enough for `r_max` pages of
/// the couple of `d`.
pub fn default_window(d: &Decomposition, r_max: u32) -> (i64, i64) {
    let tk = 2 * d.k;
    let hn = d.hn_table();
    let lo = hn.iter().map(|((_, s), _)| s).min().unwrap_or(0) - tk;
    let hi = hn.iter().map(|((_, s), _)| s).max().unwrap_or(0) + tk * (r_max as i64).max(d.torsion_width() as i64 + 2);
    (lo, hi)
}

/// The couple `(H, H mod a, a, π_a, Δ)` realized directly on the pieces of `d`.
pub fn couple_from_decomposition(d: &Decomposition) -> ExactCouple {
    couple_from_decomposition_in(d, default_window(d, d.torsion_width() + 2))
}

pub fn couple_from_decomposition_in(d: &Decomposition, (lo, hi): (i64, i64)) -> ExactCouple {
    let tk = 2 * d.k;
    // Basis of A: (position, chain) where chain identifies a cyclic piece and
    // the power of a. Basis of E: one class per entry.
    let mut a_gens: BTreeMap<Pos, Vec<(usize, u32)>> = BTreeMap::new();
    let mut e_gens: BTreeMap<Pos, Vec<usize>> = BTreeMap::new();
    // Per cyclic piece: (i, s, Some(m) for torsion).
    let mut pieces: Vec<(i64, i64, Option<u32>)> = d.free().iter().map(|p| (p.i, p.s, None)).collect();
    pieces.extend(d.torsion().iter().map(|t| (t.i, t.s, Some(t.m))));
    let mut bottom_class = Vec::new();
    let mut top_class = Vec::new();
    for (id, &(i, s, m)) in pieces.iter().enumerate() {
        let mut j = 0u32;
        while s + tk * j as i64 <= hi && m.is_none_or(|m| j < m) {
            let p = (i, s + tk * j as i64);
            if p.1 >= lo {
                a_gens.entry(p).or_default().push((id, j));
            }
            j += 1;
        }
        let e = e_gens.entry((i, s)).or_default();
        e.push(id);
        bottom_class.push(((i, s), e.len() - 1));
        if let Some(m) = m {
            let top = (i - 1, s + tk * m as i64);
            let e = e_gens.entry(top).or_default();
            e.push(id);
            top_class.push(Some((top, e.len() - 1)));
        } else {
            top_class.push(None);
        }
    }
    let index_of = |p: Pos, id: usize, j: u32| a_gens.get(&p).and_then(|v| v.iter().position(|&x| x == (id, j)));
    let mut c = ExactCouple {
        k: d.k,
        lo,
        hi,
        g_shift: 0,
        a: a_gens.iter().map(|(&p, v)| (p, v.len())).collect(),
        e: e_gens.iter().map(|(&p, v)| (p, v.len())).collect(),
        f: BTreeMap::new(),
        g: BTreeMap::new(),
        h: BTreeMap::new(),
    };
    for (&(i, s), gens) in &a_gens {
        if s + tk <= hi {
            let mut m = Matrix::zeros(c.a_dim((i, s + tk)), gens.len());
            for (col, &(id, j)) in gens.iter().enumerate() {
                if let Some(row) = index_of((i, s + tk), id, j + 1) {
                    m.set(row, col, crate::algebra::q(1));
                }
            }
            if !m.is_zero() {
                c.f.insert((i, s), m);
            }
        }
        let mut m = Matrix::zeros(c.e_dim((i, s)), gens.len());
        for (col, &(id, j)) in gens.iter().enumerate() {
            if j == 0 {
                let (p, row) = bottom_class[id];
                debug_assert_eq!(p, (i, s));
                m.set(row, col, crate::algebra::q(1));
            }
        }
        if !m.is_zero() {
            c.g.insert((i, s), m);
        }
    }
    for (id, top) in top_class.iter().enumerate() {
        if let (Some((p, row)), (i, s, Some(m))) = (top, pieces[id]) {
            let target = (i, s + tk * (m as i64 - 1));
            let h = c.h.entry(*p).or_insert_with(|| Matrix::zeros(c.a.get(&target).copied().unwrap_or(0), c.e[p]));
            if let Some(r) = index_of(target, id, m - 1) {
                h.set(r, *row, crate::algebra::q(1));
            }
        }
    }
    c
}

/// The couple of a graded complex computed from its polynomial-degree slices:
/// `A(i,s) = H^i(C)_s`, `E(i,s) = H^i(C/aC)_s`, `f = a`, `g = π_a`, and `h` the
/// connecting map.
pub fn couple_from_complex(c: &GradedComplex, (lo, hi): (i64, i64)) -> ExactCouple {
    let tk = c.ring().a_degree();
    let degrees = c.support();
    let span = |i: i64, s: i64| -> Vec<usize> {
        c.degrees(i).iter().enumerate().filter(|(_, &d)| d <= s && (s - d) % tk == 0).map(|(g, _)| g).collect()
    };
    let exact_at = |i: i64, s: i64| -> Vec<usize> {
        c.degrees(i).iter().enumerate().filter(|(_, &d)| d == s).map(|(g, _)| g).collect()
    };
    let residues: BTreeSet<i64> =
        degrees.iter().flat_map(|&i| c.degrees(i).iter().map(|d| d.rem_euclid(tk)).collect::<Vec<_>>()).collect();
    let mut a_sub: BTreeMap<Pos, (Vec<usize>, Subquotient)> = BTreeMap::new();
    let mut e_sub: BTreeMap<Pos, (Vec<usize>, Subquotient)> = BTreeMap::new();
    for &i in &degrees {
        for s in lo..=hi {
            if !residues.contains(&s.rem_euclid(tk)) {
                continue;
            }
            let here = span(i, s);
            if !here.is_empty() {
                let out = c.differential(i).select_rows(&span(i + 1, s)).select_cols(&here);
                let inc = c.differential(i - 1).select_rows(&here).select_cols(&span(i - 1, s));
                let q = Subquotient::new(&out.kernel(), &inc);
                if q.dim() > 0 {
                    a_sub.insert((i, s), (here, q));
                }
            }
            let here = exact_at(i, s);
            if !here.is_empty() {
                let out = c.differential(i).select_rows(&exact_at(i + 1, s)).select_cols(&here);
                let inc = c.differential(i - 1).select_rows(&here).select_cols(&exact_at(i - 1, s));
                let q = Subquotient::new(&out.kernel(), &inc);
                if q.dim() > 0 {
                    e_sub.insert((i, s), (here, q));
                }
            }
        }
    }
    let mut out = ExactCouple {
        k: c.k(),
        lo,
        hi,
        g_shift: 0,
        a: a_sub.iter().map(|(&p, (_, q))| (p, q.dim())).collect(),
        e: e_sub.iter().map(|(&p, (_, q))| (p, q.dim())).collect(),
        f: BTreeMap::new(),
        g: BTreeMap::new(),
        h: BTreeMap::new(),
    };
    // Moves a vector on the generators `from` to the generators `to`
    // (zero outside, dropping coordinates not in `to`).
    let transfer = |v: &[crate::algebra::Q], from: &[usize], to: &[usize]| -> Vec<crate::algebra::Q> {
        to.iter()
            .map(|g| from.iter().position(|x| x == g).map(|k| v[k].clone()).unwrap_or_default())
            .collect()
    };
    for (&(i, s), (gens, q)) in &a_sub {
        let reps = q.reps();
        if let Some((tgens, tq)) = a_sub.get(&(i, s + tk)) {
            if s + tk <= hi {
                let cols: Vec<_> = (0..reps.cols()).map(|j| transfer(&reps.column(j), gens, tgens)).collect();
                let m = tq.coords_matrix(&Matrix::from_columns(tgens.len(), &cols)).unwrap();
                if !m.is_zero() {
                    out.f.insert((i, s), m);
                }
            }
        }
        if let Some((egens, eq)) = e_sub.get(&(i, s)) {
            let cols: Vec<_> = (0..reps.cols()).map(|j| transfer(&reps.column(j), gens, egens)).collect();
            let m = eq.coords_matrix(&Matrix::from_columns(egens.len(), &cols)).unwrap();
            if !m.is_zero() {
                out.g.insert((i, s), m);
            }
        }
    }
    for (&(i, s), (gens, q)) in &e_sub {
        let Some((tgens, tq)) = a_sub.get(&(i + 1, s - tk)) else { continue };
        let full_rows = span(i + 1, s);
        let d = c.differential(i).select_rows(&full_rows).select_cols(gens);
        let reps = q.reps();
        let cols: Vec<_> = (0..reps.cols())
            .map(|j| {
                let dx = d.mul_vec(&reps.column(j));
                transfer(&dx, &full_rows, tgens)
            })
            .collect();
        let m = tq.coords_matrix(&Matrix::from_columns(tgens.len(), &cols)).unwrap();
        if !m.is_zero() {
            out.h.insert((i, s), m);
        }
    }
    out
}

/// First `r` at which `E^(r) = E^(r+1) = …`, looking up to `r_max` pages.
pub fn couple_collapse(pages: &[BigradedTable]) -> u32 {
    let mut t = 1;
    for (j, w) in pages.windows(2).enumerate() {
        if w[0] != w[1] {
            t = j as u32 + 2;
        }
    }
    t
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Correspondence {
    Pass,
    Mismatch { r: u32, couple: BigradedTable, hat: BigradedTable },
    Error(CoupleError),
}

/// Compares `E^(r)` of the couple, reindexed to page positions, with the
/// field page `2k(r-1)+1`, for `r = 1 ..= r_max`.
pub fn correspondence_check(d: &Decomposition, r_max: u32) -> Correspondence {
    let c = couple_from_decomposition_in(d, default_window(d, r_max));
    let pages = match couple_page_range(&c, r_max) {
        Ok(p) => p,
        Err(e) => return Correspondence::Error(e),
    };
    for (j, page) in pages.into_iter().enumerate() {
        let r = j as u32 + 1;
        let couple = page.to_convention(IndexConvention::Page);
        let hat = assembled_pages(d, true, 2 * d.k as u32 * (r - 1) + 1).field().unwrap().clone();
        if couple != hat {
            return Correspondence::Mismatch { r, couple, hat };
        }
    }
    Correspondence::Pass
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(entries: &[((i64, i64), usize)]) -> BigradedTable {
        BigradedTable::from_entries(IndexConvention::HomPoly, entries.iter().copied())
    }

    #[test]
    fn free_model_is_constant() {
        let d = Decomposition::from_tuples(1, &[(0, 0)], &[]);
        let c = couple_from_decomposition(&d);
        c.validate().unwrap();
        assert!(c.h.is_empty());
        for t in couple_page_range(&c, 3).unwrap() {
            assert_eq!(t, table(&[((0, 0), 1)]));
        }
    }

    #[test]
    fn torsion_model_dies_after_m_derivations() {
        let d = Decomposition::from_tuples(1, &[], &[(1, 2, 0)]);
        let pages = couple_page_range(&couple_from_decomposition(&d), 4).unwrap();
        assert_eq!(pages[0], table(&[((1, 0), 1), ((0, 4), 1)]));
        assert_eq!(pages[1], pages[0]);
        assert!(pages[2].is_empty());
        assert!(pages[3].is_empty());
        assert_eq!(couple_collapse(&pages), 3);
    }

    #[test]
    fn order_one_torsion_d1() {
        let d = Decomposition::from_tuples(2, &[], &[(1, 1, 0)]);
        let c = couple_from_decomposition(&d);
        assert_eq!(c.d((0, 4)).rank(), 1);
    }

    #[test]
    fn h_zero_gives_h_prime_zero() {
        let d = Decomposition::from_tuples(2, &[(0, 0), (3, 8), (3, 8)], &[]);
        let c = couple_from_decomposition(&d);
        let c2 = c.derive().unwrap();
        assert!(c2.h.is_empty());
        assert_eq!(c2.e_table(), c.e_table());
    }

    #[test]
    fn correspondence_small_cases() {
        assert_eq!(correspondence_check(&Decomposition::from_tuples(1, &[(0, 0)], &[]), 3), Correspondence::Pass);
        assert_eq!(correspondence_check(&Decomposition::from_tuples(1, &[], &[(1, 2, 0)]), 4), Correspondence::Pass);
    }

    #[test]
    fn insufficient_window_is_reported() {
        let d = Decomposition::from_tuples(1, &[], &[(1, 2, 0)]);
        let c = couple_from_decomposition_in(&d, (-2, 4));
        assert!(matches!(couple_pages(&c, 3), Err(CoupleError::InsufficientWindow { .. })));
    }

    #[test]
    fn complex_couple_matches_model() {
        let d = Decomposition::from_tuples(1, &[(0, 0), (2, 2)], &[(1, 2, 0), (2, 1, 4)]);
        let w = default_window(&d, 4);
        let model = couple_page_range(&couple_from_decomposition_in(&d, w), 4).unwrap();
        let direct = couple_page_range(&couple_from_complex(&d.reassemble(), w), 4).unwrap();
        assert_eq!(model, direct);
    }
}
