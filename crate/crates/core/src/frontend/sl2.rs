//! Cube of resolutions for `N = 2`.
//!
//! Each resolution with `c` circles contributes `A^{⊗c}`, where
//! `A = Q[a][x]/(x² - h x - t)` comes from `∂P/∂x = 0`. As a `Q[a]`-module `A` is
//! free on `1` (degree -1) and `x` (degree 1), the unknot with its `{-1}` shift.
//! Edges are the multiplication and comultiplication of `A`, with counit
//! `ε(x) = 1`, `ε(1) = 0`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::pd::LinkDiagram;
use crate::algebra::{q, q_frac, GradedRing, Matrix, Q};
use crate::complex::GradedComplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PotentialError {
    #[error("k must be 1 or 2 for N = 2, got {0}")]
    BadK(i64),
    #[error("λ2 needs k = 1")]
    LambdaTwo,
}

/// `P = x³ + λ₁ a x^{3-k} + λ₂ a² x^{3-2k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Potential {
    pub k: i64,
    pub lambda1: Q,
    pub lambda2: Q,
}

impl Sl2Potential {
    pub fn new(k: i64, lambda1: Q, lambda2: Q) -> Result<Self, PotentialError> {
        match k {
            1 => Ok(Sl2Potential { k, lambda1, lambda2 }),
            2 if lambda2 == q(0) => Ok(Sl2Potential { k, lambda1, lambda2 }),
            2 => Err(PotentialError::LambdaTwo),
            _ => Err(PotentialError::BadK(k)),
        }
    }

    /// `x³ - a x` with `deg a = 4`.
    pub fn lee() -> Self {
        Self::new(2, q(-1), q(0)).unwrap()
    }

    /// Scalars of `h` and `t` in `x² = h x + t`.
    fn relation(&self) -> (Q, Q) {
        match self.k {
            2 => (q(0), -self.lambda1.clone() / q(3)),
            _ => (-self.lambda1.clone() * q_frac(2, 3), -self.lambda2.clone() / q(3)),
        }
    }
}

struct Resolution {
    circles: usize,
    /// Circle of each arc.
    circle_of: BTreeMap<i64, usize>,
}

fn resolve(d: &LinkDiagram, state: u32) -> Resolution {
    let mut arcs: Vec<i64> = d.crossings().iter().flat_map(|c| c.arcs).collect();
    arcs.sort_unstable();
    arcs.dedup();
    let index: BTreeMap<i64, usize> = arcs.iter().enumerate().map(|(j, &a)| (a, j)).collect();
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let union = |p: &mut Vec<usize>, a: i64, b: i64| {
        let (x, y) = (find(p, index[&a]), find(p, index[&b]));
        p[x.max(y)] = x.min(y);
    };
    for (n, c) in d.crossings().iter().enumerate() {
        let [i, j, k, l] = c.arcs;
        if state >> n & 1 == 0 {
            union(&mut parent, i, j);
            union(&mut parent, k, l);
        } else {
            union(&mut parent, i, l);
            union(&mut parent, j, k);
        }
    }
    let mut roots = BTreeMap::new();
    let mut circle_of = BTreeMap::new();
    for (j, &a) in arcs.iter().enumerate() {
        let r = find(&mut parent, j);
        let next = roots.len();
        let id = *roots.entry(r).or_insert(next);
        circle_of.insert(a, id);
    }
    Resolution { circles: roots.len() + d.free_loops(), circle_of }
}

/// Image of one basis element along an edge: `(target label mask, scalar)`.
fn edge_image(
    src: &Resolution,
    tgt: &Resolution,
    arcs: [i64; 4],
    labels: u32,
    free_loops: usize,
    (h, t): &(Q, Q),
) -> Vec<(u32, Q)> {
    let crossing_circles = src.circles - free_loops;
    let target_crossing_circles = tgt.circles - free_loops;
    let [i, j, k, _] = arcs;
    // Carry circles away from the crossing across unchanged.
    let (a, b) = (src.circle_of[&i], src.circle_of[&k]);
    let mut base = 0u32;
    for (arc, &c) in &src.circle_of {
        if c != a && c != b && labels >> c & 1 == 1 {
            base |= 1 << tgt.circle_of[arc];
        }
    }
    for f in 0..free_loops {
        if labels >> (crossing_circles + f) & 1 == 1 {
            base |= 1 << (target_crossing_circles + f);
        }
    }
    let bit = |c: usize| labels >> c & 1;
    if a != b {
        let m = tgt.circle_of[&i];
        match (bit(a), bit(b)) {
            (0, 0) => vec![(base, q(1))],
            (1, 1) => vec![(base | 1 << m, h.clone()), (base, t.clone())],
            _ => vec![(base | 1 << m, q(1))],
        }
    } else {
        let (c1, c2) = (tgt.circle_of[&i], tgt.circle_of[&j]);
        if bit(a) == 0 {
            vec![(base | 1 << c2, q(1)), (base | 1 << c1, q(1)), (base, -h.clone())]
        } else {
            vec![(base | 1 << c1 | 1 << c2, q(1)), (base, t.clone())]
        }
    }
}

pub fn build_sl2_cube(d: &LinkDiagram, p: &Sl2Potential) -> GradedComplex {
    let ring = GradedRing::new(p.k).unwrap();
    let rel = p.relation();
    let n = d.crossings().len();
    let (n_plus, n_minus) = (d.n_plus() as i64, d.n_minus() as i64);
    let global = 2 * n_minus - n_plus;
    let states: Vec<u32> = (0..1u32 << n).collect();
    let res: Vec<Resolution> = states.iter().map(|&s| resolve(d, s)).collect();
    // Generator offsets per state within its homological degree.
    let mut modules: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    let mut offset = vec![0usize; states.len()];
    for &s in &states {
        let r = s.count_ones() as i64;
        let degs = modules.entry(r - n_minus).or_default();
        offset[s as usize] = degs.len();
        let c = res[s as usize].circles as u32;
        for labels in 0..1u32 << c {
            degs.push(2 * labels.count_ones() as i64 - c as i64 - r + global);
        }
    }
    let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
    for &s in &states {
        let r = s.count_ones() as i64;
        let i = r - n_minus;
        let Some(target_len) = modules.get(&(i + 1)).map(|v| v.len()) else { continue };
        let source_len = modules[&i].len();
        let m = diffs.entry(i).or_insert_with(|| Matrix::zeros(target_len, source_len));
        for (p_idx, c) in d.crossings().iter().enumerate() {
            if s >> p_idx & 1 == 1 {
                continue;
            }
            let t = s | 1 << p_idx;
            let sign = if (s & ((1 << p_idx) - 1)).count_ones() % 2 == 0 { q(1) } else { q(-1) };
            let (src, tgt) = (&res[s as usize], &res[t as usize]);
            for labels in 0..1u32 << src.circles {
                let col = offset[s as usize] + labels as usize;
                for (out, coeff) in edge_image(src, tgt, c.arcs, labels, d.free_loops(), &rel) {
                    if coeff != q(0) {
                        *m.get_mut(offset[t as usize] + out as usize, col) += sign.clone() * coeff;
                    }
                }
            }
        }
    }
    GradedComplex::new(ring, modules, diffs).expect("cube of resolutions is a valid complex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BigradedTable, IndexConvention};
    use crate::complex::homology_field;
    use crate::decomposition::{decompose, Decomposition};

    #[test]
    fn unknot_is_minus_one_one() {
        let c = build_sl2_cube(&LinkDiagram::unknot(), &Sl2Potential::lee());
        assert_eq!(decompose(&c).unwrap(), Decomposition::from_tuples(2, &[(0, -1), (0, 1)], &[]));
    }

    #[test]
    fn kinked_unknot() {
        for word in ["s1", "-s1"] {
            let d = LinkDiagram::parse_braid(word, None).unwrap();
            let c = build_sl2_cube(&d, &Sl2Potential::lee());
            assert_eq!(decompose(&c).unwrap(), Decomposition::from_tuples(2, &[(0, -1), (0, 1)], &[]));
        }
    }

    #[test]
    fn right_trefoil_table() {
        let d = LinkDiagram::parse_braid("s1 s1 s1", None).unwrap();
        let c = build_sl2_cube(&d, &Sl2Potential::lee());
        let t = homology_field(&c.reduce_mod_a()).bigraded();
        let expected = BigradedTable::from_entries(
            IndexConvention::HomPoly,
            [((0, -1), 1), ((0, -3), 1), ((2, -5), 1), ((3, -9), 1)],
        );
        assert_eq!(t, expected);
        let dec = decompose(&c).unwrap();
        assert_eq!(dec, Decomposition::from_tuples(2, &[(0, -3), (0, -1)], &[(3, 1, -9)]));
    }

    #[test]
    fn k1_potential_is_valid() {
        let d = LinkDiagram::parse_braid("s1 s1 s1", None).unwrap();
        let p = Sl2Potential::new(1, q(1), q(-2)).unwrap();
        let c = build_sl2_cube(&d, &p);
        c.validate().unwrap();
    }
}
