//! Seeded random decompositions and complexes for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{GradedRing, Matrix, Q};
use crate::complex::GradedComplex;
use crate::decomposition::{Decomposition, FreePiece, TorsionPiece};

/// Bounds for random decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    pub max_generators: usize,
    pub max_k: i64,
    pub min_degree: i64,
    pub max_degree: i64,
    pub min_hom: i64,
    pub max_hom: i64,
    pub max_m: u32,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { max_generators: 10, max_k: 3, min_degree: -20, max_degree: 20, min_hom: -2, max_hom: 3, max_m: 3 }
    }
}

/// One corpus entry: a decomposition and a complex that realizes it in a
/// scrambled basis.
#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub index: usize,
    pub decomposition: Decomposition,
    pub complex: GradedComplex,
}

pub fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Deterministic corpus: item `j` depends only on `(seed, j)`.
pub fn corpus(seed: u64, count: usize, params: &CorpusParams) -> Vec<CorpusItem> {
    (0..count).map(|j| corpus_item(seed, j, params)).collect()
}

pub fn corpus_item(seed: u64, index: usize, params: &CorpusParams) -> CorpusItem {
    let mut rng = rng_for(seed, index);
    let decomposition = random_decomposition(&mut rng, params);
    let mut complex = decomposition.reassemble();
    scramble(&mut complex, &mut rng, 40);
    CorpusItem { index, decomposition, complex }
}

/// Random decomposition whose generators all have degrees inside the bounds.
/// Most draws put every degree in one residue class mod `2k`, so that the
/// scrambling step has many homogeneous moves available.
pub fn random_decomposition<R: Rng>(rng: &mut R, p: &CorpusParams) -> Decomposition {
    let k = rng.gen_range(1..=p.max_k);
    let two_k = 2 * k;
    let residue = if rng.gen_bool(0.75) { Some(rng.gen_range(0..two_k)) } else { None };
    let degree = |rng: &mut R, lo: i64, hi: i64| -> i64 {
        match residue {
            Some(r) => {
                let first = lo + (r - lo).rem_euclid(two_k);
                if first > hi {
                    return rng.gen_range(lo..=hi);
                }
                first + two_k * rng.gen_range(0..=(hi - first) / two_k)
            }
            None => rng.gen_range(lo..=hi),
        }
    };
    let budget = rng.gen_range(1..=p.max_generators);
    let mut used = 0;
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    while used < budget {
        let i = rng.gen_range(p.min_hom..=p.max_hom);
        let want_torsion = budget - used >= 2 && rng.gen_bool(0.6);
        if want_torsion {
            let max_m = ((p.max_degree - p.min_degree) / two_k).min(p.max_m as i64) as u32;
            if max_m >= 1 {
                let m = rng.gen_range(1..=max_m);
                let s = degree(rng, p.min_degree, p.max_degree - two_k * m as i64);
                torsion.push(TorsionPiece { i, m, s });
                used += 2;
                continue;
            }
        }
        let s = degree(rng, p.min_degree, p.max_degree);
        free.push(FreePiece { i, s });
        used += 1;
    }
    Decomposition::new(k, free, torsion)
}

/// Applies random homogeneous invertible changes of basis: unit rescalings,
/// swaps, and `e_t ← e_t + c·a^e·e_s` whenever the degrees allow it.
pub fn scramble<R: Rng>(c: &mut GradedComplex, rng: &mut R, steps: usize) {
    let ring = c.ring();
    let degrees = c.support();
    if degrees.is_empty() {
        return;
    }
    for _ in 0..steps {
        let i = *degrees.choose(rng).unwrap();
        let n = c.rank(i);
        if n == 0 {
            continue;
        }
        match rng.gen_range(0..5) {
            0 => {
                let g = rng.gen_range(0..n);
                c.scale_generator(i, g, &random_nonzero(rng));
            }
            1 if n >= 2 => {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                c.swap_generators(i, a, b);
            }
            _ if n >= 2 => {
                let degs = c.degrees(i).to_vec();
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|t| (0..n).map(move |s| (t, s)))
                    .filter(|&(t, s)| t != s && ring.exponent_for_gap(degs[t] - degs[s]).is_some())
                    .collect();
                if let Some(&(t, s)) = pairs.choose(rng) {
                    c.add_generator_multiple(i, t, s, &random_nonzero(rng));
                }
            }
            _ => {}
        }
    }
}

fn random_nonzero<R: Rng>(rng: &mut R) -> Q {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-3i64..=3);
    }
    let den = rng.gen_range(1i64..=2);
    Q::new(num.into(), den.into())
}

/// A decomposable complex with `extra` contractible unit pairs mixed in, for
/// checking that elimination and splitting agree.
pub fn with_contractible<R: Rng>(d: &Decomposition, rng: &mut R, extra: usize) -> GradedComplex {
    let ring = GradedRing::new(d.k).unwrap();
    let mut c = d.reassemble();
    for _ in 0..extra {
        let i = rng.gen_range(-2i64..=3);
        let s = rng.gen_range(-10i64..=10);
        let unit = GradedComplex::new(
            ring,
            [(i - 1, vec![s]), (i, vec![s])].into_iter().collect(),
            [(i - 1, Matrix::identity(1))].into_iter().collect(),
        )
        .unwrap();
        c = c.direct_sum(&unit).unwrap();
    }
    scramble(&mut c, rng, 40);
    c
}
