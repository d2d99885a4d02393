//! The closed 2-braid with four crossings, for a general `N`.
//!
//! After simplification its complex splits as `C₁ ⊕ C₂ ⊕ C₃`. `C₁` and `C₃` are
//! free with zero differential; `C₂` is `M{-4N} → M{-6N+2}`, multiplication by
//! `-x^{N-1}`, at degrees 2 and 3. Here `M = Q[x, a]/(∂P/∂x)` is free over
//! `Q[a]` on `1, x, …, x^{N-1}`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{q, GradedModuleDescriptor, GradedRing, Matrix, Q};
use crate::complex::GradedComplex;
use crate::decomposition::Decomposition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("N must be at least 2, got {0}")]
    SmallN(u32),
    #[error("k must be positive, got {0}")]
    BadK(i64),
    #[error("term a^{j} x^(N+1-{j}k) has negative x exponent")]
    TermOutOfRange { j: u32 },
    #[error("P_i needs 1 <= i <= N, got i = {i} with N = {n}")]
    BadIndex { n: u32, i: u32 },
}

/// `P(x, a) = x^{N+1} + Σ_j λ_j a^j x^{N+1-jk}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoBraidSpec {
    pub n: u32,
    pub k: i64,
    pub lambdas: BTreeMap<u32, Q>,
}

impl TwoBraidSpec {
    pub fn new(n: u32, k: i64, lambdas: BTreeMap<u32, Q>) -> Result<Self, SpecError> {
        if n < 2 {
            return Err(SpecError::SmallN(n));
        }
        if k < 1 {
            return Err(SpecError::BadK(k));
        }
        if let Some(&j) = lambdas.keys().find(|&&j| j == 0 || j as i64 * k > n as i64 + 1) {
            return Err(SpecError::TermOutOfRange { j });
        }
        let lambdas = lambdas.into_iter().filter(|(_, v)| *v != Q::from_integer(0.into())).collect();
        Ok(TwoBraidSpec { n, k, lambdas })
    }

    /// `P_i = x^{N+1} + b x^i` with `deg b = 2N+2-2i`.
    pub fn p_i(n: u32, i: u32) -> Result<Self, SpecError> {
        Self::p_i_scaled(n, i, q(1))
    }

    /// `x^{N+1} + λ b x^i`.
    pub fn p_i_scaled(n: u32, i: u32, lambda: Q) -> Result<Self, SpecError> {
        if i < 1 || i > n {
            return Err(SpecError::BadIndex { n, i });
        }
        Self::new(n, (n + 1 - i) as i64, BTreeMap::from([(1, lambda)]))
    }

    pub fn ring(&self) -> GradedRing {
        GradedRing::new(self.k).unwrap()
    }

    /// Multiplication by `x` on the basis `x^0 … x^{N-1}` of `M`, as a scalar
    /// matrix: `x · x^{N-1} = -(1/(N+1)) Σ_j λ_j (N+1-jk) a^j x^{N-jk}`.
    pub fn x_matrix(&self) -> Matrix {
        let n = self.n as usize;
        let mut x = Matrix::zeros(n, n);
        for j in 0..n - 1 {
            x.set(j + 1, j, q(1));
        }
        for (&j, lambda) in &self.lambdas {
            let e = n as i64 - j as i64 * self.k;
            if e < 0 {
                continue;
            }
            let c = -lambda.clone() * q(e + 1) / q(n as i64 + 1);
            *x.get_mut(e as usize, n - 1) += c;
        }
        x
    }

    fn m_degrees(&self, shift: i64) -> Vec<i64> {
        (0..self.n as i64).map(|j| 2 * j + shift).collect()
    }
}

fn power(m: &Matrix, e: u32) -> Matrix {
    (0..e).fold(Matrix::identity(m.rows()), |acc, _| acc.mul(m))
}

/// `C₂` in its simplified form `M{-4N} --(-x^{N-1})--> M{-6N+2}`.
pub fn c2(spec: &TwoBraidSpec) -> GradedComplex {
    let n = spec.n as i64;
    let d = power(&spec.x_matrix(), spec.n - 1).scale(&q(-1));
    GradedComplex::new(
        spec.ring(),
        BTreeMap::from([(2, spec.m_degrees(-4 * n)), (3, spec.m_degrees(-6 * n + 2))]),
        BTreeMap::from([(2, d)]),
    )
    .expect("simplified C2 is a valid complex")
}

pub fn build_twobraid(spec: &TwoBraidSpec) -> GradedComplex {
    let n = spec.n as i64;
    let mut modules = BTreeMap::new();
    modules.insert(0, spec.m_degrees(-4 * n + 4));
    modules.insert(4, (0..n - 1).flat_map(|j| spec.m_degrees(-4 * n - 4 - 2 * j)).collect());
    let outer = GradedComplex::new(spec.ring(), modules, BTreeMap::new()).unwrap();
    outer.direct_sum(&c2(spec)).unwrap()
}

/// `C₂` before the eliminations: `M^{⊕(N-1)} → M^{⊕(N-1)}` by the block
/// matrix with `1` on the diagonal and `-x` on the superdiagonal of the first
/// `N-2` rows, and `-x` in the first column of the last row.
pub fn build_twobraid_unreduced(spec: &TwoBraidSpec) -> GradedComplex {
    let n = spec.n as usize;
    let blocks = n - 1;
    let x = spec.x_matrix().scale(&q(-1));
    let ni = spec.n as i64;
    let source: Vec<i64> = (0..blocks as i64).flat_map(|t| spec.m_degrees(-6 * ni + 4 + 2 * t)).collect();
    let mut target: Vec<i64> = (0..blocks as i64 - 1).flat_map(|t| spec.m_degrees(-6 * ni + 4 + 2 * t)).collect();
    target.extend(spec.m_degrees(-6 * ni + 2));
    let mut d = Matrix::zeros(blocks * n, blocks * n);
    let mut put = |row: usize, col: usize, b: &Matrix| {
        for r in 0..n {
            for c in 0..n {
                d.set(row * n + r, col * n + c, b.get(r, c).clone());
            }
        }
    };
    for t in 0..blocks - 1 {
        put(t, t, &Matrix::identity(n));
        put(t, t + 1, &x);
    }
    put(blocks - 1, 0, &x);
    GradedComplex::new(spec.ring(), BTreeMap::from([(2, source), (3, target)]), BTreeMap::from([(2, d)]))
        .expect("unreduced C2 is a valid complex")
}

/// Eliminates the identity blocks one scalar pivot at a time: `N-2` block
/// eliminations, each made of `N` scalar ones.
pub fn reduce_unreduced(c: &GradedComplex, n: u32) -> GradedComplex {
    let mut c = c.clone();
    for _ in 0..(n as usize - 2) * n as usize {
        c = c.gaussian_eliminate(2, 0, 0).expect("unit pivot in the upper left corner");
    }
    c
}

/// Homology of the closed 2-braid for `P_i`, as a decomposition, written
/// straight from the closed formulas. Valid for `1 ≤ i ≤ N-1`.
pub fn expected_decomposition(n: u32, i: u32) -> Decomposition {
    assert!(n >= 2 && (1..n).contains(&i));
    let (n, i) = (n as i64, i as i64);
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for j in 0..n {
        free.push((0, -4 * n + 4 + 2 * j));
    }
    for j in 0..=i - 2 {
        free.push((2, 2 * (-n - i + j + 1)));
        free.push((3, -6 * n + 2 * j + 2));
    }
    for j in i - 1..=n - 2 {
        torsion.push((3, 1, -6 * n + 2 * j + 2));
    }
    for l in 0..=n - 2 {
        for j in 0..n {
            free.push((4, -4 * n - 4 - 2 * l + 2 * j));
        }
    }
    Decomposition::from_tuples(n + 1 - i, &free, &torsion)
}

/// The same table as graded modules per homological degree.
pub fn expected_homology(n: u32, i: u32) -> BTreeMap<i64, GradedModuleDescriptor> {
    expected_decomposition(n, i).homology_structure()
}
