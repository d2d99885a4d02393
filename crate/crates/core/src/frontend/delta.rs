//! The differentials `δ_i` on `H_N` of the closed 2-braid, one for each
//! potential `P_i = x^{N+1} + b x^i`, all on one common basis.

use crate::algebra::{q, Matrix, Q};
use crate::complex::first_differential;
use crate::decomposition::decompose;

use super::twobraid::{build_twobraid, TwoBraidSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    pub n: u32,
    /// Basis of `H_N`, `(homological degree, polynomial degree)`.
    pub classes: Vec<(i64, i64)>,
    /// `δ_1 … δ_N`.
    pub deltas: Vec<Matrix>,
    /// Degrees where `δ_i` is nonzero.
    pub nonzero_degrees: Vec<Vec<i64>>,
    pub ranks: Vec<usize>,
    /// Count of `m = 1` torsion pieces for each `P_i`.
    pub order_one_torsion: Vec<usize>,
    /// `δ_i` nonzero exactly on degree 2 for `i < N`, and `δ_N = 0`.
    pub support_ok: bool,
    /// `δ_i δ_j + δ_j δ_i = 0` for all pairs.
    pub anticommute: bool,
    /// `rank δ_i` equals the number of `m = 1` torsion pieces.
    pub rank_matches_torsion: bool,
}

/// `d^(1)` of the 2-braid complex for `spec`, with its class list.
pub fn d1(spec: &TwoBraidSpec) -> (Vec<(i64, i64)>, Matrix) {
    let f = first_differential(&build_twobraid(spec)).expect("2-braid complexes are minimal mod a");
    (f.classes, f.matrix)
}

pub fn delta_battery(n: u32) -> DeltaReport {
    let mut classes = None;
    let mut deltas = Vec::new();
    let mut nonzero_degrees = Vec::new();
    let mut order_one_torsion = Vec::new();
    for i in 1..=n {
        let spec = TwoBraidSpec::p_i(n, i).unwrap();
        let c = build_twobraid(&spec);
        let f = first_differential(&c).expect("2-braid complexes are minimal mod a");
        match &classes {
            None => classes = Some(f.classes.clone()),
            Some(cl) => assert_eq!(cl, &f.classes, "the mod-a complexes coincide for every i"),
        }
        nonzero_degrees.push(f.nonzero_degrees());
        order_one_torsion.push(decompose(&c).unwrap().torsion().iter().filter(|t| t.m == 1).count());
        deltas.push(f.matrix);
    }
    let ranks: Vec<usize> = deltas.iter().map(Matrix::rank).collect();
    let support_ok = nonzero_degrees
        .iter()
        .enumerate()
        .all(|(j, nz)| if j + 1 < n as usize { nz == &[2] } else { nz.is_empty() });
    let anticommute = deltas.iter().all(|a| deltas.iter().all(|b| a.mul(b).add(&b.mul(a)).is_zero()));
    let rank_matches_torsion = ranks == order_one_torsion;
    DeltaReport {
        n,
        classes: classes.unwrap_or_default(),
        deltas,
        nonzero_degrees,
        ranks,
        order_one_torsion,
        support_ok,
        anticommute,
        rank_matches_torsion,
    }
}

/// Whether `d^(1)` for `x^{N+1} + λ b x^i` equals `λ δ_i`.
pub fn scaling_holds(n: u32, i: u32, lambda: &Q) -> bool {
    let (c0, base) = d1(&TwoBraidSpec::p_i(n, i).unwrap());
    let (c1, scaled) = d1(&TwoBraidSpec::p_i_scaled(n, i, lambda.clone()).unwrap());
    c0 == c1 && scaled == base.scale(lambda)
}

/// The scalings checked by default.
pub fn default_lambdas() -> Vec<Q> {
    vec![q(1), q(5), crate::algebra::q_frac(-2, 3)]
}
