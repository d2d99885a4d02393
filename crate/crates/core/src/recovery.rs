//! Reconstructing the pieces of `H_P` from the dimensions of the couple pages
//! `Ẽ^(1), Ẽ^(2), …`.
//!
//! A free piece at `(i, s)` contributes one class to every page. A torsion
//! piece `(i, m, s)` contributes `(i, s)` and `(i-1, s+2km)` to pages `r ≤ m`
//! and nothing afterwards. Peeling the pages from the top down recovers both.

use num_rational::Rational64;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::algebra::{BigradedTable, IndexConvention};
use crate::decomposition::{thickness, Decomposition, FreePiece, TorsionPiece};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecoveryError {
    #[error("inconsistent pages: {0}")]
    InconsistentPages(String),
    #[error("page sequence is empty")]
    Empty,
    #[error("k must be positive, got {0}")]
    InvalidK(i64),
}

fn inconsistent(msg: impl Into<String>) -> RecoveryError {
    RecoveryError::InconsistentPages(msg.into())
}

/// `Ẽ^(1), …, Ẽ^(R)`, stored in `(i, s)` convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageSequence {
    pub k: i64,
    pages: Vec<BigradedTable>,
}

impl PageSequence {
    /// Tables given in page convention are reindexed to `(i, s)`.
    pub fn new(k: i64, pages: Vec<BigradedTable>) -> Self {
        let pages = pages.into_iter().map(|t| t.to_convention(IndexConvention::HomPoly)).collect();
        PageSequence { k, pages }
    }

    /// Builds `Ẽ^(r)` from field pages `Ê_1, Ê_2, …` (index `j` holds `Ê_{j+1}`),
    /// using `Ẽ^(r) = Ê_{2k(r-1)+1}`.
    pub fn from_hat_pages(k: i64, hat: &[BigradedTable]) -> Self {
        let pages = (0..)
            .map(|r: usize| 2 * k as usize * r)
            .take_while(|&j| j < hat.len())
            .map(|j| hat[j].clone())
            .collect();
        Self::new(k, pages)
    }

    pub fn pages(&self) -> &[BigradedTable] {
        &self.pages
    }

    pub fn len(&self) -> usize {
        self.pages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pages.is_empty()
    }

    /// `Ẽ^(r)`; pages past the end repeat the last one.
    pub fn page(&self, r: u32) -> &BigradedTable {
        assert!(r >= 1);
        &self.pages[(r as usize - 1).min(self.pages.len() - 1)]
    }

    /// `⌊ht/k⌋` of the first page, an upper bound for the torsion width.
    pub fn tau(&self) -> u32 {
        match self.pages.first().and_then(thickness) {
            Some(t) => (t.ht / Rational64::from_integer(self.k)).floor().to_integer().to_u32().unwrap_or(0),
            None => 0,
        }
    }
}

/// Closed form of `Ẽ^(r)` for a decomposition.
pub fn tilde_page(d: &Decomposition, r: u32) -> BigradedTable {
    let mut t = d.free_table();
    for p in d.torsion().iter().filter(|p| p.m >= r) {
        t.add((p.i, p.s), 1);
        t.add((p.i - 1, p.s + 2 * d.k * p.m as i64), 1);
    }
    t
}

/// `Ẽ^(1) ..= Ẽ^(n)`.
pub fn tilde_pages(d: &Decomposition, n: u32) -> PageSequence {
    PageSequence::new(d.k, (1..=n).map(|r| tilde_page(d, r)).collect())
}

/// Order in which residual classes are paired. Both give the same answer on
/// consistent input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingOrder {
    /// Highest degree first: every class there is the bottom of a pair.
    TopDown,
    /// Lowest degree first: every class there is the top of a pair.
    BottomUp,
}

pub fn recover(ps: &PageSequence) -> Result<Decomposition, RecoveryError> {
    recover_with(ps, PairingOrder::TopDown)
}

pub fn recover_with(ps: &PageSequence, order: PairingOrder) -> Result<Decomposition, RecoveryError> {
    if ps.k < 1 {
        return Err(RecoveryError::InvalidK(ps.k));
    }
    if ps.is_empty() {
        return Err(RecoveryError::Empty);
    }
    let k = ps.k;
    for (j, w) in ps.pages.windows(2).enumerate() {
        if !w[1].is_dominated_by(&w[0]) {
            return Err(inconsistent(format!("page {} is not contained in page {}", j + 2, j + 1)));
        }
    }
    let tau = ps.tau();
    let free: Vec<FreePiece> = ps
        .page(tau + 1)
        .iter()
        .flat_map(|((i, s), n)| std::iter::repeat_n(FreePiece { i, s }, n))
        .collect();
    let mut torsion: Vec<TorsionPiece> = Vec::new();
    for r in (1..=tau).rev() {
        let mut residual = ps.page(r).clone();
        for p in &free {
            residual
                .subtract((p.i, p.s), 1)
                .ok_or_else(|| inconsistent(format!("page {r} lacks the free class at ({}, {})", p.i, p.s)))?;
        }
        for t in &torsion {
            for pos in [(t.i, t.s), (t.i - 1, t.s + 2 * k * t.m as i64)] {
                residual
                    .subtract(pos, 1)
                    .ok_or_else(|| inconsistent(format!("page {r} lacks the torsion class at {pos:?}")))?;
            }
        }
        torsion.extend(pair(residual, k, r, order)?);
    }
    let d = Decomposition::new(k, free, torsion);
    for r in 1..=(ps.len() as u32).max(tau + 1) {
        if &tilde_page(&d, r) != ps.page(r) {
            return Err(inconsistent(format!("page {r} is not reproduced by the recovered pieces")));
        }
    }
    Ok(d)
}

fn pair(mut residual: BigradedTable, k: i64, r: u32, order: PairingOrder) -> Result<Vec<TorsionPiece>, RecoveryError> {
    let gap = 2 * k * r as i64;
    let mut out = Vec::new();
    while !residual.is_empty() {
        let degrees = residual.first_index_totals();
        let i = match order {
            PairingOrder::TopDown => *degrees.keys().next_back().unwrap(),
            PairingOrder::BottomUp => *degrees.keys().next().unwrap(),
        };
        let here: Vec<((i64, i64), usize)> = residual.iter().filter(|((j, _), _)| *j == i).collect();
        for ((_, s), n) in here {
            residual.subtract((i, s), n).unwrap();
            let (piece, partner) = match order {
                PairingOrder::TopDown => (TorsionPiece { i, m: r, s }, (i - 1, s + gap)),
                PairingOrder::BottomUp => (TorsionPiece { i: i + 1, m: r, s: s - gap }, (i + 1, s - gap)),
            };
            residual
                .subtract(partner, n)
                .ok_or_else(|| inconsistent(format!("class at ({i}, {s}) on page {r} has no partner at {partner:?}")))?;
            out.extend(std::iter::repeat_n(piece, n));
        }
    }
    Ok(out)
}

/// Regenerates `Ẽ^(1) ..= Ẽ^(max(tw, τ)+1)` from `d` and recovers it.
pub fn roundtrip(d: &Decomposition) -> Result<Decomposition, RecoveryError> {
    let first = tilde_pages(d, 1);
    let n = d.torsion_width().max(first.tau()) + 1;
    recover(&tilde_pages(d, n))
}
