//! Cross-checks on a seeded corpus, one item per worker.

use rayon::prelude::*;

use crate::corpus::{corpus_item, CorpusParams};
use crate::couple::{correspondence_check, Correspondence};
use crate::decomposition::decompose;
use crate::recovery::{recover, tilde_pages};
use crate::spectral::{assembled_pages, collapse_page, generic_collapse_page, generic_pages, summed_piece_pages};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemVerdict {
    pub index: usize,
    /// First failed check, if any.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    pub seed: u64,
    pub items: Vec<ItemVerdict>,
}

impl VerifySummary {
    pub fn passed(&self) -> usize {
        self.items.iter().filter(|v| v.failure.is_none()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.items.len()
    }
}

pub fn verify_item(seed: u64, index: usize, params: &CorpusParams) -> ItemVerdict {
    let item = corpus_item(seed, index, params);
    let d = &item.decomposition;
    let fail = |msg: String| ItemVerdict { index, failure: Some(msg) };
    match decompose(&item.complex) {
        Ok(found) if &found == d => {}
        Ok(found) => return fail(format!("decompose gave {found}, expected {d}")),
        Err(e) => return fail(format!("decompose failed: {e}")),
    }
    let hat = item.complex.specialize_a_to_1();
    for r in 1..=collapse_page(d) + 1 {
        let g = generic_pages(&hat, r);
        if g != assembled_pages(d, true, r) || g != summed_piece_pages(d, true, r) {
            return fail(format!("page {r} disagrees"));
        }
    }
    if d.torsion_width() >= 1 && generic_collapse_page(&hat) != collapse_page(d) {
        return fail("collapse page".into());
    }
    match correspondence_check(d, d.torsion_width() + 2) {
        Correspondence::Pass => {}
        other => return fail(format!("couple correspondence: {other:?}")),
    }
    match recover(&tilde_pages(d, d.torsion_width() + 1)) {
        Ok(back) if &back == d => {}
        Ok(back) => return fail(format!("recovered {back}, expected {d}")),
        Err(e) => return fail(e.to_string()),
    }
    ItemVerdict { index, failure: None }
}

pub fn verify(seed: u64, count: usize, params: &CorpusParams) -> VerifySummary {
    let items = (0..count).into_par_iter().map(|j| verify_item(seed, j, params)).collect();
    VerifySummary { seed, items }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let s = verify(0, 8, &CorpusParams::default());
        assert!(s.all_passed(), "{:?}", s.items);
    }
}
