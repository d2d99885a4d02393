//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails. Run with `--nocapture` to see the lines.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::khovanov::{khovanov_table, PdCrossing};
use eqkr::algebra::{q, q_frac, BigradedTable, GradedModuleDescriptor, IndexConvention, Q};
use eqkr::complex::homology_field;
use eqkr::corpus::{corpus, rng_for, scramble, CorpusItem, CorpusParams};
use eqkr::couple::{correspondence_check, couple_from_complex, couple_page_range, default_window, Correspondence};
use eqkr::decomposition::{decompose, thickness, Decomposition};
use eqkr::frontend::delta::{default_lambdas, scaling_holds};
use eqkr::frontend::twobraid::{c2, reduce_unreduced};
use eqkr::frontend::{
    build_sl2_cube, build_twobraid, build_twobraid_unreduced, delta_battery, LinkDiagram, Sl2Potential, TwoBraidSpec,
};
use eqkr::recovery::{recover, recover_with, tilde_pages, PageSequence, PairingOrder, RecoveryError};
use eqkr::spectral::{assembled_pages, generic_collapse_page, generic_pages, summed_piece_pages};
use rayon::prelude::*;

const CORPUS_SEED: u64 = 2024;
const CORPUS_SIZE: usize = 200;
const SCRAMBLE_SEED: u64 = 7;
const SCRAMBLE_STEPS: usize = 60;

struct Outcome {
    id: u32,
    name: &'static str,
    budget: Duration,
    failures: Vec<String>,
    detail: String,
    elapsed: Duration,
}

fn run(id: u32, name: &'static str, budget_s: u64, f: impl FnOnce(&mut Vec<String>) -> String) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let detail = f(&mut failures);
    Outcome { id, name, budget: Duration::from_secs(budget_s), failures, detail, elapsed: start.elapsed() }
}

// Closed-form 2-braid homology, written out per homological degree.
fn twobraid_table(n: i64, i: i64) -> BTreeMap<i64, GradedModuleDescriptor> {
    let h0 = (0..n).map(|j| -4 * n + 4 + 2 * j).collect();
    let h2 = (0..=i - 2).map(|j| 2 * (-n - i + j + 1)).collect();
    let h3_free = (0..=i - 2).map(|j| -6 * n + 2 * j + 2).collect();
    let h3_tors = (i - 1..=n - 2).map(|j| (1, -6 * n + 2 * j + 2)).collect();
    let h4 = (0..=n - 2).flat_map(|l| (0..n).map(move |j| -4 * n - 4 - 2 * l + 2 * j)).collect();
    [
        (0, GradedModuleDescriptor::new(h0, vec![])),
        (2, GradedModuleDescriptor::new(h2, vec![])),
        (3, GradedModuleDescriptor::new(h3_free, h3_tors)),
        (4, GradedModuleDescriptor::new(h4, vec![])),
    ]
    .into_iter()
    .filter(|(_, m)| !m.is_zero())
    .collect()
}

fn criterion_1(fail: &mut Vec<String>) -> String {
    let mut cases = 0;
    for n in 2..=5u32 {
        for i in 1..n {
            let got = decompose(&build_twobraid(&TwoBraidSpec::p_i(n, i).unwrap())).unwrap().homology_structure();
            let want = twobraid_table(n as i64, i as i64);
            if got != want {
                fail.push(format!("N={n} i={i}: got {got:?}, want {want:?}"));
            }
            cases += 1;
        }
    }
    format!("{cases} (N, i) tables")
}

fn last_page(d: &Decomposition) -> u32 {
    2 * d.k as u32 * d.torsion_width() + 2
}

fn criterion_2_and_5(items: &[CorpusItem], fail2: &mut Vec<String>, fail5: &mut Vec<String>) -> (String, String) {
    let results: Vec<(Vec<String>, Vec<String>, usize, Option<bool>)> = items
        .par_iter()
        .map(|item| {
            let d = &item.decomposition;
            let hat = item.complex.specialize_a_to_1();
            let mut f2 = Vec::new();
            let mut f5 = Vec::new();
            let pages: Vec<_> = (1..=last_page(d) + 2).map(|r| generic_pages(&hat, r)).collect();
            for r in 1..=last_page(d) {
                let g = &pages[r as usize - 1];
                if g != &assembled_pages(d, true, r) || g != &summed_piece_pages(d, true, r) {
                    f2.push(format!("item {} r={r}", item.index));
                }
            }
            let expected = 2 * d.k as u32 * d.torsion_width() + 1;
            let mut literal = None;
            if d.torsion_width() >= 1 {
                if generic_collapse_page(&hat) != expected {
                    f5.push(format!("item {}: exact collapse {} != {expected}", item.index, generic_collapse_page(&hat)));
                }
                let first_triple = (0..pages.len() - 2).find(|&j| pages[j].same_entries(&pages[j + 1]) && pages[j + 1].same_entries(&pages[j + 2]));
                literal = Some(first_triple.map(|j| j as u32 + 1) == Some(expected));
            }
            (f2, f5, last_page(d) as usize, literal)
        })
        .collect();
    let mut pages = 0;
    let (mut with_torsion, mut literal_hits) = (0, 0);
    for (f2, f5, p, lit) in results {
        fail2.extend(f2);
        fail5.extend(f5);
        pages += p;
        if let Some(hit) = lit {
            with_torsion += 1;
            literal_hits += hit as usize;
        }
    }
    (
        format!("{} complexes, {pages} pages compared", items.len()),
        format!(
            "{with_torsion} complexes with tw >= 1; first triple-equal page matches 2k*tw+1 on {literal_hits}/{with_torsion} (informational)"
        ),
    )
}

fn criterion_3(items: &[CorpusItem], fail: &mut Vec<String>) -> String {
    let bad: Vec<String> = items
        .par_iter()
        .filter_map(|item| {
            let d = &item.decomposition;
            match correspondence_check(d, d.torsion_width() + 2) {
                Correspondence::Pass => None,
                other => Some(format!("item {}: {other:?}", item.index)),
            }
        })
        .collect();
    fail.extend(bad);
    format!("{} complexes, r = 1..tw+2", items.len())
}

fn hp(entries: &[(i64, i64, usize)]) -> BigradedTable {
    BigradedTable::from_entries(IndexConvention::HomPoly, entries.iter().map(|&(i, s, d)| ((i, s), d)))
}

// Each entry is (k, pages, what is wrong with it).
fn corrupted_sequences() -> Vec<(i64, Vec<BigradedTable>, &'static str)> {
    vec![
        (1, vec![hp(&[(0, 0, 1)]), hp(&[(0, 0, 2)])], "page grows"),
        (1, vec![hp(&[(0, 0, 1)]), hp(&[])], "lone class dies"),
        (1, vec![hp(&[(1, 0, 1), (0, 6, 1)]), hp(&[(1, 0, 1), (0, 6, 1)]), hp(&[])], "m=2 pair at offset 6"),
        (1, vec![hp(&[(1, 0, 1), (0, 2, 1)]), hp(&[(1, 0, 1)])], "half a pair survives"),
        (1, vec![hp(&[(1, 0, 1), (0, 2, 2)]), hp(&[])], "extra bottom class"),
        (1, vec![hp(&[(1, 0, 1), (0, 2, 1)]), hp(&[(2, 0, 1)])], "new class on page 2"),
        (2, vec![hp(&[(1, 0, 1), (0, 2, 1)]), hp(&[])], "offset 2 with k=2"),
        (1, vec![hp(&[(0, 0, 1), (1, 0, 1)]), hp(&[])], "pair in the wrong direction"),
        (1, vec![hp(&[(1, 0, 1), (0, 4, 1)]), hp(&[]), hp(&[])], "m=1 pair at offset 4"),
        (1, vec![hp(&[(1, 0, 1), (0, 2, 1)]), hp(&[(1, 0, 1), (0, 2, 1)]), hp(&[])], "m=2 pair at offset 2"),
        (
            1,
            vec![hp(&[(1, 0, 1), (0, 2, 1), (1, 4, 1), (0, 6, 1)]), hp(&[(1, 0, 1), (0, 6, 1)]), hp(&[])],
            "pairs swapped between pages",
        ),
        (1, vec![hp(&[(0, 0, 1), (-1, 2, 1)]), hp(&[(0, 0, 1), (-1, 2, 1)]), hp(&[(0, 0, 1)])], "class dies late"),
        (3, vec![hp(&[(1, 0, 1), (0, 6, 1)]), hp(&[(1, 0, 1), (0, 6, 1)]), hp(&[])], "m=1 pair survives page 2"),
        (1, vec![hp(&[(0, 0, 1), (5, 5, 1)]), hp(&[(0, 0, 1)]), hp(&[(0, 0, 1), (5, 5, 1)])], "class reappears"),
        (1, vec![hp(&[(1, 0, 2), (0, 2, 1)]), hp(&[])], "extra top class"),
        (2, vec![hp(&[(1, 0, 1), (0, 4, 1)]), hp(&[(0, 4, 1)])], "top half survives"),
        (1, vec![hp(&[(0, 0, 2)]), hp(&[(0, 0, 1)])], "one of two free classes dies"),
        (2, vec![hp(&[(3, 0, 1), (2, 4, 1)]), hp(&[(3, 0, 1), (2, 4, 1)]), hp(&[])], "m=2 pair at offset 4 with k=2"),
        (1, vec![hp(&[(2, 0, 1), (1, 2, 1), (0, 4, 1)]), hp(&[])], "odd chain of classes"),
        (2, vec![hp(&[(4, -8, 1)]), hp(&[])], "lone class dies with k=2"),
    ]
}

fn criterion_4(items: &[CorpusItem], fail: &mut Vec<String>) -> String {
    let bad: Vec<String> = items
        .par_iter()
        .filter_map(|item| {
            let d = &item.decomposition;
            let r_max = d.torsion_width() + 1;
            let computed = couple_page_range(&couple_from_complex(&item.complex, default_window(d, r_max)), r_max)
                .map_err(|e| format!("item {}: couple error {e}", item.index))
                .ok()?;
            let computed = PageSequence::new(d.k, computed);
            let closed = tilde_pages(d, d.torsion_width() + 2);
            for (label, ps) in [("computed", &computed), ("closed form", &closed)] {
                for order in [PairingOrder::TopDown, PairingOrder::BottomUp] {
                    match recover_with(ps, order) {
                        Ok(r) if &r == d => {}
                        other => return Some(format!("item {} ({label}, {order:?}): {other:?}", item.index)),
                    }
                }
            }
            None
        })
        .collect();
    fail.extend(bad);
    let corrupted = corrupted_sequences();
    let mut rejected = 0;
    for (k, pages, what) in &corrupted {
        match recover(&PageSequence::new(*k, pages.clone())) {
            Err(RecoveryError::InconsistentPages(_)) => rejected += 1,
            other => fail.push(format!("corrupted sequence '{what}' gave {other:?}")),
        }
    }
    format!("{} round trips, {rejected}/{} corrupted sequences rejected", items.len(), corrupted.len())
}

fn criterion_6(items: &[CorpusItem], fail: &mut Vec<String>) -> String {
    let bad: Vec<String> = items
        .par_iter()
        .filter_map(|item| {
            let mut c = item.complex.clone();
            scramble(&mut c, &mut rng_for(SCRAMBLE_SEED, item.index), SCRAMBLE_STEPS);
            let before = decompose(&item.complex).ok()?;
            match decompose(&c) {
                Ok(after) if after == before && after == item.decomposition => None,
                other => Some(format!("item {}: {other:?}", item.index)),
            }
        })
        .collect();
    fail.extend(bad);
    format!("{} conjugated complexes", items.len())
}

fn criterion_7(fail: &mut Vec<String>) -> String {
    let lambdas = default_lambdas();
    let mut checks = 0;
    for n in 2..=5u32 {
        let r = delta_battery(n);
        if !r.support_ok {
            fail.push(format!("N={n}: support {:?}", r.nonzero_degrees));
        }
        if !r.anticommute {
            fail.push(format!("N={n}: anticommutation"));
        }
        for i in 1..=n {
            for l in &lambdas {
                if !scaling_holds(n, i, l) {
                    fail.push(format!("N={n} i={i} lambda={l}: d1 != lambda * delta"));
                }
                checks += 1;
            }
        }
    }
    format!("N = 2..5, {checks} scaling identities")
}

fn criterion_8(fail: &mut Vec<String>) -> String {
    let variants: [(u32, i64, &[(u32, Q)]); 6] = [
        (4, 2, &[(2, q(1))]),
        (3, 1, &[(2, q(1))]),
        (5, 2, &[(2, q(1))]),
        (3, 1, &[(3, q(1))]),
        (5, 1, &[(2, q(1)), (3, q_frac(-1, 2))]),
        (6, 1, &[(3, q(2)), (4, q(-3))]),
    ];
    let mut torsion = 0;
    for (n, k, lambdas) in variants {
        let spec = TwoBraidSpec::new(n, k, lambdas.iter().cloned().collect()).unwrap();
        let d = decompose(&build_twobraid(&spec)).unwrap();
        torsion += d.torsion().len();
        if let Some(t) = d.torsion().iter().find(|t| t.m < 2) {
            fail.push(format!("N={n} k={k} {lambdas:?}: {t:?}"));
        }
    }
    if torsion == 0 {
        fail.push("no torsion at all; the check is vacuous".into());
    }
    format!("{} potentials, {torsion} torsion pieces", variants.len())
}

fn criterion_9(fail: &mut Vec<String>) -> String {
    let mut cases = 0;
    for n in 2..=6u32 {
        for i in 1..n {
            let spec = TwoBraidSpec::p_i(n, i).unwrap();
            let reduced = reduce_unreduced(&build_twobraid_unreduced(&spec), n);
            let (a, b) = (decompose(&reduced).unwrap(), decompose(&c2(&spec)).unwrap());
            if a != b {
                fail.push(format!("N={n} i={i}: {a} vs {b}"));
            }
            cases += 1;
        }
    }
    format!("{cases} (N, i) cases")
}

fn oracle_pd(d: &LinkDiagram) -> Vec<PdCrossing> {
    d.crossings().iter().map(|c| (c.arcs, c.sign)).collect()
}

// H_N in (i, s); the oracle's q grading is s = -q.
fn oracle_table(d: &LinkDiagram) -> BigradedTable {
    BigradedTable::from_entries(
        IndexConvention::HomPoly,
        khovanov_table(&oracle_pd(d), d.free_loops()).into_iter().map(|((i, qd), n)| ((i, -qd), n)),
    )
}

fn hn(d: &LinkDiagram, p: &Sl2Potential) -> (BigradedTable, Decomposition) {
    let c = build_sl2_cube(d, p);
    (homology_field(&c.reduce_mod_a()).bigraded(), decompose(&c).unwrap())
}

fn criterion_10(fail: &mut Vec<String>) -> String {
    let braid = |w: &str| LinkDiagram::parse_braid(w, None).unwrap();
    let links = [
        ("unknot", LinkDiagram::unknot()),
        ("Hopf", braid("s1 s1")),
        ("trefoil", braid("s1 s1 s1")),
        ("figure-8", braid("s1 -s2 s1 -s2")),
    ];
    let potentials = [Sl2Potential::lee(), Sl2Potential::new(1, q(1), q(-2)).unwrap()];
    let mut paired = 0;
    for (name, d) in &links {
        let oracle = oracle_table(d);
        for p in &potentials {
            let (table, dec) = hn(d, p);
            if table != oracle {
                fail.push(format!("(a) {name} k={}: {table:?} vs oracle {oracle:?}", p.k));
            }
            if table.total_dim() != dec.free().len() + 2 * dec.torsion().len() || table != dec.hn_table() {
                fail.push(format!("(b) {name} k={}: {dec}", p.k));
            }
        }
        let (table, dec) = hn(d, &Sl2Potential::lee());
        let lht = thickness(&table).and_then(|t| t.lht);
        if lht.is_some_and(|l| l <= num_rational::Rational64::from_integer(3)) {
            paired += 1;
            if dec.torsion_width() > 1 {
                fail.push(format!("(c) {name}: tw = {}", dec.torsion_width()));
            }
            for t in dec.torsion() {
                if table.get((t.i, t.s)) == 0 || table.get((t.i - 1, t.s + 4)) == 0 {
                    fail.push(format!("(c) {name}: {t:?} lacks its (-1, +4) partner"));
                }
            }
        }
    }
    let moves = [
        ("R1+", LinkDiagram::unknot(), braid("s1")),
        ("R1-", LinkDiagram::unknot(), braid("-s1")),
        ("R2", LinkDiagram::unlink(2), braid("s1 -s1")),
        ("R3", braid("s1 s2 s1"), braid("s2 s1 s2")),
        ("stabilization", braid("s1 s1 s1"), braid("s1 s1 s1 s2")),
        ("conjugation", braid("s1 -s2 s1 -s2"), braid("-s2 s1 -s2 s1")),
    ];
    for (name, a, b) in &moves {
        let (ta, da) = hn(a, &Sl2Potential::lee());
        let (tb, db) = hn(b, &Sl2Potential::lee());
        if ta != tb || da != db {
            fail.push(format!("(d) {name}: {ta:?} / {da} vs {tb:?} / {db}"));
        }
    }
    format!("{} links x {} potentials, {paired} with lht <= 3, {} move pairs", links.len(), potentials.len(), moves.len())
}

#[test]
fn acceptance() {
    let items = corpus(CORPUS_SEED, CORPUS_SIZE, &CorpusParams::default());
    let mut outcomes = vec![run(1, "2-braid tables", 30, criterion_1)];

    let start = Instant::now();
    let (mut f2, mut f5) = (Vec::new(), Vec::new());
    let (d2, d5) = criterion_2_and_5(&items, &mut f2, &mut f5);
    let elapsed = start.elapsed();
    outcomes.push(Outcome {
        id: 2,
        name: "three-way pages",
        budget: Duration::from_secs(60),
        failures: f2,
        detail: d2,
        elapsed,
    });
    outcomes.push(run(3, "couple correspondence", 60, |f| criterion_3(&items, f)));
    outcomes.push(run(4, "recovery", 30, |f| criterion_4(&items, f)));
    outcomes.push(Outcome {
        id: 5,
        name: "collapse page",
        budget: Duration::from_secs(60),
        failures: f5,
        detail: d5,
        elapsed,
    });
    outcomes.push(run(6, "basis-change invariance", 30, |f| criterion_6(&items, f)));
    outcomes.push(run(7, "delta battery", 30, criterion_7));
    outcomes.push(run(8, "torsion lower bound", 10, criterion_8));
    outcomes.push(run(9, "unreduced elimination", 10, criterion_9));
    outcomes.push(run(10, "sl(2) front end", 120, criterion_10));

    outcomes.sort_by_key(|o| o.id);
    for o in &outcomes {
        let verdict = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        let over = if o.elapsed > o.budget { " over budget" } else { "" };
        println!(
            "criterion {:>2} {verdict}: {}: {} ({:.1} s, budget {} s{over})",
            o.id,
            o.name,
            o.detail,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs()
        );
        for f in o.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.failures.is_empty()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
