use std::fmt::Write as _;

use eqkr::algebra::BigradedTable;
use eqkr::complex::{first_differential, homology_field, GradedComplex};
use eqkr::decomposition::{decompose, thickness, Decomposition};
use eqkr::json::{decomposition_to_json, table_to_json, FORMAT};
use eqkr::spectral::{collapse_page, generic_pages};
use serde_json::{json, Value};

/// Everything the `link` and `twobraid` subcommands print about a complex.
pub struct Report {
    pub decomposition: Decomposition,
    pub hn: BigradedTable,
    pub pages: Vec<BigradedTable>,
    pub d1_rank: usize,
}

impl Report {
    pub fn new(c: &GradedComplex) -> anyhow::Result<Self> {
        let decomposition = decompose(c)?;
        let hn = homology_field(&c.reduce_mod_a()).bigraded();
        let hat = c.specialize_a_to_1();
        let pages = (1..=collapse_page(&decomposition)).map(|r| generic_pages(&hat, r).field().unwrap().clone()).collect();
        let d1_rank = first_differential(c)?.rank();
        Ok(Report { decomposition, hn, pages, d1_rank })
    }

    pub fn to_json(&self, extra: Value) -> Value {
        let d = &self.decomposition;
        let th = thickness(&self.hn);
        let homology: serde_json::Map<String, Value> = d
            .homology_structure()
            .iter()
            .map(|(i, m)| {
                let torsion: Vec<Value> = m.torsions().iter().map(|(m, s)| json!([m, s])).collect();
                (i.to_string(), json!({"free": m.free_shifts(), "torsion": torsion}))
            })
            .collect();
        json!({
            "format": FORMAT,
            "type": "report",
            "input": extra,
            "decomposition": decomposition_to_json(d),
            "homology": homology,
            "hn_table": table_to_json(&self.hn),
            "torsion_width": d.torsion_width(),
            "ht": th.map(|t| t.ht.to_string()),
            "lht": th.and_then(|t| t.lht).map(|l| l.to_string()),
            "collapse_page": collapse_page(d),
            "pages": self.pages.iter().map(table_to_json).collect::<Vec<_>>(),
            "d1_rank": self.d1_rank,
        })
    }

    pub fn to_table(&self) -> String {
        let d = &self.decomposition;
        let mut s = String::new();
        writeln!(s, "decomposition: {d}").unwrap();
        for (i, m) in d.homology_structure() {
            writeln!(s, "  H^{i} = {m}").unwrap();
        }
        writeln!(s, "H_N (i, s): {}", format_table(&self.hn)).unwrap();
        let th = thickness(&self.hn);
        writeln!(
            s,
            "tw = {}  ht = {}  lht = {}  collapse page = {}  rank d1 = {}",
            d.torsion_width(),
            th.map_or("-".into(), |t| t.ht.to_string()),
            th.and_then(|t| t.lht).map_or("-".into(), |l| l.to_string()),
            collapse_page(d),
            self.d1_rank
        )
        .unwrap();
        for (j, p) in self.pages.iter().enumerate() {
            writeln!(s, "E_{} (p, q): {}", j + 1, format_table(p)).unwrap();
        }
        s
    }
}

pub fn format_table(t: &BigradedTable) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter().map(|((a, b), d)| format!("({a},{b})x{d}")).collect::<Vec<_>>().join(" ")
}
