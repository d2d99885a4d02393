//! Planar diagram codes and braid words.
//!
//! A crossing `X[i, j, k, l]` lists its four arcs counterclockwise starting
//! from the incoming under-strand, so the under-strand runs `i → k`. The
//! crossing is positive when the over-strand runs `l → j`.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("arc {arc} appears {count} times (each arc must appear exactly twice)")]
    ArcCount { arc: i64, count: usize },
    #[error("crossing {index} is marked {given} but the orientation makes it {actual}")]
    SignMismatch { index: usize, given: i8, actual: i8 },
    #[error("crossing sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("arc {0} is not consistently oriented")]
    Orientation(i64),
    #[error("braid generator {gen} out of range for {strands} strands")]
    BraidIndex { gen: i64, strands: usize },
    #[error("cannot parse braid token {0:?}")]
    BraidToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub arcs: [i64; 4],
    pub sign: i8,
}

/// A link diagram: crossings plus a number of crossingless unknotted circles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
}

impl LinkDiagram {
    pub fn unknot() -> Self {
        LinkDiagram { crossings: vec![], free_loops: 1 }
    }

    pub fn unlink(components: usize) -> Self {
        LinkDiagram { crossings: vec![], free_loops: components }
    }

    /// Crossings with given signs; signs are checked against the orientation
    /// the labels induce wherever it is determined.
    pub fn from_pd(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self, PdError> {
        if let Some(c) = crossings.iter().find(|c| c.sign != 1 && c.sign != -1) {
            return Err(PdError::BadSign(c.sign));
        }
        let inferred = infer_signs(&crossings.iter().map(|c| c.arcs).collect::<Vec<_>>())?;
        for (index, (c, s)) in crossings.iter().zip(&inferred).enumerate() {
            if let Some(s) = s {
                if *s != c.sign {
                    return Err(PdError::SignMismatch { index, given: c.sign, actual: *s });
                }
            }
        }
        Ok(LinkDiagram { crossings, free_loops })
    }

    /// Crossings without signs; every crossing must have a determined orientation.
    pub fn from_unsigned_pd(arcs: Vec<[i64; 4]>) -> Result<Self, PdError> {
        let inferred = infer_signs(&arcs)?;
        let crossings = arcs
            .iter()
            .zip(inferred)
            .map(|(&a, s)| s.map(|sign| Crossing { arcs: a, sign }).ok_or(PdError::Orientation(a[1])))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinkDiagram { crossings, free_loops: 0 })
    }

    /// Closure of a braid on `strands` strands; generator `g > 0` is `σ_g`,
    /// `g < 0` its inverse.
    pub fn from_braid(strands: usize, word: &[i64]) -> Result<Self, PdError> {
        if let Some(&gen) = word.iter().find(|&&g| g == 0 || g.unsigned_abs() as usize >= strands) {
            return Err(PdError::BraidIndex { gen, strands });
        }
        let mut next = 0i64;
        let mut fresh = || {
            next += 1;
            next
        };
        let start: Vec<i64> = (0..strands).map(|_| fresh()).collect();
        let mut current = start.clone();
        let mut crossings = Vec::new();
        for &g in word {
            let p = g.unsigned_abs() as usize - 1;
            let (a, b) = (current[p], current[p + 1]);
            let (c, d) = (fresh(), fresh());
            let arcs = if g > 0 { [b, d, c, a] } else { [a, b, d, c] };
            crossings.push(Crossing { arcs, sign: if g > 0 { 1 } else { -1 } });
            current[p] = c;
            current[p + 1] = d;
        }
        // Close up: the last label on each strand is identified with its first.
        let mut rename = BTreeMap::new();
        let mut free_loops = 0;
        for (s, &e) in start.iter().zip(&current) {
            if s == &e {
                free_loops += 1;
            } else {
                rename.insert(e, *s);
            }
        }
        for c in &mut crossings {
            for a in &mut c.arcs {
                if let Some(&r) = rename.get(a) {
                    *a = r;
                }
            }
        }
        Self::from_pd(crossings, free_loops)
    }

    /// Parses words like `"s1 s1 -s2"`; the strand count is one more than the
    /// largest generator unless given.
    pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<Self, PdError> {
        let word = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                let (neg, rest) = t.strip_prefix('-').map_or((false, t), |r| (true, r));
                let rest = rest.strip_prefix('s').or_else(|| rest.strip_prefix('σ')).unwrap_or(rest);
                rest.parse::<i64>()
                    .ok()
                    .filter(|&g| g > 0)
                    .map(|g| if neg { -g } else { g })
                    .ok_or_else(|| PdError::BraidToken(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let strands = strands.unwrap_or_else(|| word.iter().map(|g| g.unsigned_abs() as usize + 1).max().unwrap_or(1));
        Self::from_braid(strands, &word)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign < 0).count()
    }
}

/// Orientation of every arc reachable from an under-strand, and from it the
/// sign of every crossing whose over-strand is oriented.
fn infer_signs(arcs: &[[i64; 4]]) -> Result<Vec<Option<i8>>, PdError> {
    let mut seen: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, x) in arcs.iter().enumerate() {
        for (p, &a) in x.iter().enumerate() {
            seen.entry(a).or_default().push((c, p));
        }
    }
    if let Some((&arc, v)) = seen.iter().find(|(_, v)| v.len() != 2) {
        return Err(PdError::ArcCount { arc, count: v.len() });
    }
    // head[arc] = (crossing, position) where the arc ends.
    let mut head: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    let other_end = |arc: i64, here: (usize, usize)| -> (usize, usize) {
        let v = &seen[&arc];
        if v[0] == here {
            v[1]
        } else {
            v[0]
        }
    };
    for (c, x) in arcs.iter().enumerate() {
        if head.contains_key(&x[2]) {
            continue;
        }
        // Walk forward from the outgoing under-arc of crossing c.
        let mut at = (c, 2);
        loop {
            let arc = arcs[at.0][at.1];
            let end = other_end(arc, at);
            if let Some(prev) = head.insert(arc, end) {
                if prev != end {
                    return Err(PdError::Orientation(arc));
                }
                break;
            }
            let out = match end.1 {
                0 => 2,
                1 => 3,
                3 => 1,
                _ => return Err(PdError::Orientation(arc)),
            };
            at = (end.0, out);
            if head.contains_key(&arcs[at.0][at.1]) {
                break;
            }
        }
    }
    Ok(arcs
        .iter()
        .enumerate()
        .map(|(c, x)| match (head.get(&x[1]), head.get(&x[3])) {
            (Some(&h), _) if h == (c, 1) => Some(-1),
            (_, Some(&h)) if h == (c, 3) => Some(1),
            (Some(_), _) => Some(1),
            (_, Some(_)) => Some(-1),
            _ => None,
        })
        .collect())
}
