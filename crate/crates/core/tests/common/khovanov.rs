//! Brute-force Khovanov homology over F_p with the algebra F_p[x]/(x²), used
//! as an oracle for the mod-a reduction of the N = 2 cube. Written without
//! the library's linear algebra or resolution code.

use std::collections::{BTreeMap, HashMap};

const P: u64 = 1_000_003;

/// One crossing `[i, j, k, l]` and its sign.
pub type PdCrossing = ([i64; 4], i8);

fn circles(pd: &[PdCrossing], state: u32, free_loops: usize) -> (usize, HashMap<i64, usize>) {
    // Arc adjacency through the chosen smoothings, then depth-first search.
    let mut adj: HashMap<i64, Vec<i64>> = HashMap::new();
    for (n, (x, _)) in pd.iter().enumerate() {
        let pairs = if state >> n & 1 == 0 { [(x[0], x[1]), (x[2], x[3])] } else { [(x[0], x[3]), (x[1], x[2])] };
        for (a, b) in pairs {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let mut keys: Vec<i64> = adj.keys().copied().collect();
    keys.sort_unstable();
    let mut comp: HashMap<i64, usize> = HashMap::new();
    let mut count = 0;
    for start in keys {
        if comp.contains_key(&start) {
            continue;
        }
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            if comp.insert(a, count).is_some() {
                continue;
            }
            stack.extend(adj[&a].iter().copied().filter(|b| !comp.contains_key(b)));
        }
        count += 1;
    }
    (count + free_loops, comp)
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = pow(rows[rank][c], P - 2);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % P;
                for j in c..cols {
                    rows[r][j] = (rows[r][j] + P * P - f * rows[rank][j]) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

/// Dimensions of Khovanov homology at `(homological degree, q)`, with `v+` at
/// `q = +1` and the usual `[-n₋]{n₊ - 2n₋}` normalization.
pub fn khovanov_table(pd: &[PdCrossing], free_loops: usize) -> BTreeMap<(i64, i64), usize> {
    let n = pd.len();
    let n_plus = pd.iter().filter(|c| c.1 > 0).count() as i64;
    let n_minus = n as i64 - n_plus;
    let res: Vec<(usize, HashMap<i64, usize>)> = (0..1u32 << n).map(|s| circles(pd, s, free_loops)).collect();
    // Enhanced states: (state, labels), bit set means v-.
    let mut index: HashMap<(u32, u32), (i64, i64, usize)> = HashMap::new();
    let mut sizes: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for s in 0..1u32 << n {
        let c = res[s as usize].0 as u32;
        for lab in 0..1u32 << c {
            let minus = lab.count_ones() as i64;
            let q = (c as i64 - 2 * minus) + s.count_ones() as i64 + n_plus - 2 * n_minus;
            let i = s.count_ones() as i64 - n_minus;
            let slot = sizes.entry((i, q)).or_insert(0);
            index.insert((s, lab), (i, q, *slot));
            *slot += 1;
        }
    }
    let mut mats: BTreeMap<(i64, i64), Vec<Vec<u64>>> = BTreeMap::new();
    for (&(i, q), &size) in &sizes {
        let rows = sizes.get(&(i + 1, q)).copied().unwrap_or(0);
        mats.insert((i, q), vec![vec![0; size]; rows]);
    }
    for s in 0..1u32 << n {
        let (c, comp) = &res[s as usize];
        let crossing_circles = c - free_loops;
        for (p, (x, _)) in pd.iter().enumerate() {
            if s >> p & 1 == 1 {
                continue;
            }
            let t = s | 1 << p;
            let (tc, tcomp) = &res[t as usize];
            let t_crossing_circles = tc - free_loops;
            let sign_neg = (s & ((1 << p) - 1)).count_ones() % 2 == 1;
            let (a, b) = (comp[&x[0]], comp[&x[2]]);
            for lab in 0..1u32 << c {
                let mut base = 0u32;
                for (arc, &ci) in comp {
                    if ci != a && ci != b && lab >> ci & 1 == 1 {
                        base |= 1 << tcomp[arc];
                    }
                }
                for f in 0..free_loops {
                    if lab >> (crossing_circles + f) & 1 == 1 {
                        base |= 1 << (t_crossing_circles + f);
                    }
                }
                let minus = |ci: usize| lab >> ci & 1 == 1;
                let images: Vec<u32> = if a != b {
                    let m = tcomp[&x[0]];
                    match (minus(a), minus(b)) {
                        (false, false) => vec![base],
                        (true, true) => vec![],
                        _ => vec![base | 1 << m],
                    }
                } else {
                    let (c1, c2) = (tcomp[&x[0]], tcomp[&x[1]]);
                    if minus(a) {
                        vec![base | 1 << c1 | 1 << c2]
                    } else {
                        vec![base | 1 << c1, base | 1 << c2]
                    }
                };
                let (i, q, col) = index[&(s, lab)];
                for img in images {
                    let (_, _, row) = index[&(t, img)];
                    let m = mats.get_mut(&(i, q)).unwrap();
                    m[row][col] = (m[row][col] + if sign_neg { P - 1 } else { 1 }) % P;
                }
            }
        }
    }
    let ranks: BTreeMap<(i64, i64), usize> = mats.into_iter().map(|(k, m)| (k, rank_mod_p(m))).collect();
    let mut out = BTreeMap::new();
    for (&(i, q), &size) in &sizes {
        let out_rank = ranks.get(&(i, q)).copied().unwrap_or(0);
        let in_rank = ranks.get(&(i - 1, q)).copied().unwrap_or(0);
        let dim = size - out_rank - in_rank;
        if dim > 0 {
            out.insert((i, q), dim);
        }
    }
    out
}

#[allow(dead_code)]
pub fn trefoil_pd() -> Vec<PdCrossing> {
    vec![([1, 4, 2, 5], -1), ([3, 6, 4, 1], -1), ([5, 2, 6, 3], -1)]
}
