use std::collections::BTreeMap;

use num_traits::Zero;

use super::{FieldComplex, LabelKind};
use crate::algebra::{complement_columns, BigradedTable, IndexConvention, Matrix, Q};

/// Homology of one block: generators of a single degree (and, for graded
/// complexes, a single label). Representatives are columns over the block's
/// generators, chosen by echelon pivoting in generator order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyBlock {
    pub degree: i64,
    pub label: Option<i64>,
    pub generators: Vec<usize>,
    boundaries: Matrix,
    reps: Matrix,
}

impl HomologyBlock {
    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    /// Representative cycles as vectors over all generators of `C^degree`.
    pub fn representatives(&self, rank: usize) -> Vec<Vec<Q>> {
        (0..self.reps.cols())
            .map(|j| {
                let mut v = vec![Q::zero(); rank];
                for (row, &g) in self.generators.iter().enumerate() {
                    v[g] = self.reps.get(row, j).clone();
                }
                v
            })
            .collect()
    }

    /// Coordinates of the class of a cycle supported on this block.
    fn coordinates(&self, z: &[Q]) -> Option<Vec<Q>> {
        let local: Vec<Q> = self.generators.iter().map(|&g| z[g].clone()).collect();
        let sys = self.boundaries.hstack(&self.reps);
        let sol = sys.solve(&local)?;
        Some(sol[self.boundaries.cols()..].to_vec())
    }
}

/// Homology of a [`FieldComplex`] with chosen representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldHomology {
    kind: LabelKind,
    ranks: BTreeMap<i64, usize>,
    blocks: Vec<HomologyBlock>,
}

/// A basis class of [`FieldHomology`]: degree, label (if graded) and index inside
/// its block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId {
    pub degree: i64,
    pub label: Option<i64>,
    pub index: usize,
}

pub fn homology_field(c: &FieldComplex) -> FieldHomology {
    let mut blocks = Vec::new();
    let mut ranks = BTreeMap::new();
    for n in c.support() {
        ranks.insert(n, c.rank(n));
        let d_out = c.differential(n);
        let d_in = c.differential(n - 1);
        let groups: Vec<(Option<i64>, Vec<usize>)> = match c.kind() {
            LabelKind::Filtration => vec![(None, (0..c.rank(n)).collect())],
            LabelKind::PolyDegree => {
                let mut by_label: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
                for (g, &s) in c.labels(n).iter().enumerate() {
                    by_label.entry(s).or_default().push(g);
                }
                by_label.into_iter().map(|(s, g)| (Some(s), g)).collect()
            }
        };
        for (label, gens) in groups {
            let (out_rows, in_cols) = match label {
                None => ((0..c.rank(n + 1)).collect::<Vec<_>>(), (0..c.rank(n - 1)).collect::<Vec<_>>()),
                Some(s) => (
                    indices_with_label(c.labels(n + 1), s),
                    indices_with_label(c.labels(n - 1), s),
                ),
            };
            let local_out = d_out.select_rows(&out_rows).select_cols(&gens);
            let cycles = local_out.kernel();
            let boundaries = d_in.select_rows(&gens).select_cols(&in_cols).image();
            let chosen = complement_columns(&boundaries, &cycles);
            let reps = cycles.select_cols(&chosen);
            if reps.cols() > 0 {
                blocks.push(HomologyBlock { degree: n, label, generators: gens, boundaries, reps });
            }
        }
    }
    FieldHomology { kind: c.kind(), ranks, blocks }
}

fn indices_with_label(labels: &[i64], s: i64) -> Vec<usize> {
    labels.iter().enumerate().filter(|(_, &t)| t == s).map(|(g, _)| g).collect()
}

impl FieldHomology {
    pub fn blocks(&self) -> &[HomologyBlock] {
        &self.blocks
    }

    /// Total dimension per homological degree.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for b in &self.blocks {
            *out.entry(b.degree).or_insert(0) += b.dim();
        }
        out
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(HomologyBlock::dim).sum()
    }

    /// Dimensions per `(degree, label)`; only meaningful for graded complexes.
    pub fn bigraded(&self) -> BigradedTable {
        assert_eq!(self.kind, LabelKind::PolyDegree);
        BigradedTable::from_entries(
            IndexConvention::HomPoly,
            self.blocks.iter().map(|b| ((b.degree, b.label.unwrap()), b.dim())),
        )
    }

    /// All basis classes in a fixed order: by degree, then label, then index.
    pub fn classes(&self) -> Vec<ClassId> {
        self.blocks
            .iter()
            .flat_map(|b| (0..b.dim()).map(move |index| ClassId { degree: b.degree, label: b.label, index }))
            .collect()
    }

    pub fn representative(&self, class: ClassId) -> Vec<Q> {
        let b = self.block(class.degree, class.label).expect("unknown class");
        b.representatives(self.ranks[&class.degree]).swap_remove(class.index)
    }

    fn block(&self, degree: i64, label: Option<i64>) -> Option<&HomologyBlock> {
        self.blocks.iter().find(|b| b.degree == degree && b.label == label)
    }

    /// Coordinates of the class of the cycle `z ∈ C^degree` in the basis
    /// [`Self::classes`] restricted to `degree`. Parts of `z` in blocks with zero
    /// homology are not inspected. `None` if some block part is not a cycle.
    pub fn coordinates(&self, degree: i64, z: &[Q]) -> Option<Vec<Q>> {
        let rank = self.ranks.get(&degree).copied().unwrap_or(0);
        if z.len() != rank {
            return None;
        }
        let mut out = Vec::new();
        for b in self.blocks.iter().filter(|b| b.degree == degree) {
            out.extend(b.coordinates(z)?);
        }
        Some(out)
    }
}
