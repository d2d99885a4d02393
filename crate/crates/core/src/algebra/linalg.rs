use std::fmt;

use num_traits::{One, Zero};

use super::Q;

/// Dense matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Builds a matrix from its rows. All rows must have length `cols`.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<Q>>) -> Self {
        assert_eq!(entries.len(), rows);
        let mut data = Vec::with_capacity(rows * cols);
        for row in entries {
            assert_eq!(row.len(), cols);
            data.extend(row);
        }
        Matrix { rows, cols, data }
    }

    pub fn from_i64_rows(entries: &[&[i64]]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows,
            cols,
            entries.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect(),
        )
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: Q) {
        self.data[r * self.cols + c] = x;
    }

    #[inline]
    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let x = self.get(r, t);
                if x.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let y = other.get(t, c);
                    if !y.is_zero() {
                        *out.get_mut(r, c) += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (x, y) in self.row(r).iter().zip(v) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for c in 0..self.cols {
                m.set(i, c, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Direct sum `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    pub fn remove_row(&mut self, r: usize) {
        assert!(r < self.rows);
        self.data.drain(r * self.cols..(r + 1) * self.cols);
        self.rows -= 1;
    }

    pub fn remove_col(&mut self, c: usize) {
        assert!(c < self.cols);
        let mut data = Vec::with_capacity(self.rows * (self.cols - 1));
        for (idx, x) in self.data.drain(..).enumerate() {
            if idx % self.cols != c {
                data.push(x);
            }
        }
        self.data = data;
        self.cols -= 1;
    }

    /// `row[target] += factor * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Q) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let x = self.get(source, c).clone();
            if !x.is_zero() {
                *self.get_mut(target, c) += x * factor;
            }
        }
    }

    /// `col[target] += factor * col[source]`
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &Q) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let x = self.get(r, source).clone();
            if !x.is_zero() {
                *self.get_mut(r, target) += x * factor;
            }
        }
    }

    pub fn scale_row(&mut self, r: usize, s: &Q) {
        for c in 0..self.cols {
            let x = self.get(r, c) * s;
            self.set(r, c, x);
        }
    }

    pub fn scale_col(&mut self, c: usize, s: &Q) {
        for r in 0..self.rows {
            let x = self.get(r, c) * s;
            self.set(r, c, x);
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).recip();
            m.scale_row(row, &inv);
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = -m.get(r, col).clone();
                    m.add_row_multiple(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis of the null space, one column per free variable (ascending).
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, Q::one());
            for (i, &p) in pivots.iter().enumerate() {
                k.set(p, j, -r.get(i, f).clone());
            }
        }
        k
    }

    /// Indices of a maximal set of linearly independent columns (greedy, left to right).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Columns spanning the image, chosen among the columns of `self`.
    pub fn image(&self) -> Matrix {
        self.select_cols(&self.independent_columns())
    }

    /// One solution `x` of `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Solves `self * X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        let cols: Option<Vec<Vec<Q>>> = (0..b.cols()).map(|c| self.solve(&b.column(c))).collect();
        cols.map(|cols| Matrix::from_columns(self.cols, &cols))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
            if r + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

/// Splits a subspace quotient `sup / sub` by picking columns of `sup` that extend
/// a basis of `sub`. Returns the chosen column indices of `sup`.
pub fn complement_columns(sub: &Matrix, sup: &Matrix) -> Vec<usize> {
    assert_eq!(sub.rows(), sup.rows());
    let offset = sub.cols();
    sub.hstack(sup)
        .independent_columns()
        .into_iter()
        .filter(|&c| c >= offset)
        .map(|c| c - offset)
        .collect()
}

/// A quotient `cycles / boundaries` of column spans in a common ambient space,
/// with representatives picked from the columns of `cycles`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subquotient {
    boundaries: Matrix,
    reps: Matrix,
}

impl Subquotient {
    /// `boundaries` must lie in the span of `cycles`.
    pub fn new(cycles: &Matrix, boundaries: &Matrix) -> Self {
        let boundaries = boundaries.image();
        let reps = cycles.select_cols(&complement_columns(&boundaries, cycles));
        Subquotient { boundaries, reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn ambient(&self) -> usize {
        self.reps.rows()
    }

    /// Representatives as columns.
    pub fn reps(&self) -> &Matrix {
        &self.reps
    }

    /// Class coordinates of `v`, or `None` if `v` is not in `cycles`.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if self.dim() == 0 {
            return self.boundaries.solve(v).map(|_| Vec::new());
        }
        let sol = self.boundaries.hstack(&self.reps).solve(v)?;
        Some(sol[self.boundaries.cols()..].to_vec())
    }

    /// Coordinates of every column of `m`.
    pub fn coords_matrix(&self, m: &Matrix) -> Option<Matrix> {
        let cols: Option<Vec<Vec<Q>>> = (0..m.cols()).map(|c| self.coords(&m.column(c))).collect();
        cols.map(|cols| Matrix::from_columns(self.dim(), &cols))
    }
}

/// Rank of the span of the columns of all given matrices.
pub fn joint_rank(mats: &[&Matrix], rows: usize) -> usize {
    let mut acc = Matrix::zeros(rows, 0);
    for m in mats {
        assert_eq!(m.rows(), rows);
        acc = acc.hstack(m);
    }
    acc.rank()
}
