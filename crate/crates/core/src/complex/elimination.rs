use num_traits::Zero;

use super::ChainData;

/// Cancels the invertible entry `φ = d^i[row, col]`. The remaining part of `d^i`
/// becomes `ε - γ φ⁻¹ δ`, where `δ` is the rest of the pivot row and `γ` the rest
/// of the pivot column; `d^{i-1}` loses the row of the cancelled source generator
/// and `d^{i+1}` loses the column of the cancelled target generator.
pub(crate) fn eliminate(chain: &ChainData, i: i64, row: usize, col: usize) -> ChainData {
    let mut out = chain.clone();
    let mut d = chain.differential(i);
    let pivot = d.get(row, col).clone();
    assert!(!pivot.is_zero());
    for r in 0..d.rows() {
        if r != row && !d.get(r, col).is_zero() {
            let f = -(d.get(r, col) / &pivot);
            d.add_row_multiple(r, row, &f);
        }
    }
    if d.rows() > 0 && d.cols() > 0 {
        out.set_differential(i, d);
    }
    out.remove_generator(i, col);
    out.remove_generator(i + 1, row);
    out
}
