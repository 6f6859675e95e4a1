//! Small exact linear-algebra routines over the complex rationals.

use num_traits::Zero;

use crate::exact::ComplexRational;

/// Row-reduce `rows` (homogeneous system over `ncols` unknowns), searching
/// pivots from the highest column downward so that the free columns land on
/// the lowest indices. Returns the reduced rows and the pivot positions
/// `(row, col)`.
pub(crate) fn rref_high_pivot(
    mut rows: Vec<Vec<ComplexRational>>,
    ncols: usize,
) -> (Vec<Vec<ComplexRational>>, Vec<(usize, usize)>) {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next_row = 0usize;
    for col in (0..ncols).rev() {
        // find a row at or below next_row with a nonzero entry in this column
        let Some(r) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, r);
        let inv = ComplexRational::new(
            num_traits::One::one(),
            num_traits::Zero::zero(),
        ) / rows[next_row][col].clone();
        for c in 0..ncols {
            if !rows[next_row][c].is_zero() {
                rows[next_row][c] = rows[next_row][c].clone() * inv.clone();
            }
        }
        for r2 in 0..rows.len() {
            if r2 == next_row || rows[r2][col].is_zero() {
                continue;
            }
            let factor = rows[r2][col].clone();
            for c in 0..ncols {
                if !rows[next_row][c].is_zero() {
                    let delta = factor.clone() * rows[next_row][c].clone();
                    rows[r2][c] = rows[r2][c].clone() - delta;
                }
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    (rows, pivots)
}

/// Kernel basis of the reduced system from [`rref_high_pivot`], one vector
/// per free column, with that free coordinate set to one.
pub(crate) fn kernel_basis(
    reduced: &[Vec<ComplexRational>],
    pivots: &[(usize, usize)],
    ncols: usize,
) -> (Vec<usize>, Vec<Vec<ComplexRational>>) {
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let mut v = vec![ComplexRational::zero(); ncols];
        v[f] = num_traits::One::one();
        for &(r, c) in pivots {
            let coeff = reduced[r][f].clone();
            if !coeff.is_zero() {
                v[c] = -coeff;
            }
        }
        basis.push(v);
    }
    (free_cols, basis)
}

/// Growth-separating column reduction.
///
/// `mat` is `rows × cols` with row 0 the most dominant tail slot. Column
/// operations bring the matrix to a staircase where, processing rows top
/// down, one column is chosen as pivot per row (the highest-index active
/// column with a nonzero entry) and every other active column is cleared at
/// that row. A column that ends up never pivoted vanishes on every processed
/// slot.
///
/// Returns the accumulated transform columns ordered from the most
/// tail-vanishing combination to the most dominant, together with the number
/// of pivots placed.
pub(crate) fn tail_flag(
    mut mat: Vec<Vec<ComplexRational>>,
    cols: usize,
) -> (Vec<Vec<ComplexRational>>, usize) {
    let rows = mat.len();
    let mut transform: Vec<Vec<ComplexRational>> = (0..cols)
        .map(|j| {
            let mut v = vec![ComplexRational::zero(); cols];
            v[j] = num_traits::One::one();
            v
        })
        .collect();
    let mut active: Vec<usize> = (0..cols).collect();
    // pivot column per processed row, in placement order
    let mut pivot_cols: Vec<usize> = Vec::new();
    for r in 0..rows {
        if active.len() <= 1 || pivot_cols.len() + 1 == cols {
            break;
        }
        let Some(pos) = active
            .iter()
            .rposition(|&j| !mat[r][j].is_zero())
        else {
            continue;
        };
        let pivot = active.remove(pos);
        let pval = mat[r][pivot].clone();
        for &j in &active {
            if mat[r][j].is_zero() {
                continue;
            }
            let factor = mat[r][j].clone() / pval.clone();
            for row in mat.iter_mut().skip(r) {
                if !row[pivot].is_zero() {
                    let delta = factor.clone() * row[pivot].clone();
                    row[j] = row[j].clone() - delta;
                }
            }
            for k in 0..cols {
                if !transform[pivot][k].is_zero() {
                    let delta = factor.clone() * transform[pivot][k].clone();
                    transform[j][k] = transform[j][k].clone() - delta;
                }
            }
        }
        pivot_cols.push(pivot);
    }
    // most minimal first: never-pivoted columns, then pivots of later rows
    let mut order: Vec<usize> = active.clone();
    order.extend(pivot_cols.iter().rev());
    let placed = pivot_cols.len();
    let ordered = order
        .into_iter()
        .map(|j| transform[j].clone())
        .collect();
    (ordered, placed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::crat;

    #[test]
    fn rref_frees_low_columns() {
        // x0 + 3 x1 + 12 x2 = 0 over three unknowns: pivot on x2,
        // free columns x0 and x1.
        let rows = vec![vec![crat(1, 1), crat(3, 1), crat(12, 1)]];
        let (red, piv) = rref_high_pivot(rows, 3);
        assert_eq!(piv, vec![(0, 2)]);
        let (free, basis) = kernel_basis(&red, &piv, 3);
        assert_eq!(free, vec![0, 1]);
        // x0 = 1, x1 = 0 -> x2 = -1/12
        assert_eq!(basis[0][2], crat(-1, 12));
        // x0 = 0, x1 = 1 -> x2 = -1/4
        assert_eq!(basis[1][2], crat(-1, 4));
    }

    #[test]
    fn tail_flag_triangularizes() {
        // two columns, one slot row: combination vanishing at the slot first
        let mat = vec![vec![crat(2, 1), crat(4, 1)]];
        let (cols, placed) = tail_flag(mat, 2);
        assert_eq!(placed, 1);
        assert_eq!(cols.len(), 2);
        // first returned member must kill the slot: 1·col0 − (1/2)·col1
        let c = &cols[0];
        let combo = crat(2, 1) * c[0].clone() + crat(4, 1) * c[1].clone();
        assert!(num_traits::Zero::is_zero(&combo));
    }
}
