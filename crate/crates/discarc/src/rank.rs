//! Exact rank of small integer matrices by fraction-free elimination.

/// Rank over the rationals, computed with the Bareiss pivoting scheme so all
/// intermediate values stay integral.
pub(crate) fn integer_matrix_rank(matrix: &[Vec<i128>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<i128>> = matrix.to_vec();
    let mut rank = 0;
    let mut prev_pivot: i128 = 1;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (row..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, pivot_row);
        for i in (row + 1)..rows {
            for j in (col + 1)..cols {
                m[i][j] = (m[row][col] * m[i][j] - m[i][col] * m[row][j]) / prev_pivot;
            }
            m[i][col] = 0;
        }
        prev_pivot = m[row][col];
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}
