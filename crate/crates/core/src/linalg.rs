//! Small dense helpers shared across modules.

use nalgebra::{DMatrix, SymmetricEigen};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Dense symmetric matrix times vector.
pub(crate) fn matvec(rows: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    rows.iter().map(|row| dot(row, v)).collect()
}

/// Symmetric eigendecomposition with eigenvalues sorted in non-increasing
/// order. Returns `(eigenvalues, basis)` where `basis[i]` is the unit
/// eigenvector of `eigenvalues[i]`.
pub(crate) fn sym_eigen_desc(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let basis = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    (values, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_diagonal_is_sorted_descending() {
        let rows = vec![vec![1.0, 0.0], vec![0.0, 4.0]];
        let (vals, basis) = sym_eigen_desc(&rows);
        assert!((vals[0] - 4.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        // leading eigenvector is +/- e2
        assert!(basis[0][1].abs() > 0.999);
    }
}
