//! Small dense solves on `ndarray` data, delegated to nalgebra.

use nalgebra::DMatrix;
use ndarray::Array2;

fn to_na(a: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

fn from_na(m: &DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

pub fn det(a: &Array2<f64>) -> f64 {
    to_na(a).determinant()
}

/// Solves `a x = b` for square `a`; `None` if `a` is singular or the result
/// is not finite.
pub fn solve(a: &Array2<f64>, b: &Array2<f64>) -> Option<Array2<f64>> {
    let x = to_na(a).lu().solve(&to_na(b))?;
    x.iter().all(|v| v.is_finite()).then(|| from_na(&x))
}

pub fn inverse(a: &Array2<f64>) -> Option<Array2<f64>> {
    let inv = to_na(a).try_inverse()?;
    inv.iter().all(|v| v.is_finite()).then(|| from_na(&inv))
}

/// Columns of `a` with column `skip` removed.
pub fn drop_column(a: &Array2<f64>, skip: usize) -> Array2<f64> {
    let keep: Vec<usize> = (0..a.ncols()).filter(|&c| c != skip).collect();
    Array2::from_shape_fn((a.nrows(), keep.len()), |(i, j)| a[[i, keep[j]]])
}
