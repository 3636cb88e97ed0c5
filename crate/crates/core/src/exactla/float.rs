//! SVD-based kernels for the `f64` backend.

use nalgebra::DMatrix;

use super::matrix::Matrix;

fn to_dmatrix(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

/// `max(rows, cols) · σ_max · ε`, unless overridden.
pub(crate) fn threshold(rows: usize, cols: usize, sigma_max: f64, tol: Option<f64>) -> f64 {
    tol.unwrap_or_else(|| rows.max(cols) as f64 * sigma_max * f64::EPSILON)
}

pub(crate) fn rank(m: &Matrix<f64>, tol: Option<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = to_dmatrix(m).singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let thr = threshold(m.rows(), m.cols(), smax, tol);
    sv.iter().filter(|&&s| s > thr).count()
}

pub(crate) fn kernel_basis(m: &Matrix<f64>, tol: Option<f64>) -> Matrix<f64> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Matrix::zeros(0, 0);
    }
    // Pad with zero rows so the thin SVD yields a full set of right
    // singular vectors.
    let padded_rows = rows.max(cols);
    let mut d = DMatrix::zeros(padded_rows, cols);
    d.view_mut((0, 0), (rows, cols)).copy_from(&to_dmatrix(m));
    let svd = d.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thr = threshold(rows, cols, smax, tol);
    let null: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= thr)
        .collect();
    Matrix::from_fn(cols, null.len(), |r, k| v_t[(null[k], r)])
}

pub(crate) fn image_basis(m: &Matrix<f64>, tol: Option<f64>) -> Matrix<f64> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Matrix::zeros(rows, 0);
    }
    let svd = to_dmatrix(m).svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thr = threshold(rows, cols, smax, tol);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > thr)
        .collect();
    Matrix::from_fn(rows, keep.len(), |r, k| u[(r, keep[k])])
}

pub(crate) fn least_squares(a: &Matrix<f64>, b: &[f64], tol: Option<f64>) -> Vec<f64> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Vec::new();
    }
    if rows == 0 {
        return vec![0.0; cols];
    }
    let svd = to_dmatrix(a).svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thr = threshold(rows, cols, smax, tol);
    let rhs = DMatrix::from_column_slice(rows, 1, b);
    match svd.solve(&rhs, thr) {
        Ok(x) => x.iter().copied().collect(),
        Err(_) => vec![0.0; cols],
    }
}
