//! Small dense helpers shared by the solver and the state utilities.

use nalgebra::DMatrix;

use crate::tensor::{CMat, CVec, C64};

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Smallest singular value of `a` and a unit right singular vector for it.
///
/// Wide matrices are padded with zero rows, so a nontrivial kernel is reported
/// as singular value 0.
pub(crate) fn smallest_right_singular(a: &CMat) -> (f64, CVec) {
    let (rows, cols) = a.shape();
    let padded;
    let work = if rows < cols {
        padded = a.clone().resize_vertically(cols, C64::new(0.0, 0.0));
        &padded
    } else {
        a
    };
    let svd = work.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (idx, sigma) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, s)| if s < best.1 { (i, s) } else { best });
    // Row `idx` of V* is v_idx*.
    let v = v_t.row(idx).adjoint();
    (sigma, v.into_owned())
}

/// Singular values of a real matrix, including zeros for a wide matrix.
pub fn real_singular_values(a: &DMatrix<f64>) -> alloc::vec::Vec<f64> {
    let (rows, cols) = a.shape();
    let work = if rows < cols { a.clone().resize_vertically(cols, 0.0) } else { a.clone() };
    let mut s: alloc::vec::Vec<f64> = work.singular_values().iter().copied().collect();
    s.sort_by(|u, v| u.total_cmp(v));
    s
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching unit eigenvectors as columns.
pub(crate) fn hermitian_eigen(a: &CMat) -> (alloc::vec::Vec<f64>, CMat) {
    let eig = a.clone().symmetric_eigen();
    let mut order: alloc::vec::Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(a.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}
