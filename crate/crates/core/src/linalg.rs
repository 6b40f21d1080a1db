//! Small dense complex linear-algebra helpers on top of `nalgebra`.
//!
//! Every rank decision in the crate goes through [`rank`] / [`nullspace`],
//! which cut singular values relative to the largest one.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a complex matrix from real row slices.
pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(nrows, ncols, |i, j| c(rows[i][j], 0.0))
}

/// Builds a complex matrix from complex row slices.
pub fn complex_matrix(rows: &[&[Complex64]]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows(), "hstack: row mismatch");
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn vstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.ncols(), "vstack: column mismatch");
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// Largest entry modulus; 0 for an empty matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Singular values in descending order. Empty matrices have none.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: number of singular values `>= rel_tol * sigma_max`.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x >= rel_tol * top).count()
}

/// Full SVD with singular values sorted descending.
///
/// Returns `(u, s, v)` where `u` is `m × min(m,n)`, `v` is `n × min(m,n)` and
/// `m = u · diag(s) · v†`.
pub fn sorted_svd(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd u");
    let vt = svd.v_t.expect("svd v_t");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u_sorted = CMatrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]);
    let v_sorted = CMatrix::from_fn(vt.ncols(), order.len(), |i, j| vt[(order[j], i)].conj());
    (u_sorted, s, v_sorted)
}

/// Orthonormal basis (as columns) of the null space of `m`.
///
/// A singular value counts as zero when it is below `rel_tol * sigma_max`;
/// an all-zero matrix has the whole space as null space.
pub fn nullspace(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let n = m.ncols();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    // pad to at least n rows so that the SVD yields a complete right basis
    let padded = if m.nrows() < n {
        vstack(m, &CMatrix::zeros(n - m.nrows(), n))
    } else {
        m.clone()
    };
    let (_, s, v) = sorted_svd(&padded);
    let top = s.first().copied().unwrap_or(0.0);
    let r = if top == 0.0 { 0 } else { s.iter().filter(|&&x| x >= rel_tol * top).count() };
    v.columns(r, n - r).into_owned()
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &CMatrix, rel_tol: f64) -> CMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let (u, s, _) = sorted_svd(m);
    let top = s.first().copied().unwrap_or(0.0);
    let r = if top == 0.0 { 0 } else { s.iter().filter(|&&x| x >= rel_tol * top).count() };
    u.columns(0, r).into_owned()
}

pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    if !m.is_square() {
        return None;
    }
    if m.nrows() == 0 {
        return Some(m.clone());
    }
    // reject numerically singular input instead of returning garbage
    let s = singular_values(m);
    if s.last().copied().unwrap_or(0.0) <= 1e-13 * s[0] {
        return None;
    }
    m.clone().try_inverse()
}

/// Frobenius norm.
pub fn norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Rotation matrix by `theta` as a complex 2×2 matrix.
pub fn rotation(theta: f64) -> CMatrix {
    let (s, co) = theta.sin_cos();
    real_matrix(&[&[co, -s], &[s, co]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_matches_block_definition() {
        let a = real_matrix(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = identity(2);
        let k = kron(&a, &b);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k[(0, 2)], c(2.0, 0.0));
        assert_eq!(k[(3, 1)], c(3.0, 0.0));
        assert_eq!(k[(2, 3)], c(0.0, 0.0));
    }

    #[test]
    fn nullspace_of_wide_matrix_is_complete() {
        let m = real_matrix(&[&[1.0, 1.0, 0.0]]);
        let n = nullspace(&m, 1e-12);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&m * &n)) < 1e-14);
        let gram = n.adjoint() * &n;
        assert!(max_abs_diff(&gram, &identity(2)) < 1e-14);
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(rank(&CMatrix::zeros(3, 2), 1e-10), 0);
        assert_eq!(nullspace(&CMatrix::zeros(3, 2), 1e-10).ncols(), 2);
    }

    #[test]
    fn sorted_svd_reconstructs() {
        let m = complex_matrix(&[&[c(1.0, 2.0), c(0.0, 1.0)], &[c(3.0, 0.0), c(-1.0, 0.5)], &[c(0.0, 0.0), c(2.0, 0.0)]]);
        let (u, s, v) = sorted_svd(&m);
        assert!(s[0] >= s[1]);
        let sd = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(2, s.iter().map(|&x| c(x, 0.0))));
        assert!(max_abs_diff(&(u * sd * v.adjoint()), &m) < 1e-12);
    }

    #[test]
    fn inverse_rejects_singular() {
        assert!(inverse(&real_matrix(&[&[1.0, 2.0], &[2.0, 4.0]])).is_none());
        assert!(inverse(&rotation(0.3)).is_some());
    }
}
