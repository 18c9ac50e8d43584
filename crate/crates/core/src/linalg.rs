//! Small dense helpers on top of nalgebra used by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

pub fn frobenius(m: &Mat) -> f64 {
    m.norm()
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Operator (spectral) norm.
pub fn op_norm(m: &Mat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0_f64, |a, &s| a.max(s))
}

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

pub fn sym_eigen(m: &Mat) -> SymmetricEigen<f64, nalgebra::Dyn> {
    SymmetricEigen::new(symmetrize(m))
}

/// Applies a real function to a symmetric matrix through its eigendecomposition.
pub fn sym_fn(m: &Mat, f: impl Fn(f64) -> f64) -> Mat {
    let eig = sym_eigen(m);
    let vals = eig.eigenvalues.map(f);
    &eig.eigenvectors * Mat::from_diagonal(&vals) * eig.eigenvectors.transpose()
}

pub fn sym_sqrt(m: &Mat) -> Mat {
    sym_fn(m, |x| x.max(0.0).sqrt())
}

pub fn spd_check(m: &Mat) -> Result<()> {
    let eig = sym_eigen(m);
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    Ok(())
}

pub fn spd_inv_sqrt(m: &Mat) -> Result<Mat> {
    spd_check(m)?;
    Ok(sym_fn(m, |x| 1.0 / x.sqrt()))
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    if !m.is_square() {
        return Err(Error::Singular(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= smax * 1e-14 || smin == 0.0 {
        return Err(Error::Singular(format!(
            "singular values range [{smin:.3e}, {smax:.3e}]"
        )));
    }
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("LU inversion failed".into()))
}

/// Numerical rank with relative threshold.
pub fn rank(m: &Mat, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let s = m.clone().svd(false, false).singular_values;
    let smax = s.max();
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > smax * rel_tol).count()
}

/// Symmetric (Löwdin) orthonormalisation `B (BᵀB)^{-1/2}`; leaves orthonormal inputs unchanged.
pub fn lowdin(b: &Mat) -> Result<Mat> {
    let gram = b.transpose() * b;
    Ok(b * spd_inv_sqrt(&gram)?)
}

/// Orthonormal basis of the orthogonal complement of the column span of an orthonormal `q`.
pub fn orthonormal_complement(q: &Mat) -> Mat {
    let n = q.nrows();
    let k = q.ncols();
    let proj = Mat::identity(n, n) - q * q.transpose();
    let eig = sym_eigen(&proj);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let cols: Vec<Vector> = idx[..n - k]
        .iter()
        .map(|&j| eig.eigenvectors.column(j).into_owned())
        .collect();
    if cols.is_empty() {
        return Mat::zeros(n, 0);
    }
    Mat::from_columns(&cols)
}

/// `[a, b]` concatenated by columns.
pub fn hcat(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = Mat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((0, a.ncols()), (b.nrows(), b.ncols()))
        .copy_from(b);
    out
}

/// `[[a, b], [c, d]]`.
pub fn block2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    let (r0, c0) = (a.nrows(), a.ncols());
    let (r1, c1) = (c.nrows(), b.ncols());
    let mut out = Mat::zeros(r0 + r1, c0 + c1);
    out.view_mut((0, 0), (r0, c0)).copy_from(a);
    out.view_mut((0, c0), (r0, c1)).copy_from(b);
    out.view_mut((r0, 0), (r1, c0)).copy_from(c);
    out.view_mut((r0, c0), (r1, c1)).copy_from(d);
    out
}

/// Block-diagonal `diag(a, b)`.
pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
    block2(
        a,
        &Mat::zeros(a.nrows(), b.ncols()),
        &Mat::zeros(b.nrows(), a.ncols()),
        b,
    )
}

pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

/// The 2×2 rotation generator `[[0, 1], [-1, 0]]` repeated on the diagonal.
pub fn symplectic_unit(pairs: usize) -> Mat {
    let mut m = Mat::zeros(2 * pairs, 2 * pairs);
    for p in 0..pairs {
        m[(2 * p, 2 * p + 1)] = 1.0;
        m[(2 * p + 1, 2 * p)] = -1.0;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_orthogonal() {
        let q = Mat::from_column_slice(3, 1, &[1.0, 0.0, 0.0]);
        let c = orthonormal_complement(&q);
        assert_eq!(c.ncols(), 2);
        assert!((q.transpose() * &c).norm() < 1e-14);
        assert!((c.transpose() * &c - Mat::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn lowdin_fixes_orthonormal() {
        let q = Mat::from_column_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert!((lowdin(&q).unwrap() - &q).norm() < 1e-15);
    }

    #[test]
    fn singular_inverse_rejected() {
        let m = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(inverse(&m), Err(Error::Singular(_))));
    }
}
