//! Real-linear operators on realified complex spaces.
//!
//! A complex Hilbert space of dimension `N` is modelled as `ℝ^{2N}` with the
//! Euclidean inner product standing for `α = Re(·,·)` and an explicit orthogonal
//! complex structure `i_op`. The scalar product is linear in the second slot, so
//! the imaginary part is `β(x, y) = Im(x, y) = -α(x, i y)`.
//!
//! Operators are dense real matrices in an α-orthonormal basis; the adjoint with
//! respect to `α` is therefore the transpose, for complex-linear and antilinear
//! maps alike.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{frobenius, Mat, Vector};

/// A real-linear operator stored in an α-orthonormal basis.
pub type RealOp = Mat;

#[derive(Debug, Clone, PartialEq)]
pub struct RealifiedSpace {
    n_complex: usize,
    i_op: Mat,
}

impl RealifiedSpace {
    /// `ℂ^N` with coordinates `(Re z, Im z)` stacked, i.e. `i = [[0, -1], [1, 0]]` in blocks.
    pub fn standard(n_complex: usize) -> Self {
        let n = n_complex;
        let mut i_op = Mat::zeros(2 * n, 2 * n);
        for k in 0..n {
            i_op[(n + k, k)] = 1.0;
            i_op[(k, n + k)] = -1.0;
        }
        Self { n_complex, i_op }
    }

    /// Wraps an explicit complex structure; it must be orthogonal and square to `-1`.
    pub fn with_complex_structure(i_op: Mat) -> Result<Self> {
        let d = i_op.nrows();
        if !i_op.is_square() || !d.is_multiple_of(2) {
            return Err(dim_mismatch(
                "even square matrix",
                format!("{}x{}", i_op.nrows(), i_op.ncols()),
            ));
        }
        let id = Mat::identity(d, d);
        let sq = frobenius(&(&i_op * &i_op + &id));
        if sq > 1e-10 {
            return Err(Error::Consistency {
                name: "i^2 = -1".into(),
                residual: sq,
                tolerance: 1e-10,
            });
        }
        let orth = frobenius(&(i_op.transpose() * &i_op - &id));
        if orth > 1e-10 {
            return Err(Error::Consistency {
                name: "i orthogonal".into(),
                residual: orth,
                tolerance: 1e-10,
            });
        }
        Ok(Self {
            n_complex: d / 2,
            i_op,
        })
    }

    pub fn n_complex(&self) -> usize {
        self.n_complex
    }

    pub fn real_dim(&self) -> usize {
        2 * self.n_complex
    }

    pub fn i_op(&self) -> &Mat {
        &self.i_op
    }

    pub fn alpha(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(y)
    }

    pub fn beta(&self, x: &Vector, y: &Vector) -> f64 {
        -x.dot(&(&self.i_op * y))
    }

    /// Gram matrix of `β` over a family of column vectors.
    pub fn beta_gram(&self, vectors: &Mat) -> Mat {
        -(vectors.transpose() * &self.i_op * vectors)
    }

    fn check_square(&self, t: &Mat) -> Result<()> {
        let d = self.real_dim();
        if t.nrows() != d || t.ncols() != d {
            return Err(dim_mismatch(
                format!("{d}x{d}"),
                format!("{}x{}", t.nrows(), t.ncols()),
            ));
        }
        Ok(())
    }

    /// `T i - i T`.
    pub fn commutator_with_i(&self, t: &Mat) -> Result<Mat> {
        self.check_square(t)?;
        Ok(t * &self.i_op - &self.i_op * t)
    }

    /// `T i + i T`.
    pub fn anticommutator_with_i(&self, t: &Mat) -> Result<Mat> {
        self.check_square(t)?;
        Ok(t * &self.i_op + &self.i_op * t)
    }

    pub fn is_complex_linear(&self, t: &Mat, tol: f64) -> bool {
        self.commutator_with_i(t)
            .map(|c| frobenius(&c) <= tol * (1.0 + frobenius(t)))
            .unwrap_or(false)
    }

    pub fn is_antilinear(&self, t: &Mat, tol: f64) -> bool {
        self.anticommutator_with_i(t)
            .map(|c| frobenius(&c) <= tol * (1.0 + frobenius(t)))
            .unwrap_or(false)
    }

    /// Residual of `[T, i] = T i (1 - T*T)`; vanishes for symplectic `T`.
    pub fn shale_identity_residual(&self, t: &Mat) -> Result<f64> {
        let c = self.commutator_with_i(t)?;
        let id = Mat::identity(t.nrows(), t.ncols());
        let rhs = t * &self.i_op * (id - t.transpose() * t);
        Ok(frobenius(&(c - rhs)))
    }
}

/// Adjoint with respect to `α` of `T: domain → codomain`.
pub fn real_adjoint(t: &RealOp, domain: &RealifiedSpace, codomain: &RealifiedSpace) -> Result<RealOp> {
    if t.nrows() != codomain.real_dim() || t.ncols() != domain.real_dim() {
        return Err(dim_mismatch(
            format!("{}x{}", codomain.real_dim(), domain.real_dim()),
            format!("{}x{}", t.nrows(), t.ncols()),
        ));
    }
    Ok(t.transpose())
}

#[derive(Debug, Clone)]
pub struct Polar {
    /// Phase; isometric on the range of `p`.
    pub v: RealOp,
    /// `(T*T)^{1/2}`.
    pub p: RealOp,
}

/// `T = V P` from the symmetric eigensystem `TᵀT = W Λ Wᵀ`: `P = W Λ^{1/2} Wᵀ`,
/// `V = T W Λ^{-1/2} Wᵀ` on eigenvalues above `1e-14 · max Λ`, zero on the rest.
///
/// The eigen route keeps `V` accurate when singular values are repeated, where the
/// SVD phase can drift by `1e-9`.
pub fn polar_decompose(t: &RealOp) -> Result<Polar> {
    if !t.is_square() {
        return Err(dim_mismatch(
            "square matrix",
            format!("{}x{}", t.nrows(), t.ncols()),
        ));
    }
    let tt = t.transpose() * t;
    let eig = (0.5 * (&tt + tt.transpose())).symmetric_eigen();
    let lmax = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b));
    let n = t.ncols();
    let mut root = Mat::zeros(n, n);
    let mut inv_root = Mat::zeros(n, n);
    for (j, &l) in eig.eigenvalues.iter().enumerate() {
        let w = eig.eigenvectors.column(j);
        let ww = w * w.transpose();
        if l > lmax * 1e-14 {
            root += l.sqrt() * &ww;
            inv_root += l.sqrt().recip() * &ww;
        }
    }
    Ok(Polar {
        v: t * inv_root,
        p: root,
    })
}

/// Schatten `p`-norm with respect to the real inner product; `p = ∞` gives the operator norm.
pub fn schatten_norm(t: &RealOp, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "Schatten exponent must be >= 1, got {p}"
        )));
    }
    if t.is_empty() {
        return Ok(0.0);
    }
    let s = t.clone().svd(false, false).singular_values;
    if p.is_infinite() {
        return Ok(s.max());
    }
    if p == 2.0 {
        return Ok(s.norm());
    }
    Ok(s.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Hilbert–Schmidt norm.
pub fn hs_norm(t: &RealOp) -> f64 {
    frobenius(t)
}

fn check_skew(k: &Mat) -> Result<()> {
    if !k.is_square() {
        return Err(dim_mismatch(
            "square matrix",
            format!("{}x{}", k.nrows(), k.ncols()),
        ));
    }
    let defect = frobenius(&(k + k.transpose()));
    if defect > 1e-9 * (1.0 + frobenius(k)) {
        return Err(Error::InvalidArgument(format!(
            "generator is not skew-adjoint (‖K + K*‖ = {defect:.3e})"
        )));
    }
    Ok(())
}

/// Spectral data of `A = -ι Ǩ` on the complexification `H ⊕ ιH`.
#[derive(Debug, Clone)]
pub struct SkewSpectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl SkewSpectrum {
    pub fn new(k: &RealOp) -> Result<Self> {
        check_skew(k)?;
        let ks = (k - k.transpose()) * 0.5;
        let a = ks.map(|v| Complex64::new(0.0, -v));
        let eig = SymmetricEigen::new(a);
        Ok(Self {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    /// Eigenvalues of the self-adjoint `A`; symmetric about zero.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `f(A)|_H`, requiring `f(-t) = conj f(t)` on the spectrum.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> Result<RealOp> {
        let vals: Vec<Complex64> = self.eigenvalues.iter().map(|&t| f(t)).collect();
        let mut defect = 0.0_f64;
        for (&t, fv) in self.eigenvalues.iter().zip(&vals) {
            let mirrored = f(-t);
            let d = (mirrored - fv.conj()).norm() / (1.0 + fv.norm());
            defect = defect.max(d);
        }
        if defect > 1e-10 {
            return Err(Error::FunctionSymmetry { defect });
        }
        let u = &self.eigenvectors;
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vals));
        let full = u * diag * u.adjoint();
        let imag = full.map(|z| z.im);
        let real = full.map(|z| z.re);
        let leak = frobenius(&imag);
        if leak > 1e-9 * (1.0 + frobenius(&real)) {
            return Err(Error::FunctionSymmetry { defect: leak });
        }
        Ok(real)
    }

    /// `ι f(A)|_H` for a real odd `f`.
    pub fn apply_odd(&self, f: impl Fn(f64) -> f64) -> Result<RealOp> {
        self.apply(|t| Complex64::new(0.0, f(t)))
    }

    /// `f(A)|_H` for a real even `f`.
    pub fn apply_even(&self, f: impl Fn(f64) -> f64) -> Result<RealOp> {
        self.apply(|t| Complex64::new(f(t), 0.0))
    }
}

/// Real-linear Borel calculus of a skew-adjoint `K` on a real Hilbert space.
///
/// `K` is promoted to the complexification `H_ℂ = H ⊕ H`, the self-adjoint
/// `A = -ι Ǩ` is diagonalised, `f(A)` is formed and restricted back to `H`.
/// The result stays in `H` exactly when `f(-t) = conj f(t)`.
pub fn borel_calculus_real(k: &RealOp, f: impl Fn(f64) -> Complex64) -> Result<RealOp> {
    SkewSpectrum::new(k)?.apply(f)
}

/// `ι f(A)|_H` for real odd `f`; `f(t) = t` returns `K` itself.
pub fn odd_calculus(k: &RealOp, f: impl Fn(f64) -> f64) -> Result<RealOp> {
    SkewSpectrum::new(k)?.apply_odd(f)
}

/// `f(A)|_H` for real even `f`.
pub fn even_calculus(k: &RealOp, f: impl Fn(f64) -> f64) -> Result<RealOp> {
    SkewSpectrum::new(k)?.apply_even(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symplectic_unit;
    use crate::sampling::{gaussian_matrix, rng};
    use approx_eq::close;

    mod approx_eq {
        pub fn close(a: f64, b: f64, tol: f64) -> bool {
            (a - b).abs() <= tol
        }
    }

    #[test]
    fn adjoint_of_identity_and_i() {
        let sp = RealifiedSpace::standard(3);
        let id = Mat::identity(6, 6);
        assert_eq!(real_adjoint(&id, &sp, &sp).unwrap(), id);
        let i_adj = real_adjoint(sp.i_op(), &sp, &sp).unwrap();
        assert!(frobenius(&(i_adj + sp.i_op())) < 1e-15);
    }

    #[test]
    fn adjoint_inner_product_oracle() {
        let sp = RealifiedSpace::standard(4);
        let mut r = rng(0);
        let t = gaussian_matrix(&mut r, 8, 8);
        let ta = real_adjoint(&t, &sp, &sp).unwrap();
        for _ in 0..100 {
            let x = gaussian_matrix(&mut r, 8, 1).column(0).into_owned();
            let y = gaussian_matrix(&mut r, 8, 1).column(0).into_owned();
            let lhs = sp.alpha(&(&t * &x), &y);
            let rhs = sp.alpha(&x, &(&ta * &y));
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn adjoint_dimension_mismatch() {
        let sp = RealifiedSpace::standard(2);
        let t = Mat::zeros(4, 3);
        assert!(matches!(
            real_adjoint(&t, &sp, &sp),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn polar_of_skew_generator() {
        let t = symplectic_unit(1) * 0.5;
        let p = polar_decompose(&t).unwrap();
        let id = Mat::identity(2, 2);
        assert!(frobenius(&(&p.v * &p.v + &id)) < 1e-12);
        assert!(frobenius(&(&p.v * &p.p - &p.p * &p.v)) < 1e-12);
        assert!(frobenius(&(&p.v * &p.p - &t)) < 1e-12);
    }

    #[test]
    fn polar_of_positive_is_trivial() {
        let t = Mat::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let p = polar_decompose(&t).unwrap();
        assert!(frobenius(&(&p.v - Mat::identity(2, 2))) < 1e-12);
        assert!(frobenius(&(&p.p - &t)) < 1e-12);
    }

    #[test]
    fn polar_reconstructs_rank_deficient() {
        let mut r = rng(5);
        let a = gaussian_matrix(&mut r, 5, 2);
        let t = &a * a.transpose() * gaussian_matrix(&mut r, 5, 5);
        let p = polar_decompose(&t).unwrap();
        assert!(frobenius(&(&p.v * &p.p - &t)) <= 1e-10 * frobenius(&t));
    }

    #[test]
    fn schatten_examples() {
        assert_eq!(schatten_norm(&Mat::zeros(3, 3), 2.0).unwrap(), 0.0);
        let mut proj = Mat::zeros(3, 3);
        proj[(1, 1)] = 1.0;
        assert!(close(schatten_norm(&proj, 2.0).unwrap(), 1.0, 1e-15));
        let mut r = rng(11);
        let t = gaussian_matrix(&mut r, 6, 6);
        let f: f64 = t.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(close(schatten_norm(&t, 2.0).unwrap(), f, 1e-12 * f));
        assert!(schatten_norm(&t, 0.5).is_err());
        let s1 = schatten_norm(&t, 1.0).unwrap();
        let s3 = schatten_norm(&t, 3.0).unwrap();
        assert!(s1 >= f && f >= s3);
    }

    #[test]
    fn commutator_examples() {
        let sp = RealifiedSpace::standard(2);
        // Multiplication by a complex scalar is complex-linear.
        let t = Mat::identity(4, 4) * 0.3 + sp.i_op() * 1.7;
        assert!(frobenius(&sp.commutator_with_i(&t).unwrap()) < 1e-15);
        // Complex conjugation anticommutes with i.
        let mut conj = Mat::identity(4, 4);
        conj[(2, 2)] = -1.0;
        conj[(3, 3)] = -1.0;
        let c = sp.commutator_with_i(&conj).unwrap();
        assert!(frobenius(&(c - 2.0 * &conj * sp.i_op())) < 1e-15);
        assert!(sp.is_antilinear(&conj, 1e-14));
    }

    #[test]
    fn squeeze_shale_identity() {
        let sp = RealifiedSpace::standard(1);
        let s = 2.0;
        let t = Mat::from_row_slice(2, 2, &[s, 0.0, 0.0, 1.0 / s]);
        assert!(sp.shale_identity_residual(&t).unwrap() <= 1e-12);
    }

    #[test]
    fn calculus_identity_function_returns_generator() {
        let mut r = rng(3);
        let g = gaussian_matrix(&mut r, 5, 5);
        let k = &g - g.transpose();
        let back = odd_calculus(&k, |t| t).unwrap();
        assert!(frobenius(&(back - &k)) < 1e-12 * frobenius(&k));
    }

    #[test]
    fn calculus_tanh_on_two_dimensional_example() {
        // K with spectrum ±i log 3: ι tanh(A/2) acts as ±i/2.
        let k = symplectic_unit(1) * 3f64.ln();
        let d = odd_calculus(&k, |t| (t / 2.0).tanh()).unwrap();
        let d2 = &d * &d;
        assert!(frobenius(&(d2 + Mat::identity(2, 2) * 0.25)) < 1e-14);
        assert!(frobenius(&(&d + d.transpose())) < 1e-15);
    }

    #[test]
    fn calculus_sech_is_symmetric_and_commutes() {
        let mut r = rng(8);
        let g = gaussian_matrix(&mut r, 6, 6);
        let k = &g - g.transpose();
        let sech = even_calculus(&k, |t| 1.0 / (t / 2.0).cosh()).unwrap();
        let cosh = even_calculus(&k, |t| (t / 2.0).cosh()).unwrap();
        assert!(frobenius(&(&sech - sech.transpose())) < 1e-12);
        assert!(frobenius(&(&sech * &k - &k * &sech)) < 1e-10);
        let prod = &sech * &sech * &cosh * &cosh;
        assert!(frobenius(&(prod - Mat::identity(6, 6))) <= 1e-10);
    }

    #[test]
    fn calculus_matches_matrix_exponential() {
        let mut r = rng(13);
        let g = gaussian_matrix(&mut r, 6, 6);
        let k = (&g - g.transpose()) * 0.5;
        for s in [0.1, 1.0] {
            let via = borel_calculus_real(&k, |t| Complex64::new(0.0, s * t).exp()).unwrap();
            let direct = (&k * s).exp();
            assert!(frobenius(&(via - direct)) <= 1e-10);
        }
    }

    #[test]
    fn calculus_rejects_asymmetric_function() {
        let k = symplectic_unit(1);
        let err = borel_calculus_real(&k, |t| Complex64::new(t, 0.0)).unwrap_err();
        assert!(matches!(err, Error::FunctionSymmetry { .. }));
    }

    #[test]
    fn complex_structure_validation() {
        assert!(RealifiedSpace::with_complex_structure(Mat::identity(2, 2)).is_err());
        let sp = RealifiedSpace::with_complex_structure(symplectic_unit(2)).unwrap();
        assert_eq!(sp.n_complex(), 2);
    }
}
