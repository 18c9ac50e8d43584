//! Abstract standard subspaces and their dilations to complex spaces.
//!
//! An abstract subspace is `ℝ^n` with a real scalar product `α` (Gram `A`) and a
//! compatible symplectic form `β` (Gram `B`). In the α-orthonormal frame
//! `y = A^{1/2} x` its polariser is the skew matrix `D = A^{-1/2} B A^{-1/2}`.
//!
//! Two one-particle structures are built:
//!
//! * orthogonal dilation on `H ⊕ H` with
//!   `ι = [[-D, -V√(1+D²)], [-V√(1+D²), D]]`, `V` the phase of `D`, and the plain
//!   complexification on `ker D`;
//! * symplectic dilation on `H ⊕ H` with `β̂ = β ⊕ -β`,
//!   `ι = [[D⁻¹, D⁻¹√(1+D²)], [-D⁻¹√(1+D²), -D⁻¹]]` and `α̂(ξ, η) = β̂(ξ, ιη)`,
//!   realified through `α̂^{1/2}`.
//!
//! Both embed `H ⊕ 0` as a standard subspace whose polariser is `D`.

use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    block2, frobenius, hcat, inverse, op_norm, rank, spd_check, spd_inv_sqrt, sym_eigen, sym_sqrt,
    Mat,
};
use crate::realop::{polar_decompose, RealifiedSpace};
use crate::report::IdentityReport;
use crate::sampling::{random_gram_pair, SeededRng};
use crate::stdspace::StandardSubspace;

/// Singular values of `D` within this distance of 0 (kernel) or 1 (non-separating part).
pub const SPLIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct AbstractSubspace {
    a: Mat,
    b: Mat,
    a_sqrt: Mat,
    a_inv_sqrt: Mat,
    d: Mat,
    singular_values: Vec<f64>,
}

impl AbstractSubspace {
    pub fn new(a: &Mat, b: &Mat) -> Result<Self> {
        let n = a.nrows();
        if !a.is_square() || b.nrows() != n || b.ncols() != n {
            return Err(dim_mismatch(
                format!("two {n}x{n} Gram matrices"),
                format!("{}x{} and {}x{}", a.nrows(), a.ncols(), b.nrows(), b.ncols()),
            ));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("empty abstract subspace".into()));
        }
        let scale = 1.0 + op_norm(a);
        if frobenius(&(a - a.transpose())) > 1e-12 * scale {
            return Err(Error::InvalidArgument("alpha Gram is not symmetric".into()));
        }
        if frobenius(&(b + b.transpose())) > 1e-12 * (1.0 + op_norm(b)) {
            return Err(Error::InvalidArgument("beta Gram is not antisymmetric".into()));
        }
        spd_check(a)?;
        let a_inv_sqrt = spd_inv_sqrt(a)?;
        let a_sqrt = sym_sqrt(a);
        let d = &a_inv_sqrt * b * &a_inv_sqrt;
        let d = (&d - d.transpose()) * 0.5;
        let mut singular_values: Vec<f64> =
            d.clone().svd(false, false).singular_values.iter().copied().collect();
        singular_values.sort_by(f64::total_cmp);
        let norm = singular_values.last().copied().unwrap_or(0.0);
        if norm > 1.0 + 1e-12 {
            return Err(Error::Incompatible { norm });
        }
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            a_sqrt,
            a_inv_sqrt,
            d,
            singular_values,
        })
    }

    /// Random factorial separating instance of even dimension `n`.
    pub fn sample(rng: &mut SeededRng, n: usize) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "factorial abstract subspaces need even positive dimension, got {n}"
            )));
        }
        let (a, b) = random_gram_pair(rng, n);
        Self::new(&a, &b)
    }

    /// `A = I`, `B = b·R` on `ℝ²` with `R = [[0, 1], [-1, 0]]`.
    pub fn two_dim(b: f64) -> Result<Self> {
        let r = Mat::from_row_slice(2, 2, &[0.0, b, -b, 0.0]);
        Self::new(&Mat::identity(2, 2), &r)
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn gram_alpha(&self) -> &Mat {
        &self.a
    }

    pub fn gram_beta(&self) -> &Mat {
        &self.b
    }

    pub fn alpha_sqrt(&self) -> &Mat {
        &self.a_sqrt
    }

    pub fn alpha_inv_sqrt(&self) -> &Mat {
        &self.a_inv_sqrt
    }

    /// Polariser in the α-orthonormal frame.
    pub fn polariser(&self) -> &Mat {
        &self.d
    }

    /// Polariser in the original coordinates: `β(h, k) = α(h, D k)`, i.e. `A⁻¹B`.
    pub fn polariser_original(&self) -> Mat {
        &self.a_inv_sqrt * &self.d * &self.a_sqrt
    }

    /// Singular values of `D`, ascending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// `ker(1 + D²) = 0`.
    pub fn is_separating(&self) -> bool {
        self.singular_values.iter().all(|&s| s < 1.0 - SPLIT_TOL)
    }

    /// `ker D = 0`.
    pub fn is_factorial(&self) -> bool {
        self.kernel_dim() == 0
    }

    pub fn kernel_dim(&self) -> usize {
        self.singular_values.iter().filter(|&&s| s <= SPLIT_TOL).count()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = AbstractSubspaceFile {
            n: self.n(),
            a: GramData::Flat(self.a.transpose().iter().copied().collect()),
            b: GramData::Flat(self.b.transpose().iter().copied().collect()),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parses `{n, A, B}` with row-major Grams, flat or nested.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: AbstractSubspaceFile = serde_json::from_str(text)?;
        let a = file.a.into_matrix(file.n, "A")?;
        let b = file.b.into_matrix(file.n, "B")?;
        Self::new(&a, &b)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct AbstractSubspaceFile {
    n: usize,
    #[serde(rename = "A")]
    a: GramData,
    #[serde(rename = "B")]
    b: GramData,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum GramData {
    Flat(Vec<f64>),
    Nested(Vec<Vec<f64>>),
}

impl GramData {
    fn into_matrix(self, n: usize, name: &str) -> Result<Mat> {
        let flat: Vec<f64> = match self {
            GramData::Flat(v) => v,
            GramData::Nested(rows) => {
                if rows.iter().any(|r| r.len() != n) {
                    return Err(dim_mismatch(format!("{n} columns in {name}"), "ragged rows"));
                }
                rows.into_iter().flatten().collect()
            }
        };
        if flat.len() != n * n {
            return Err(dim_mismatch(format!("{} entries in {name}", n * n), flat.len()));
        }
        Ok(Mat::from_row_slice(n, n, &flat))
    }
}

/// A one-particle structure `κ: (H, α, β) → (ambient, Re, Im)`.
#[derive(Debug, Clone)]
pub struct Dilation {
    pub space: RealifiedSpace,
    /// Columns are `κ(e_j)` for the original coordinate basis of `H`.
    pub kappa: Mat,
    pub subspace: StandardSubspace,
}

impl Dilation {
    /// Residuals of the one-particle axioms against the abstract Grams.
    pub fn axioms(&self, abs: &AbstractSubspace, tol: f64) -> IdentityReport {
        let mut rep = IdentityReport::default();
        let k = &self.kappa;
        let scale = 1.0 + op_norm(abs.gram_alpha());
        rep.push(
            "Re(kh, kk) = alpha(h, k)",
            frobenius(&(k.transpose() * k - abs.gram_alpha())) / scale,
            tol,
        );
        rep.push(
            "Im(kh, kk) = beta(h, k)",
            frobenius(&(self.space.beta_gram(k) - abs.gram_beta())) / scale,
            tol,
        );
        let span = hcat(k, &(self.space.i_op() * k));
        let r = rank(&span, 1e-10);
        rep.push(
            "k(H) + i k(H) spans",
            (self.space.real_dim() - r) as f64,
            0.0,
        );
        rep
    }

    /// Polariser of the embedded subspace compared with the abstract one, in the frames
    /// related by the orthogonal change of basis `Qᵀκ A^{-1/2}`.
    pub fn polariser_residual(&self, abs: &AbstractSubspace) -> Result<f64> {
        let q = self.subspace.basis();
        let c = q.transpose() * &self.kappa * abs.alpha_inv_sqrt();
        let embedded = self.subspace.polariser();
        Ok(frobenius(&(c.transpose() * embedded * &c - abs.polariser())))
    }
}

/// Orthogonal dilation; the kernel of `D` is complexified directly.
pub fn orthogonal_dilation(abs: &AbstractSubspace) -> Result<Dilation> {
    let n = abs.n();
    let d = abs.polariser();
    if !abs.is_separating() {
        let bad = abs
            .singular_values()
            .iter()
            .filter(|&&s| s >= 1.0 - SPLIT_TOL)
            .count();
        return Err(Error::NotCyclic {
            rank: 2 * n - bad,
            expected: 2 * n,
        });
    }
    let polar = polar_decompose(d)?;
    let svd = d.clone().svd(false, true);
    let wt = svd.v_t.expect("v_t requested");
    let mut pk = Mat::zeros(n, n);
    let mut v = polar.v;
    for (j, &s) in svd.singular_values.iter().enumerate() {
        if s <= SPLIT_TOL {
            let w = wt.row(j).transpose();
            pk += &w * w.transpose();
        }
    }
    if abs.kernel_dim() > 0 {
        let pf = Mat::identity(n, n) - &pk;
        v = &pf * v * &pf;
    }
    let root = sym_sqrt(&(Mat::identity(n, n) + d * d));
    let vr = &v * &root;
    let iota = block2(&(-d), &(-&vr - &pk), &(-&vr + &pk), d);
    let space = RealifiedSpace::with_complex_structure(iota)?;
    let kappa = embed_top(abs.alpha_sqrt());
    let subspace = StandardSubspace::from_basis(&space, &kappa)?;
    Ok(Dilation {
        space,
        kappa,
        subspace,
    })
}

/// Symplectic dilation together with its α̂ Gram.
#[derive(Debug, Clone)]
pub struct SymplecticDilation {
    pub dilation: Dilation,
    /// `α̂` in the symplectic coordinates of `H ⊕ H`.
    pub alpha_hat: Mat,
    /// `β̂ = D ⊕ -D`.
    pub beta_hat: Mat,
    /// `ι` in the symplectic coordinates.
    pub iota: Mat,
}

impl SymplecticDilation {
    pub fn alpha_hat_condition(&self) -> f64 {
        let e = sym_eigen(&self.alpha_hat).eigenvalues;
        e.max() / e.min()
    }

    pub fn report(&self, tol: f64) -> IdentityReport {
        let n2 = self.iota.nrows();
        let id = Mat::identity(n2, n2);
        let mut rep = IdentityReport::default();
        let scale = 1.0 + op_norm(&self.iota);
        rep.push(
            "iota^2 = -1",
            frobenius(&(&self.iota * &self.iota + &id)) / (scale * scale),
            tol,
        );
        rep.push(
            "beta_hat(iota x, iota y) = beta_hat(x, y)",
            frobenius(&(self.iota.transpose() * &self.beta_hat * &self.iota - &self.beta_hat))
                / (scale * scale),
            tol,
        );
        rep.push(
            "alpha_hat(iota x, iota y) = alpha_hat(x, y)",
            frobenius(&(self.iota.transpose() * &self.alpha_hat * &self.iota - &self.alpha_hat))
                / (scale * scale),
            tol,
        );
        rep.push(
            "alpha_hat symmetric",
            frobenius(&(&self.alpha_hat - self.alpha_hat.transpose())),
            tol,
        );
        let e = sym_eigen(&self.alpha_hat).eigenvalues;
        rep.push("alpha_hat positive", (-e.min()).max(0.0), tol);
        rep
    }
}

pub fn symplectic_dilation(abs: &AbstractSubspace) -> Result<SymplecticDilation> {
    let n = abs.n();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "symplectic dilation needs a nondegenerate beta, impossible in odd dimension {n}"
        )));
    }
    if !abs.is_factorial() {
        return Err(Error::NotFactorial {
            kernel_dim: abs.kernel_dim(),
        });
    }
    let d = abs.polariser();
    let d_inv = inverse(d)?;
    let root = sym_sqrt(&(Mat::identity(n, n) + d * d));
    let s = &d_inv * &root;
    let iota = block2(&d_inv, &s, &(-&s), &(-&d_inv));
    let beta_hat = block2(d, &Mat::zeros(n, n), &Mat::zeros(n, n), &(-d));
    let g = &beta_hat * &iota;
    let alpha_hat = (&g + g.transpose()) * 0.5;
    spd_check(&alpha_hat)?;
    let g_sqrt = sym_sqrt(&alpha_hat);
    let g_inv_sqrt = spd_inv_sqrt(&alpha_hat)?;
    let i_op = &g_sqrt * &iota * &g_inv_sqrt;
    let i_op = (&i_op - i_op.transpose()) * 0.5;
    let space = RealifiedSpace::with_complex_structure(i_op)?;
    let kappa = &g_sqrt * embed_top(abs.alpha_sqrt());
    let subspace = StandardSubspace::from_basis(&space, &kappa)?;
    Ok(SymplecticDilation {
        dilation: Dilation {
            space,
            kappa,
            subspace,
        },
        alpha_hat,
        beta_hat,
        iota,
    })
}

fn embed_top(m: &Mat) -> Mat {
    let n = m.nrows();
    let mut out = Mat::zeros(2 * n, m.ncols());
    out.view_mut((0, 0), (n, m.ncols())).copy_from(m);
    out
}

/// Complex-linear `U` with `U κ₁(h) = κ₂(h)`, after checking both Grams agree.
pub fn one_particle_unitary(k1: &Dilation, k2: &Dilation) -> Result<Mat> {
    if k1.kappa.ncols() != k2.kappa.ncols() || k1.space.real_dim() != k2.space.real_dim() {
        return Err(dim_mismatch(
            format!("{}x{}", k1.kappa.nrows(), k1.kappa.ncols()),
            format!("{}x{}", k2.kappa.nrows(), k2.kappa.ncols()),
        ));
    }
    let ga = frobenius(&(k1.kappa.transpose() * &k1.kappa - k2.kappa.transpose() * &k2.kappa));
    let gb = frobenius(&(k1.space.beta_gram(&k1.kappa) - k2.space.beta_gram(&k2.kappa)));
    let scale = 1.0 + frobenius(&(k1.kappa.transpose() * &k1.kappa));
    for (name, r) in [("alpha Grams agree", ga), ("beta Grams agree", gb)] {
        if r > 1e-9 * scale {
            return Err(Error::Consistency {
                name: name.into(),
                residual: r,
                tolerance: 1e-9 * scale,
            });
        }
    }
    let m1 = hcat(&k1.kappa, &(k1.space.i_op() * &k1.kappa));
    let m2 = hcat(&k2.kappa, &(k2.space.i_op() * &k2.kappa));
    Ok(m2 * inverse(&m1)?)
}
