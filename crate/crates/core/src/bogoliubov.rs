//! Symplectic maps between standard subspaces and their Hilbert–Schmidt blocks.
//!
//! Maps `T: H₁ → H₂` are given in the orthonormal frames `Q₁`, `Q₂` of the two
//! subspaces, so `T` is symplectic iff `Tᵀ D₂ T = D₁`. The extension
//! `T̃(h + J₁k) = Th + J₂Tk` and the one-sided extension `T̂ = T ⊕ 1` are assembled
//! with cutting projections as operators on the ambient spaces. Commutators with
//! `i` are compressed to the orthonormal frames `[Q, iJQ]` of `H ⊕ H^⊥`, where
//! their blocks have closed forms in `D`, `D⁻¹` and `√(1+D²)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{frobenius, inverse, op_norm, Mat};
use crate::realop::{odd_calculus, RealifiedSpace};
use crate::report::IdentityReport;
use crate::sampling::{random_symmetric, SeededRng};
use crate::stdspace::{ModularData, StandardSubspace};

/// Tolerance for agreement of closed-form blocks with direct compressions.
pub const BLOCK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymplecticCheck {
    /// `‖Tᵀ D₂ T − D₁‖`.
    pub residual: f64,
    /// `‖Tᵀ D₂ − D₁ T⁻¹‖`.
    pub inverse_residual: f64,
    pub symplectic: bool,
}

pub fn check_symplectic(
    t: &Mat,
    h1: &StandardSubspace,
    h2: &StandardSubspace,
) -> Result<SymplecticCheck> {
    check_symplectic_polarisers(t, &h1.polariser(), &h2.polariser())
}

pub fn check_symplectic_polarisers(t: &Mat, d1: &Mat, d2: &Mat) -> Result<SymplecticCheck> {
    if t.nrows() != d2.nrows() || t.ncols() != d1.nrows() {
        return Err(dim_mismatch(
            format!("{}x{}", d2.nrows(), d1.nrows()),
            format!("{}x{}", t.nrows(), t.ncols()),
        ));
    }
    let t_inv = inverse(t)?;
    let residual = frobenius(&(t.transpose() * d2 * t - d1));
    let inverse_residual = frobenius(&(t.transpose() * d2 - d1 * t_inv));
    Ok(SymplecticCheck {
        residual,
        inverse_residual,
        symplectic: residual <= 1e-10 * (1.0 + op_norm(t).powi(2)),
    })
}

fn require_symplectic(t: &Mat, d1: &Mat, d2: &Mat) -> Result<()> {
    let chk = check_symplectic_polarisers(t, d1, d2)?;
    let tol = 1e-9 * (1.0 + op_norm(t).powi(2));
    if chk.residual > tol {
        return Err(Error::Consistency {
            name: "T* D2 T = D1".into(),
            residual: chk.residual,
            tolerance: tol,
        });
    }
    Ok(())
}

/// `T̃ = Q₂TQ₁ᵀ P₁ + J₂Q₂TQ₁ᵀJ₁ (1 − P₁)`, checked to be symplectic on the ambient spaces.
pub fn extend_tilde(t: &Mat, m1: &ModularData, m2: &ModularData) -> Result<Mat> {
    let (d1, d2) = (m1.polariser(), m2.polariser());
    require_symplectic(t, &d1, &d2)?;
    let p1 = m1.cutting_p()?.op;
    m2.cutting_p()?;
    let q1 = m1.subspace().basis();
    let q2 = m2.subspace().basis();
    let core = q2 * t * q1.transpose();
    let dim1 = p1.nrows();
    let tt = &core * &p1 + m2.j() * &core * m1.j() * (Mat::identity(dim1, dim1) - &p1);
    let i1 = m1.subspace().ambient().i_op();
    let i2 = m2.subspace().ambient().i_op();
    let r = frobenius(&(tt.transpose() * i2 * &tt - i1));
    let tol = 1e-9 * (1.0 + op_norm(&tt).powi(2));
    if r > tol {
        return Err(Error::Consistency {
            name: "T~ symplectic on the ambient space".into(),
            residual: r,
            tolerance: tol,
        });
    }
    Ok(tt)
}

/// `T̂ = Q T Qᵀ P + (1 − P)`.
pub fn extend_hat(t: &Mat, m: &ModularData) -> Result<Mat> {
    let p = m.cutting_p()?.op;
    let q = m.subspace().basis();
    let dim = p.nrows();
    Ok(q * t * q.transpose() * &p + Mat::identity(dim, dim) - &p)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShaleDefect {
    /// `‖T*T − 1‖₂`.
    pub hs_defect: f64,
    /// `‖[T, i]‖₂`.
    pub comm_defect: f64,
    /// `‖[T, i] − T i (1 − T*T)‖`.
    pub identity_residual: f64,
}

pub fn shale_defect(space: &RealifiedSpace, t: &Mat) -> Result<ShaleDefect> {
    let c = space.commutator_with_i(t)?;
    let d = space.real_dim();
    let gram = t.transpose() * t - Mat::identity(d, d);
    let identity = &c + t * space.i_op() * &gram;
    Ok(ShaleDefect {
        hs_defect: frobenius(&gram),
        comm_defect: frobenius(&c),
        identity_residual: frobenius(&identity),
    })
}

/// Orthonormal frame `[Q, iJQ]` of `H ⊕ H^⊥`.
fn split_frame(m: &ModularData) -> (Mat, Mat) {
    let q = m.subspace().basis().clone();
    let ijq = m.subspace().ambient().i_op() * m.complement_frame();
    (q, ijq)
}

fn compress(c: &Mat, m1: &ModularData, m2: &ModularData) -> [Mat; 4] {
    let (q1, r1) = split_frame(m1);
    let (q2, r2) = split_frame(m2);
    [
        q2.transpose() * c * &q1,
        q2.transpose() * c * &r1,
        r2.transpose() * c * &q1,
        r2.transpose() * c * &r1,
    ]
}

/// Commutator blocks of an extension with `i`, by direct compression and by closed form.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorBlocks {
    #[serde(skip)]
    pub direct: [Mat; 4],
    #[serde(skip)]
    pub closed: [Mat; 4],
    pub block_norms: [f64; 4],
    /// `‖[T̃, i]‖₂` (or `‖[T̂, i]‖₂`).
    pub commutator_hs: f64,
    pub cond_a: f64,
    pub cond_b: f64,
    pub report: IdentityReport,
}

impl CommutatorBlocks {
    fn assemble(
        c: &Mat,
        direct: [Mat; 4],
        closed: [Mat; 4],
        cond: (f64, f64),
        mut report: IdentityReport,
        labels: [&str; 4],
    ) -> Result<Self> {
        let block_norms = [0, 1, 2, 3].map(|k| frobenius(&direct[k]));
        let commutator_hs = frobenius(c);
        for k in 0..4 {
            let r = frobenius(&(&direct[k] - &closed[k])) / (1.0 + frobenius(&closed[k]));
            report.push(labels[k], r, BLOCK_TOL);
        }
        let sum_sq: f64 = block_norms.iter().map(|v| v * v).sum();
        report.push(
            "||C||_2^2 = sum of block norms squared",
            (commutator_hs * commutator_hs - sum_sq).abs() / (1.0 + sum_sq),
            BLOCK_TOL,
        );
        if let Some(bad) = report.failures().next() {
            return Err(Error::Consistency {
                name: bad.identity_name.clone(),
                residual: bad.residual,
                tolerance: bad.tolerance,
            });
        }
        Ok(Self {
            direct,
            closed,
            block_norms,
            commutator_hs,
            cond_a: cond.0,
            cond_b: cond.1,
            report,
        })
    }

    /// Largest closed-form versus direct residual.
    pub fn worst_residual(&self) -> f64 {
        self.report.worst_residual()
    }
}

/// Blocks of `[T̃, i]` for `T: H₁ → H₂`. With `X = TS₁ − S₂T`, `Y = TD₁⁻¹ − D₂⁻¹T`
/// and `S = D⁻¹√(1+D²)` the compressions to `[Q, iJQ]` are
/// `[[Y − √₂X, D₂X], [D₂X, Y − √₂X]]`; conditions a) and b) are the norms of the
/// first row.
pub fn implementability_conditions(
    t: &Mat,
    m1: &ModularData,
    m2: &ModularData,
) -> Result<CommutatorBlocks> {
    let tt = extend_tilde(t, m1, m2)?;
    let i1 = m1.subspace().ambient().i_op();
    let i2 = m2.subspace().ambient().i_op();
    let c = &tt * i1 - i2 * &tt;
    let f1 = m1.polariser_functions()?;
    let f2 = m2.polariser_functions()?;
    let x = t * &f1.s - &f2.s * t;
    let y = t * &f1.d_inv - &f2.d_inv * t;
    let a = &y - &f2.root * &x;
    let b = &f2.d * &x;
    let closed = [a.clone(), b.clone(), b.clone(), a.clone()];
    let direct = compress(&c, m1, m2);
    let mut report = IdentityReport::default();
    report.push(
        "i2 [T~, i] i1 = [T~, i]",
        frobenius(&(i2 * &c * i1 - &c)) / (1.0 + frobenius(&c)),
        BLOCK_TOL,
    );
    CommutatorBlocks::assemble(
        &c,
        direct,
        closed,
        (frobenius(&a), frobenius(&b)),
        report,
        [
            "tilde block 1: [T~,i] H->H = Y - sqrt(1+D2^2) X",
            "tilde block 2: [T~,i] H^perp->H = D2 X",
            "tilde block 3: [T~,i] H->H^perp = D2 X",
            "tilde block 4: [T~,i] H^perp->H^perp = Y - sqrt(1+D2^2) X",
        ],
    )
}

/// One-space case `H₁ = H₂`.
pub fn tilde_commutator_blocks(t: &Mat, m: &ModularData) -> Result<CommutatorBlocks> {
    implementability_conditions(t, m, m)
}

/// Blocks of `[T̂, i]` for `T = 1 + X`:
/// `[[XD⁻¹ + DX, DXS], [-√(1+D²)X, -√(1+D²)XS]]` in the frame `[Q, iJQ]`.
pub fn innerness_blocks(x: &Mat, m: &ModularData) -> Result<CommutatorBlocks> {
    let n = m.subspace().dim();
    if x.nrows() != n || x.ncols() != n {
        return Err(dim_mismatch(
            format!("{n}x{n}"),
            format!("{}x{}", x.nrows(), x.ncols()),
        ));
    }
    let t = Mat::identity(n, n) + x;
    let d = m.polariser();
    require_symplectic(&t, &d, &d)?;
    let th = extend_hat(&t, m)?;
    let i = m.subspace().ambient().i_op();
    let c = &th * i - i * &th;
    let f = m.polariser_functions()?;
    let inn1 = x * &f.d_inv + &f.d * x;
    let inn2 = &f.d * x * &f.s;
    let inn3 = &f.root * x;
    let inn4 = &f.root * x * &f.s;
    let mut report = IdentityReport::default();
    let comm = x * &f.d_inv - &f.d_inv * x;
    let simplified = &comm + (&f.d_inv + &f.d) * x;
    report.push(
        "[X, D^-1] + (D^-1 + D) X = X D^-1 + D X",
        frobenius(&(&simplified - &inn1)) / (1.0 + frobenius(&inn1)),
        BLOCK_TOL,
    );
    let gen = m.flow_generator();
    let csch = odd_calculus(&gen, |t| -2.0 / t.sinh())?;
    report.push(
        "D^-1 + D = -2i/sinh(L)|_H",
        frobenius(&(&csch - (&f.d_inv + &f.d))) / (1.0 + op_norm(&f.d_inv)),
        BLOCK_TOL,
    );
    let direct = compress(&c, m, m);
    let cond = (frobenius(&inn1), frobenius(&inn2));
    CommutatorBlocks::assemble(
        &c,
        direct,
        [inn1, inn2, -inn3, -inn4],
        cond,
        report,
        [
            "inner block 1: X D^-1 + D X",
            "inner block 2: D X D^-1 sqrt(1+D^2)",
            "inner block 3: sqrt(1+D^2) X",
            "inner block 4: sqrt(1+D^2) X D^-1 sqrt(1+D^2)",
        ],
    )
}

/// `W` with `Wᵀ D W = ⊕ [[0, 1], [-1, 0]]` for a nonsingular skew `D`.
pub fn darboux_frame(d: &Mat) -> Result<Mat> {
    let n = d.nrows();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "skew form in odd dimension {n} is degenerate"
        )));
    }
    // Eigenvectors z = x + iy of the Hermitian -iD with eigenvalue σ > 0 give Dx = -σy, Dy = σx.
    let a: DMatrix<Complex64> = d.map(|v| Complex64::new(0.0, -v));
    let eig = SymmetricEigen::new(a);
    let mut w = Mat::zeros(n, n);
    let mut col = 0;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| eig.eigenvalues[q].total_cmp(&eig.eigenvalues[p]));
    for &k in order.iter().take(n / 2) {
        let sigma = eig.eigenvalues[k];
        if sigma <= 1e-12 {
            return Err(Error::NotFactorial {
                kernel_dim: n - 2 * col,
            });
        }
        let z = eig.eigenvectors.column(k);
        let s = (2.0 / sigma).sqrt();
        for r in 0..n {
            w[(r, col)] = z[r].re * s;
            w[(r, col + 1)] = z[r].im * s;
        }
        col += 2;
    }
    Ok(w)
}

/// `exp(D⁻¹Y)` with `Y` symmetric of size `scale`: symplectic for `D`.
pub fn random_symplectic(rng: &mut SeededRng, d: &Mat, scale: f64) -> Result<Mat> {
    let y = random_symmetric(rng, d.nrows(), scale);
    Ok((inverse(d)? * y).exp())
}

/// Symplectic bijection `H₁ → H₂` between two nondegenerate polarisers.
pub fn random_symplectic_between(
    rng: &mut SeededRng,
    d1: &Mat,
    d2: &Mat,
    scale: f64,
) -> Result<Mat> {
    let w1 = darboux_frame(d1)?;
    let w2 = darboux_frame(d2)?;
    Ok(w2 * inverse(&w1)? * random_symplectic(rng, d1, scale)?)
}

/// `diag(s, 1/s)` on every canonical pair.
pub fn squeeze(pairs: usize, s: f64) -> Mat {
    let mut m = Mat::zeros(2 * pairs, 2 * pairs);
    for p in 0..pairs {
        m[(2 * p, 2 * p)] = s;
        m[(2 * p + 1, 2 * p + 1)] = 1.0 / s;
    }
    m
}

/// One row of a squeeze scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub s: f64,
    pub cond_a: f64,
    pub cond_b: f64,
    pub block_norm_1: f64,
    pub block_norm_2: f64,
    pub block_norm_3: f64,
    pub block_norm_4: f64,
}

impl ScanRow {
    pub fn new(n: usize, seed: u64, s: f64, blocks: &CommutatorBlocks) -> Self {
        let [b1, b2, b3, b4] = blocks.block_norms;
        Self {
            n,
            seed,
            s,
            cond_a: blocks.cond_a,
            cond_b: blocks.cond_b,
            block_norm_1: b1,
            block_norm_2: b2,
            block_norm_3: b3,
            block_norm_4: b4,
        }
    }
}

pub fn write_scan_csv<W: std::io::Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::{orthogonal_dilation, AbstractSubspace};
    use crate::sampling::rng;

    fn half() -> ModularData {
        let abs = AbstractSubspace::two_dim(0.5).unwrap();
        orthogonal_dilation(&abs)
            .unwrap()
            .subspace
            .modular_data()
            .unwrap()
    }

    fn random_md(seed: u64, n: usize) -> ModularData {
        let mut r = rng(seed);
        let abs = AbstractSubspace::sample(&mut r, n).unwrap();
        orthogonal_dilation(&abs)
            .unwrap()
            .subspace
            .modular_data()
            .unwrap()
    }

    #[test]
    fn symplectic_examples() {
        let md = half();
        let h = md.subspace();
        let id = Mat::identity(2, 2);
        let c = check_symplectic(&id, h, h).unwrap();
        assert!(c.symplectic && c.residual == 0.0);
        assert!(check_symplectic(&squeeze(1, 2.0), h, h).unwrap().symplectic);
        assert!(!check_symplectic(&(id * 2.0), h, h).unwrap().symplectic);
        assert!(check_symplectic(&Mat::zeros(2, 2), h, h).is_err());
    }

    #[test]
    fn tilde_of_identity_is_identity() {
        let md = half();
        let tt = extend_tilde(&Mat::identity(2, 2), &md, &md).unwrap();
        assert!(frobenius(&(tt - Mat::identity(4, 4))) < 1e-12);
        let b = tilde_commutator_blocks(&Mat::identity(2, 2), &md).unwrap();
        assert!(b.block_norms.iter().all(|&v| v < 1e-12));
    }

    #[test]
    fn squeeze_shale_closed_form() {
        let sp = RealifiedSpace::standard(1);
        let t = squeeze(1, 2.0);
        let sd = shale_defect(&sp, &t).unwrap();
        assert!((sd.hs_defect - (9.0_f64 + 9.0 / 16.0).sqrt()).abs() < 1e-12);
        assert!(sd.identity_residual < 1e-12);
        let u = shale_defect(&sp, sp.i_op()).unwrap();
        assert!(u.hs_defect < 1e-15 && u.comm_defect < 1e-15 && u.identity_residual < 1e-15);
    }

    #[test]
    fn squeeze_blocks_on_half_example() {
        let md = half();
        let b = tilde_commutator_blocks(&squeeze(1, 2.0), &md).unwrap();
        assert!(b.worst_residual() <= 1e-9);
        assert!(b.cond_a > 0.1 && b.cond_b > 0.1);
        let tt = extend_tilde(&squeeze(1, 2.0), &md, &md).unwrap();
        let sd = shale_defect(md.subspace().ambient(), &tt).unwrap();
        assert!(sd.identity_residual < 1e-10);
        assert!((sd.comm_defect - b.commutator_hs).abs() < 1e-12);
    }

    #[test]
    fn modular_flow_blocks_vanish() {
        let md = random_md(3, 6);
        let t = md.flow_on_h(0.7);
        let b = tilde_commutator_blocks(&t, &md).unwrap();
        assert!(b.block_norms.iter().all(|&v| v < 1e-10), "{:?}", b.block_norms);
        let f = md.polariser_functions().unwrap();
        assert!(frobenius(&(&t * &f.d_inv - &f.d_inv * &t)) < 1e-10);
    }

    #[test]
    fn random_one_space_blocks() {
        let md = random_md(4, 8);
        let mut r = rng(40);
        let t = random_symplectic(&mut r, &md.polariser(), 0.3).unwrap();
        let b = tilde_commutator_blocks(&t, &md).unwrap();
        assert!(b.report.all_pass(), "{:?}", b.report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn two_space_blocks() {
        let m1 = random_md(5, 6);
        let m2 = random_md(6, 6);
        let mut r = rng(7);
        let t =
            random_symplectic_between(&mut r, &m1.polariser(), &m2.polariser(), 0.2).unwrap();
        let tt = extend_tilde(&t, &m1, &m2).unwrap();
        assert!(inverse(&tt).is_ok());
        let b = implementability_conditions(&t, &m1, &m2).unwrap();
        assert!(b.report.all_pass());
    }

    #[test]
    fn innerness_examples() {
        let md = half();
        let zero = innerness_blocks(&Mat::zeros(2, 2), &md).unwrap();
        assert!(zero.block_norms.iter().all(|&v| v < 1e-14));
        let x = squeeze(1, 1.5) - Mat::identity(2, 2);
        let b = innerness_blocks(&x, &md).unwrap();
        assert!(b.worst_residual() <= 1e-9);
        let md = random_md(8, 6);
        let x = md.flow_on_h(0.4) - Mat::identity(6, 6);
        let b = innerness_blocks(&x, &md).unwrap();
        assert!(b.report.all_pass());
        assert!(innerness_blocks(&Mat::identity(6, 6), &md).is_err());
    }

    #[test]
    fn darboux_normal_form() {
        let md = random_md(9, 8);
        let d = md.polariser();
        let w = darboux_frame(&d).unwrap();
        let r = crate::linalg::symplectic_unit(4);
        assert!(frobenius(&(w.transpose() * d * w - r)) < 1e-10);
    }
}
