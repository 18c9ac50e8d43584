//! Gaussian states on a fixed symplectic space and their quasi-equivalence criteria.
//!
//! Two states share `β` and differ in `α_k` (Grams `A_k`, `B`). All criterion
//! operators act on the common vector space `H` in original coordinates; their
//! Hilbert–Schmidt norms are taken as maps `(H, α₁) → (H, α₂)`, i.e.
//! `‖A₂^{1/2} X A₁^{-1/2}‖_F`.
//!
//! Functions of the modular Hamiltonians are evaluated through the real-linear
//! calculus on each orthogonal dilation and transported back by `C_k = A_k^{1/2}`
//! (the frame of `H ⊂ ℋ_k` is `Q_k` with `κ_k = Q_k C_k`).
//!
//! Shorthand in criterion names: `R_k = √(1+D_k²)`, `S_k = D_k⁻¹R_k`,
//! `dDinv = D₁⁻¹ − D₂⁻¹`, `dR = R₁ − R₂`, `dS = S₁ − S₂`. The two conditions are
//! `dDinv − R₂ dS` (a) and `D₂ dS` (b).

pub mod fock;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::bogoliubov::implementability_conditions;
use crate::dilation::{orthogonal_dilation, symplectic_dilation, AbstractSubspace, Dilation};
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{frobenius, inverse, op_norm, spd_inv_sqrt, sym_sqrt, Mat, Vector};
use crate::realop::{even_calculus, odd_calculus};
use crate::report::IdentityReport;
use crate::sampling::{random_spd, SeededRng};
use crate::stdspace::ModularData;

pub use fock::TruncatedFock;

/// Tolerance for the exact identities of the criterion chain.
pub const CHAIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GaussianState {
    abs: AbstractSubspace,
}

impl GaussianState {
    pub fn new(abs: AbstractSubspace) -> Self {
        Self { abs }
    }

    pub fn from_grams(a: &Mat, b: &Mat) -> Result<Self> {
        Ok(Self::new(AbstractSubspace::new(a, b)?))
    }

    pub fn abs(&self) -> &AbstractSubspace {
        &self.abs
    }

    /// `φ_α(V(h)) = e^{-α(h,h)/2}`.
    pub fn kernel(&self, h: &Vector) -> Result<f64> {
        gaussian_kernel(self, h)
    }
}

pub fn gaussian_kernel(state: &GaussianState, h: &Vector) -> Result<f64> {
    let a = state.abs.gram_alpha();
    if h.len() != a.nrows() {
        return Err(dim_mismatch(a.nrows(), h.len()));
    }
    Ok((-0.5 * h.dot(&(a * h))).exp())
}

/// Two Gaussian states with a common `β` and `α₂ ≥ α₁·0.95`.
pub fn sample_pair(rng: &mut SeededRng, n: usize) -> Result<(GaussianState, GaussianState)> {
    let abs1 = AbstractSubspace::sample(rng, n)?;
    let p = random_spd(rng, n, 0.95, 2.0);
    let r = abs1.alpha_sqrt();
    let a2 = r * p * r;
    let a2 = (&a2 + a2.transpose()) * 0.5;
    let abs2 = AbstractSubspace::new(&a2, abs1.gram_beta())?;
    Ok((GaussianState::new(abs1), GaussianState::new(abs2)))
}

/// Polariser data of one state, in original coordinates.
#[derive(Debug, Clone)]
struct Side {
    c: Mat,
    c_inv: Mat,
    dilation: Dilation,
    md: ModularData,
    gen: Mat,
}

impl Side {
    fn new(state: &GaussianState) -> Result<Self> {
        let abs = &state.abs;
        if !abs.is_factorial() {
            return Err(Error::NotFactorial {
                kernel_dim: abs.kernel_dim(),
            });
        }
        let dilation = orthogonal_dilation(abs)?;
        let md = dilation.subspace.modular_data()?;
        let c = dilation.subspace.basis().transpose() * &dilation.kappa;
        let c_inv = inverse(&c)?;
        let gen = md.flow_generator();
        Ok(Self {
            c,
            c_inv,
            dilation,
            md,
            gen,
        })
    }

    fn to_original(&self, m: &Mat) -> Mat {
        &self.c_inv * m * &self.c
    }

    /// `ι f(A)|_H` for odd `f`, in original coordinates.
    fn odd(&self, f: impl Fn(f64) -> f64) -> Result<Mat> {
        Ok(self.to_original(&odd_calculus(&self.gen, f)?))
    }

    fn even(&self, f: impl Fn(f64) -> f64) -> Result<Mat> {
        Ok(self.to_original(&even_calculus(&self.gen, f)?))
    }
}

/// `D`, `D⁻¹`, `√(1+D²)`, `D⁻¹√(1+D²)` in original coordinates.
#[derive(Debug, Clone)]
pub struct PolariserOps {
    pub d: Mat,
    pub d_inv: Mat,
    pub root: Mat,
    pub s: Mat,
}

impl PolariserOps {
    /// Through `tanh`, `-coth`, `sech`, `-1/sinh` of `L/2` on the dilation.
    fn calculus(side: &Side) -> Result<Self> {
        Ok(Self {
            d: side.odd(|t| (t / 2.0).tanh())?,
            d_inv: side.odd(|t| -1.0 / (t / 2.0).tanh())?,
            root: side.even(|t| 1.0 / (t / 2.0).cosh())?,
            s: side.odd(|t| -1.0 / (t / 2.0).sinh())?,
        })
    }

    /// Directly from the Grams: `D = A⁻¹B`, `D⁻¹ = B⁻¹A`, and the square root
    /// conjugated through `A^{1/2}`.
    pub fn brute_force(abs: &AbstractSubspace) -> Result<Self> {
        let a = abs.gram_alpha();
        let b = abs.gram_beta();
        let n = a.nrows();
        let d = inverse(a)? * b;
        let d_inv = inverse(b)? * a;
        let ah = sym_sqrt(a);
        let ahi = spd_inv_sqrt(a)?;
        let inner = &ah * (Mat::identity(n, n) + &d * &d) * &ahi;
        let root = &ahi * sym_sqrt(&((&inner + inner.transpose()) * 0.5)) * &ah;
        let s = &d_inv * &root;
        Ok(Self { d, d_inv, root, s })
    }
}

fn check_pair(a1: &GaussianState, a2: &GaussianState) -> Result<()> {
    let (b1, b2) = (a1.abs.gram_beta(), a2.abs.gram_beta());
    if b1.shape() != b2.shape() {
        return Err(dim_mismatch(
            format!("{}x{}", b1.nrows(), b1.ncols()),
            format!("{}x{}", b2.nrows(), b2.ncols()),
        ));
    }
    let gap = frobenius(&(b1 - b2));
    if gap > 1e-12 * (1.0 + frobenius(b1)) {
        return Err(Error::InvalidArgument(format!(
            "the two states must share beta (Gram difference {gap:.3e})"
        )));
    }
    Ok(())
}

/// HS norms of the two quasi-equivalence conditions by the calculus route, with the brute-force values.
#[derive(Debug, Clone, Serialize)]
pub struct QeNorms {
    pub t1_norm: f64,
    pub t2_norm: f64,
    pub brute_t1_norm: f64,
    pub brute_t2_norm: f64,
    /// Largest HS norm of the operator difference between the two routes.
    pub route_residual: f64,
}

struct Pair {
    s1: Side,
    s2: Side,
    p1: PolariserOps,
    p2: PolariserOps,
}

impl Pair {
    fn new(a1: &GaussianState, a2: &GaussianState) -> Result<Self> {
        check_pair(a1, a2)?;
        let s1 = Side::new(a1)?;
        let s2 = Side::new(a2)?;
        let p1 = PolariserOps::calculus(&s1)?;
        let p2 = PolariserOps::calculus(&s2)?;
        Ok(Self { s1, s2, p1, p2 })
    }

    /// HS norm of `X: (H, α₁) → (H, α₂)`.
    fn hs(&self, x: &Mat) -> f64 {
        frobenius(&(&self.s2.c * x * &self.s1.c_inv))
    }

    /// HS norm of `X: (H, α_k) → (H, α_k)`.
    fn hs_on(&self, side: &Side, x: &Mat) -> f64 {
        frobenius(&(&side.c * x * &side.c_inv))
    }
}

fn t_operators(p1: &PolariserOps, p2: &PolariserOps) -> (Mat, Mat) {
    let ds = &p1.s - &p2.s;
    let t1 = (&p1.d_inv - &p2.d_inv) - &p2.root * &ds;
    let t2 = &p2.d * ds;
    (t1, t2)
}

pub fn qe_theorem_norms(a1: &GaussianState, a2: &GaussianState) -> Result<QeNorms> {
    let pair = Pair::new(a1, a2)?;
    let (t1, t2) = t_operators(&pair.p1, &pair.p2);
    let b1 = PolariserOps::brute_force(&a1.abs)?;
    let b2 = PolariserOps::brute_force(&a2.abs)?;
    let (u1, u2) = t_operators(&b1, &b2);
    Ok(QeNorms {
        t1_norm: pair.hs(&t1),
        t2_norm: pair.hs(&t2),
        brute_t1_norm: pair.hs(&u1),
        brute_t2_norm: pair.hs(&u2),
        route_residual: pair.hs(&(&t1 - &u1)).max(pair.hs(&(&t2 - &u2))),
    })
}

/// One criterion quantity with the identities that tie it to its neighbours.
#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub criterion: String,
    pub value: f64,
    pub identity_residuals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone)]
pub struct QeChain {
    pub criteria: Vec<Criterion>,
    pub report: IdentityReport,
}

impl QeChain {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.criteria
            .iter()
            .find(|c| c.criterion == name)
            .map(|c| c.value)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.criteria)?)
    }
}

/// Every criterion quantity of the quasi-equivalence chain, with the exact matrix
/// identities relating them.
pub fn qe_corollary_chain(a1: &GaussianState, a2: &GaussianState) -> Result<QeChain> {
    let pair = Pair::new(a1, a2)?;
    let (p1, p2) = (&pair.p1, &pair.p2);
    let mut criteria = Vec::new();
    let mut report = IdentityReport::default();
    let rel = |x: &Mat, y: &Mat| pair.hs(&(x - y)) / (1.0 + pair.hs(y));

    let mut add = |name: &str, value: f64, ids: Vec<(&str, f64)>, rep: &mut IdentityReport| {
        let mut map = BTreeMap::new();
        for (k, v) in ids {
            rep.push(format!("{name}: {k}"), v, CHAIN_TOL);
            map.insert(k.to_string(), v);
        }
        criteria.push(Criterion {
            criterion: name.into(),
            value,
            identity_residuals: map,
        });
    };

    let (t1, t2) = t_operators(p1, p2);
    let b1 = PolariserOps::brute_force(&a1.abs)?;
    let b2 = PolariserOps::brute_force(&a2.abs)?;
    let (u1, u2) = t_operators(&b1, &b2);

    // Cross-check against the symplectic-dilation commutator blocks of the identity map.
    let sd1 = symplectic_dilation(&a1.abs)?.dilation;
    let sd2 = symplectic_dilation(&a2.abs)?.dilation;
    let m1 = sd1.subspace.modular_data()?;
    let m2 = sd2.subspace.modular_data()?;
    let frame1 = sd1.subspace.basis().transpose() * &sd1.kappa;
    let frame2 = sd2.subspace.basis().transpose() * &sd2.kappa;
    let blocks = implementability_conditions(&(&frame2 * inverse(&frame1)?), &m1, &m2)?;

    let (t1n, t2n) = (pair.hs(&t1), pair.hs(&t2));
    add(
        "condition a: dDinv - R2 dS",
        t1n,
        vec![
            ("brute force", rel(&t1, &u1)),
            (
                "Shale block of the identity map",
                (t1n - blocks.cond_a).abs() / (1.0 + t1n),
            ),
        ],
        &mut report,
    );
    add(
        "condition b: D2 dS",
        t2n,
        vec![
            ("brute force", rel(&t2, &u2)),
            (
                "Shale block of the identity map",
                (t2n - blocks.cond_b).abs() / (1.0 + t2n),
            ),
        ],
        &mut report,
    );

    // dDinv through the cutting projections and the calculus.
    let d_dinv = &p1.d_inv - &p2.d_inv;
    let pi = |side: &Side| -> Result<Mat> {
        let q = side.dilation.subspace.basis();
        let p = side.md.cutting_p()?.op;
        Ok(side.to_original(&(q.transpose() * p * side.dilation.space.i_op() * q)))
    };
    let pi_diff = pi(&pair.s1)? - pi(&pair.s2)?;
    let coth2_diff = pair.s1.odd(|t| 1.0 / (t / 2.0).tanh())? - pair.s2.odd(|t| 1.0 / (t / 2.0).tanh())?;
    add(
        "dDinv = D1^-1 - D2^-1",
        pair.hs(&d_dinv),
        vec![
            ("P1 i1|_H - P2 i2|_H = dDinv", rel(&pi_diff, &d_dinv)),
            ("i coth(L/2) difference = -dDinv", rel(&(-&coth2_diff), &d_dinv)),
            ("brute force", rel(&(&b1.d_inv - &b2.d_inv), &d_dinv)),
        ],
        &mut report,
    );

    // R2 dS and S2 dR.
    let ds = &p1.s - &p2.s;
    let r2_ds = &p2.root * &ds;
    let dr = &p1.root - &p2.root;
    let s2_dr = &p2.s * &dr;
    add(
        "R2 dS",
        pair.hs(&r2_ds),
        vec![
            ("condition a = dDinv - R2 dS", rel(&(&d_dinv - &r2_ds), &t1)),
            (
                "R2 dS - S2 dR = R2 dDinv R1",
                rel(&(&r2_ds - &s2_dr), &(&p2.root * &d_dinv * &p1.root)),
            ),
        ],
        &mut report,
    );
    add("S2 dR", pair.hs(&s2_dr), vec![], &mut report);

    // dR by Gram functions and by the modular calculus.
    let sech = pair.s1.even(|t| 1.0 / (t / 2.0).cosh())? - pair.s2.even(|t| 1.0 / (t / 2.0).cosh())?;
    let brute_dr = &b1.root - &b2.root;
    add(
        "dR = sqrt(1+D1^2) - sqrt(1+D2^2)",
        pair.hs(&dr),
        vec![
            ("1/cosh(L/2) difference = dR", rel(&sech, &brute_dr)),
            (
                "condition b - dR = D2 dDinv R1",
                rel(&(&t2 - &dr), &(&p2.d * &d_dinv * &p1.root)),
            ),
        ],
        &mut report,
    );

    // D2^-1 dR, its lift through P2 i2, and dS.
    let dinv_dr = &p2.d_inv * &dr;
    let ds_op = ds.clone();
    let side2 = &pair.s2;
    let kappa2 = &side2.dilation.kappa;
    let i2 = side2.dilation.space.i_op();
    let p_2 = side2.md.cutting_p()?.op;
    let lifted = i2 * kappa2 * &dr;
    let lifted_proj = &side2.c_inv * side2.dilation.subspace.basis().transpose() * &p_2 * &lifted;
    let split = &lifted - kappa2 * &dinv_dr + side2.md.j() * kappa2 * (&p2.s * &dr);
    add(
        "D2^-1 dR",
        pair.hs(&dinv_dr),
        vec![
            ("P2 i2 dR|_H = D2^-1 dR", rel(&lifted_proj, &dinv_dr)),
            (
                "i2 Y|_H = D2^-1 Y - J2 S2 Y",
                frobenius(&(split * &pair.s1.c_inv)) / (1.0 + pair.hs(&dinv_dr)),
            ),
            (
                "D2^-1 dR - dS = (D2^-1 - D1^-1) R1",
                rel(&(&dinv_dr - &ds_op), &((&p2.d_inv - &p1.d_inv) * &p1.root)),
            ),
            (
                "S2 dR = R2 D2^-1 dR",
                rel(&s2_dr, &(&p2.root * &dinv_dr)),
            ),
        ],
        &mut report,
    );
    let csch_diff = pair.s1.odd(|t| 1.0 / (t / 2.0).sinh())? - pair.s2.odd(|t| 1.0 / (t / 2.0).sinh())?;
    add(
        "dS = S1 - S2",
        pair.hs(&ds_op),
        vec![
            ("i/sinh(L/2) difference = -dS", rel(&(-&csch_diff), &ds_op)),
            ("brute force", rel(&(&b1.s - &b2.s), &ds_op)),
        ],
        &mut report,
    );

    // Quarter-angle coth and the coth - tanh step.
    let coth4 = |side: &Side| side.odd(|t| 1.0 / (t / 4.0).tanh());
    let tanh4 = |side: &Side| side.odd(|t| (t / 4.0).tanh());
    let csch2 = |side: &Side| side.odd(|t| 2.0 / (t / 2.0).sinh());
    let (k1, k2) = (coth4(&pair.s1)?, coth4(&pair.s2)?);
    let (h1, h2) = (tanh4(&pair.s1)?, tanh4(&pair.s2)?);
    let coth4_diff = &k1 - &k2;
    let step1 = pair.hs_on(&pair.s1, &(&k1 - &h1 - csch2(&pair.s1)?));
    let step2 = pair.hs_on(&pair.s2, &(&k2 - &h2 - csch2(&pair.s2)?));
    let n1 = pair.hs_on(&pair.s1, &k1);
    let n2 = pair.hs_on(&pair.s2, &k2);
    let inv1 = pair.hs_on(&pair.s1, &(inverse(&k1)? + &h1)) / (1.0 + n1);
    let inv2 = pair.hs_on(&pair.s2, &(inverse(&k2)? + &h2)) / (1.0 + n2);
    let a_diff = &k1 - &k2;
    let a_rhs = &k1 * (inverse(&k2)? - inverse(&k1)?) * &k2;
    add(
        "i coth(L/4) difference",
        pair.hs(&coth4_diff),
        vec![
            ("coth(L1/4) - tanh(L1/4) = 2/sinh(L1/2)", step1 / (1.0 + n1)),
            ("coth(L2/4) - tanh(L2/4) = 2/sinh(L2/2)", step2 / (1.0 + n2)),
            ("(i coth(L1/4))^-1 = -i tanh(L1/4)", inv1),
            ("(i coth(L2/4))^-1 = -i tanh(L2/4)", inv2),
            ("A1 - A2 = A1 (A2^-1 - A1^-1) A2", rel(&a_diff, &a_rhs)),
            (
                "i coth(L/4) diff - i tanh(L/4) diff = 2i/sinh(L/2) diff",
                rel(&(&coth4_diff - (&h1 - &h2)), &(csch2(&pair.s1)? - csch2(&pair.s2)?)),
            ),
        ],
        &mut report,
    );

    Ok(QeChain { criteria, report })
}

/// `‖D₁ − T D₂‖` where `α₂(h, k) = α₁(h, T k)`.
pub fn polariser_rescaling_residual(a1: &Mat, b: &Mat, t: &Mat) -> Result<f64> {
    let a2 = a1 * t;
    let a2 = (&a2 + a2.transpose()) * 0.5;
    let d1 = AbstractSubspace::new(a1, b)?.polariser_original();
    let d2 = AbstractSubspace::new(&a2, b)?.polariser_original();
    Ok(frobenius(&(&d1 - t * d2)) / (1.0 + op_norm(&d1)))
}

/// `|φ_α(V(Δ^{is}h)) − φ_α(V(h))|` with the modular flow of the orthogonal dilation.
pub fn modular_flow_invariance(state: &GaussianState, h: &Vector, s: f64) -> Result<f64> {
    let dil = orthogonal_dilation(&state.abs)?;
    let md = dil.subspace.modular_data()?;
    let c = dil.subspace.basis().transpose() * &dil.kappa;
    let flow = inverse(&c)? * md.flow_on_h(s) * &c;
    Ok((state.kernel(&(flow * h))? - state.kernel(h)?).abs())
}

/// `G_ij = φ_α(V(h_i)* V(h_j)) = e^{iβ(h_i,h_j)} e^{-α(h_j − h_i)/2}` over the columns.
pub fn kernel_gram(state: &GaussianState, family: &Mat) -> Result<DMatrix<Complex64>> {
    let a = state.abs.gram_alpha();
    let b = state.abs.gram_beta();
    if family.nrows() != a.nrows() {
        return Err(dim_mismatch(a.nrows(), family.nrows()));
    }
    let m = family.ncols();
    Ok(DMatrix::from_fn(m, m, |i, j| {
        let hi = family.column(i);
        let hj = family.column(j);
        let diff = hj - hi;
        let beta = hi.dot(&(b * hj));
        let alpha = diff.dot(&(a * &diff));
        Complex64::from_polar((-0.5 * alpha).exp(), beta)
    }))
}

pub fn min_eigenvalue(g: &DMatrix<Complex64>) -> f64 {
    let h = (g + g.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{gaussian_matrix, rng};

    fn scaled(b: f64, c: f64) -> GaussianState {
        let r = Mat::from_row_slice(2, 2, &[0.0, b, -b, 0.0]);
        GaussianState::from_grams(&(Mat::identity(2, 2) * c), &r).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let s = scaled(0.5, 1.0);
        let h = Vector::from_vec(vec![0.6, 0.8]);
        assert_eq!(s.kernel(&Vector::zeros(2)).unwrap(), 1.0);
        assert!((s.kernel(&h).unwrap() - (-0.5_f64).exp()).abs() < 1e-15);
        let s4 = scaled(0.5, 4.0);
        assert!((s4.kernel(&h).unwrap() - s.kernel(&h).unwrap().powi(4)).abs() < 1e-15);
    }

    #[test]
    fn equal_states_have_zero_criteria() {
        let s = scaled(0.5, 1.0);
        let q = qe_theorem_norms(&s, &s).unwrap();
        assert!(q.t1_norm < 1e-12 && q.t2_norm < 1e-12);
        let chain = qe_corollary_chain(&s, &s).unwrap();
        assert!(chain.criteria.iter().all(|c| c.value < 1e-12));
    }

    #[test]
    fn scalar_closed_form() {
        let (b, c1, c2) = (0.5_f64, 1.0_f64, 1.2_f64);
        let q = qe_theorem_norms(&scaled(b, c1), &scaled(b, c2)).unwrap();
        let g1 = (c1 * c1 - b * b).sqrt();
        let g2 = (c2 * c2 - b * b).sqrt();
        let root2 = (1.0 - b * b / (c2 * c2)).sqrt();
        let t1 = -(c1 - c2) / b + root2 * (g1 - g2) / b;
        let t2 = (g1 - g2) / c2;
        let scale = (c2 / c1).sqrt() * 2.0_f64.sqrt();
        assert!((q.t1_norm - scale * t1.abs()).abs() < 1e-12, "{q:?}");
        assert!((q.t2_norm - scale * t2.abs()).abs() < 1e-12);
    }

    #[test]
    fn scaling_family_chain() {
        for c in [1.1, 2.0] {
            let chain = qe_corollary_chain(&scaled(0.5, 1.0), &scaled(0.5, c)).unwrap();
            assert!(chain.report.all_pass(), "{:?}", chain.report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn random_pair_chain() {
        let mut r = rng(11);
        let (s1, s2) = sample_pair(&mut r, 8).unwrap();
        let q = qe_theorem_norms(&s1, &s2).unwrap();
        assert!(q.route_residual < 1e-10, "{q:?}");
        let chain = qe_corollary_chain(&s1, &s2).unwrap();
        assert!(chain.report.all_pass(), "{:?}", chain.report.failures().collect::<Vec<_>>());
        assert!(chain.to_json().unwrap().contains("identity_residuals"));
    }

    #[test]
    fn rank_one_perturbation() {
        let mut r = rng(12);
        let abs = AbstractSubspace::sample(&mut r, 4).unwrap();
        let v = gaussian_matrix(&mut r, 4, 1);
        let a2 = abs.gram_alpha() + &v * v.transpose() * (0.1 / v.norm_squared());
        let s1 = GaussianState::new(abs.clone());
        let s2 = GaussianState::from_grams(&a2, abs.gram_beta()).unwrap();
        let q = qe_theorem_norms(&s1, &s2).unwrap();
        assert!(q.t1_norm.is_finite() && q.t1_norm > 0.0);
    }

    #[test]
    fn beta_mismatch_rejected() {
        let err = qe_theorem_norms(&scaled(0.5, 1.0), &scaled(0.4, 1.0)).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
        let flat = scaled(0.0, 1.0);
        assert!(matches!(
            qe_theorem_norms(&flat, &flat),
            Err(Error::NotFactorial { .. })
        ));
    }

    #[test]
    fn rescaling_law() {
        let mut r = rng(13);
        let abs = AbstractSubspace::sample(&mut r, 6).unwrap();
        let p = random_spd(&mut r, 6, 1.0, 2.0);
        let t = abs.alpha_inv_sqrt() * p * abs.alpha_sqrt();
        let res = polariser_rescaling_residual(abs.gram_alpha(), abs.gram_beta(), &t).unwrap();
        assert!(res < 1e-10);
    }

    #[test]
    fn flow_invariance_and_positivity() {
        let mut r = rng(14);
        let state = GaussianState::new(AbstractSubspace::sample(&mut r, 6).unwrap());
        let h = gaussian_matrix(&mut r, 6, 1).column(0).into_owned();
        for s in [0.3, 1.0, 2.5] {
            assert!(modular_flow_invariance(&state, &h, s).unwrap() < 1e-10);
        }
        let fam = gaussian_matrix(&mut r, 6, 12);
        let g = kernel_gram(&state, &fam).unwrap();
        assert!(min_eigenvalue(&g) >= -1e-10);
    }
}
