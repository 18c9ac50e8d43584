//! Standard subspaces of a realified complex space and their modular data.
//!
//! A real subspace `H ⊂ ℂ^N` is standard when `H ∩ iH = {0}` and `H + iH = ℂ^N`;
//! at finite dimension this forces `dim_ℝ H = N`. From a basis we build the
//! Tomita involution `S: h + ik ↦ h - ik`, its polar parts `Δ = S*S` and
//! `J = S Δ^{-1/2}`, the modular Hamiltonian `L = log Δ`, the orthogonal
//! projection `E_H`, the cutting projection `P_H` along `H'`, and the polariser
//! `D_H = -E_H i|_H`.
//!
//! Operators restricted to `H` are expressed in the orthonormal frame `Q` of `H`;
//! operators on `H'` use the frame `J Q`, in which `J` acts as the identity on
//! coefficients.

use serde::Serialize;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    frobenius, hcat, inverse, lowdin, op_norm, orthonormal_complement, rank, sym_eigen, sym_sqrt,
    Mat, Vector,
};
use crate::realop::{even_calculus, odd_calculus, RealifiedSpace};
use crate::report::IdentityReport;

/// Default absolute tolerance for identity residuals.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Guard band around 1 for the spectrum of `Δ` in the cutting projection.
pub const DELTA_GUARD: f64 = 1e-8;
/// Singular values of the polariser below this are treated as kernel.
pub const KERNEL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubspaceFlags {
    pub cyclic: bool,
    pub separating: bool,
    pub factorial: bool,
}

#[derive(Debug, Clone)]
pub struct StandardSubspace {
    ambient: RealifiedSpace,
    basis: Mat,
    complement: Mat,
    flags: SubspaceFlags,
    tol: f64,
}

impl StandardSubspace {
    /// Validates and orthonormalises a spanning family of `H`.
    pub fn from_basis(ambient: &RealifiedSpace, vectors: &Mat) -> Result<Self> {
        let d = ambient.real_dim();
        if vectors.nrows() != d {
            return Err(dim_mismatch(
                format!("{d} rows"),
                format!("{} rows", vectors.nrows()),
            ));
        }
        let k = vectors.ncols();
        if k == 0 || rank(vectors, 1e-12) != k {
            return Err(Error::InvalidArgument(
                "basis vectors are not real-linearly independent".into(),
            ));
        }
        let q = lowdin(vectors)?;
        let iq = ambient.i_op() * &q;
        let r = rank(&hcat(&q, &iq), 1e-10);
        if r < 2 * k {
            return Err(Error::NotSeparating {
                rank: r,
                expected: 2 * k,
            });
        }
        if r < d {
            return Err(Error::NotCyclic { rank: r, expected: d });
        }
        let polariser = -(q.transpose() * ambient.i_op() * &q);
        let smin = polariser.clone().svd(false, false).singular_values.min();
        let complement = orthonormal_complement(&lowdin(&iq)?);
        Ok(Self {
            ambient: ambient.clone(),
            basis: q,
            complement,
            flags: SubspaceFlags {
                cyclic: true,
                separating: true,
                factorial: smin > KERNEL_TOL,
            },
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn ambient(&self) -> &RealifiedSpace {
        &self.ambient
    }

    /// Orthonormal basis `Q` of `H` (columns).
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// Orthonormal basis of the symplectic complement `H' = (iH)^⊥`.
    pub fn complement_basis(&self) -> &Mat {
        &self.complement
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn flags(&self) -> SubspaceFlags {
        self.flags
    }

    pub fn is_factorial(&self) -> bool {
        self.flags.factorial
    }

    /// `D_H = -E_H i|_H` in the frame `Q`.
    pub fn polariser(&self) -> Mat {
        -(self.basis.transpose() * self.ambient.i_op() * &self.basis)
    }

    /// Orthogonal projection onto `H` from the Gram construction.
    pub fn projection(&self) -> Mat {
        &self.basis * self.basis.transpose()
    }

    pub fn contains(&self, v: &Vector, tol: f64) -> bool {
        let r = v - &self.basis * (self.basis.transpose() * v);
        r.norm() <= tol * (1.0 + v.norm())
    }

    /// Symplectic complement as a standard subspace in the same ambient space.
    pub fn complement(&self) -> Result<StandardSubspace> {
        Ok(StandardSubspace::from_basis(&self.ambient, &self.complement)?.with_tolerance(self.tol))
    }

    pub fn modular_data(&self) -> Result<ModularData> {
        ModularData::new(self)
    }
}

/// `S`, `Δ`, `J` and `L = log Δ` of a standard subspace, together with the subspace.
#[derive(Debug, Clone)]
pub struct ModularData {
    subspace: StandardSubspace,
    s: Mat,
    delta: Mat,
    j: Mat,
    eigenvalues: Vec<f64>,
    eigenvectors: Mat,
}

impl ModularData {
    fn new(h: &StandardSubspace) -> Result<Self> {
        let q = &h.basis;
        let i = h.ambient.i_op();
        let iq = i * q;
        let m = hcat(q, &iq);
        let m_inv = inverse(&m)?;
        let s = hcat(q, &(-&iq)) * m_inv;
        let delta = s.transpose() * &s;
        let eig = sym_eigen(&delta);
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(1e-300)).collect();
        let eigenvectors = eig.eigenvectors;
        let inv_sqrt = spectral(&eigenvectors, &eigenvalues, |l| 1.0 / l.sqrt());
        let j = &s * inv_sqrt;
        Ok(Self {
            subspace: h.clone(),
            s,
            delta,
            j,
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn subspace(&self) -> &StandardSubspace {
        &self.subspace
    }

    pub fn s(&self) -> &Mat {
        &self.s
    }

    pub fn delta(&self) -> &Mat {
        &self.delta
    }

    pub fn j(&self) -> &Mat {
        &self.j
    }

    /// Spectrum of `Δ` on the realified space (each complex eigenvalue appears twice).
    pub fn delta_spectrum(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `f(Δ)` for a real function of the spectrum.
    pub fn fn_delta(&self, f: impl Fn(f64) -> f64) -> Mat {
        spectral(&self.eigenvectors, &self.eigenvalues, f)
    }

    /// `f(L)` with `L = log Δ`.
    pub fn fn_log(&self, f: impl Fn(f64) -> f64) -> Mat {
        self.fn_delta(|l| f(l.ln()))
    }

    pub fn log_delta(&self) -> Mat {
        self.fn_log(|x| x)
    }

    pub fn delta_sqrt(&self) -> Mat {
        self.fn_delta(f64::sqrt)
    }

    /// Modular unitary `Δ^{is} = cos(sL) + i sin(sL)`.
    pub fn delta_it(&self, s: f64) -> Mat {
        let c = self.fn_log(|l| (s * l).cos());
        let sn = self.fn_log(|l| (s * l).sin());
        c + self.i() * sn
    }

    fn i(&self) -> &Mat {
        self.subspace.ambient.i_op()
    }

    fn q(&self) -> &Mat {
        &self.subspace.basis
    }

    /// Orthonormal frame `J Q` of `H'`.
    pub fn complement_frame(&self) -> Mat {
        &self.j * self.q()
    }

    pub fn tol(&self) -> f64 {
        self.subspace.tol
    }

    pub fn polariser(&self) -> Mat {
        self.subspace.polariser()
    }

    /// Skew generator `iL|_H` of the modular flow on `H`, in the frame `Q`.
    pub fn flow_generator(&self) -> Mat {
        self.q().transpose() * self.i() * self.log_delta() * self.q()
    }

    /// `Δ^{is}|_H` in the frame `Q`.
    pub fn flow_on_h(&self, s: f64) -> Mat {
        self.q().transpose() * self.delta_it(s) * self.q()
    }

    /// Smallest distance of the spectrum of `Δ` to 1, and the eigenvalue attaining it.
    pub fn gap_to_one(&self) -> (f64, f64) {
        self.eigenvalues
            .iter()
            .map(|&l| ((l - 1.0).abs() / l.max(1.0), l))
            .fold((f64::INFINITY, 1.0), |a, b| if b.0 < a.0 { b } else { a })
    }

    fn require_factorial(&self) -> Result<()> {
        let (gap, lambda) = self.gap_to_one();
        if gap <= DELTA_GUARD {
            return Err(Error::Singularity {
                eigenvalue: lambda,
                guard: DELTA_GUARD,
            });
        }
        if !self.subspace.is_factorial() {
            let k = self
                .polariser()
                .svd(false, false)
                .singular_values
                .iter()
                .filter(|&&s| s <= KERNEL_TOL)
                .count();
            return Err(Error::NotFactorial { kernel_dim: k });
        }
        Ok(())
    }

    /// `E_H` from the Gram construction, cross-checked against `(1+Δ)^{-1} + JΔ^{1/2}(1+Δ)^{-1}`.
    pub fn projection_e(&self) -> Result<CheckedOp> {
        let gram = self.subspace.projection();
        let formula = self.projection_e_formula();
        let residual = frobenius(&(&gram - &formula));
        let out = CheckedOp {
            op: gram,
            residuals: vec![("E_H modular formula = Gram projection".into(), residual)],
        };
        out.ensure(self.tol())?;
        Ok(out)
    }

    pub fn projection_e_formula(&self) -> Mat {
        let r = self.fn_delta(|l| 1.0 / (1.0 + l));
        &r + &self.j * self.delta_sqrt() * &r
    }

    /// Cutting projection `h + h' ↦ h`, built from the direct sum `H ⊕ H'` and
    /// cross-checked against `(1-Δ)^{-1} + JΔ^{1/2}(1-Δ)^{-1}` and `-E_H coth(L/2)`.
    pub fn cutting_p(&self) -> Result<CheckedOp> {
        self.require_factorial()?;
        let direct = self.cutting_p_direct()?;
        let fp = {
            let r = self.fn_delta(|l| 1.0 / (1.0 - l));
            &r + &self.j * self.delta_sqrt() * &r
        };
        let pe = -(self.subspace.projection() * self.fn_delta(|l| (l + 1.0) / (l - 1.0)));
        let scale = 1.0 + op_norm(&direct);
        let out = CheckedOp {
            residuals: vec![
                (
                    "P_H modular formula = direct cutting".into(),
                    frobenius(&(&direct - fp)) / scale,
                ),
                (
                    "P_H = -E_H coth(L/2)".into(),
                    frobenius(&(&direct - pe)) / scale,
                ),
            ],
            op: direct,
        };
        out.ensure(self.tol())?;
        Ok(out)
    }

    fn cutting_p_direct(&self) -> Result<Mat> {
        let q = self.q();
        let qc = self.subspace.complement_basis();
        let m = hcat(q, qc);
        let keep = hcat(q, &Mat::zeros(q.nrows(), qc.ncols()));
        Ok(keep * inverse(&m)?)
    }

    /// Polariser with the functional-calculus identity report.
    pub fn polariser_embedded(&self) -> Result<PolariserReport> {
        let tol = self.tol();
        let q = self.q().clone();
        let i = self.i().clone();
        let n = q.ncols();
        let id = Mat::identity(n, n);
        let d = self.polariser();
        let mut rep = IdentityReport::default();

        rep.push("D* = -D", frobenius(&(&d + d.transpose())), tol);
        rep.push("||D|| <= 1", (op_norm(&d) - 1.0).max(0.0), tol);

        let tanh_half = self.fn_delta(|l| (l - 1.0) / (l + 1.0));
        rep.push(
            "D = i tanh(L/2)|_H",
            frobenius(&(&i * &tanh_half * &q - &q * &d)),
            tol,
        );
        let gen = self.flow_generator();
        let d_calc = odd_calculus(&gen, |t| (t / 2.0).tanh())?;
        rep.push(
            "D = i tanh(L/2)|_H (real calculus)",
            frobenius(&(&d_calc - &d)),
            tol,
        );

        let one_plus_d2 = &id + &d * &d;
        let sqrt_1pd2 = sym_sqrt(&one_plus_d2);
        let sech = self.fn_delta(|l| 2.0 / (l.sqrt() + 1.0 / l.sqrt()));
        rep.push(
            "sqrt(1+D^2) = 1/cosh(L/2)|_H",
            frobenius(&(&sech * &q - &q * &sqrt_1pd2)),
            tol,
        );
        let sech_calc = even_calculus(&gen, |t| 1.0 / (t / 2.0).cosh())?;
        rep.push(
            "sqrt(1+D^2) = 1/cosh(L/2)|_H (real calculus)",
            frobenius(&(&sech_calc - &sqrt_1pd2)),
            tol,
        );

        let e = self.subspace.projection();
        let qc = self.subspace.complement_basis();
        let e_prime = qc * qc.transpose();
        let iq = &i * &q;
        let e_ih = &iq * iq.transpose();
        let ee_prime = &e * &e_prime * &q;
        rep.push(
            "E_H E_H'|_H = 1 + D^2",
            frobenius(&(&ee_prime - &q * &one_plus_d2)),
            tol,
        );
        let four = self.fn_delta(|l| 4.0 * l / ((1.0 + l) * (1.0 + l)));
        rep.push(
            "E_H E_H'|_H = 4 Delta (1+Delta)^-2|_H",
            frobenius(&(&ee_prime - &four * &q)),
            tol,
        );
        rep.push(
            "E_H E_H'|_H + E_H E_iH|_H = 1",
            frobenius(&(&ee_prime + &e * &e_ih * &q - &q)),
            tol,
        );

        if self.subspace.is_factorial() {
            let d_inv = inverse(&d)?;
            let scale = 1.0 + op_norm(&d_inv);
            match self.cutting_p() {
                Ok(p) => rep.push(
                    "D^-1 = P_H i|_H",
                    frobenius(&(&p.op * &iq - &q * &d_inv)) / scale,
                    tol,
                ),
                Err(err) => rep.notice(format!("D^-1 = P_H i|_H skipped: {err}")),
            }
            let coth_half = self.fn_delta(|l| (l + 1.0) / (l - 1.0));
            rep.push(
                "D^-1 = -i coth(L/2)|_H",
                frobenius(&(-(&i * &coth_half * &q) - &q * &d_inv)) / scale,
                tol,
            );
            let coth_calc = odd_calculus(&gen, |t| -1.0 / (t / 2.0).tanh())?;
            rep.push(
                "D^-1 = -i coth(L/2)|_H (real calculus)",
                frobenius(&(&coth_calc - &d_inv)) / scale,
                tol,
            );
            let lhs = &d_inv * &sqrt_1pd2;
            let csch = self.fn_delta(|l| 2.0 / (l.sqrt() - 1.0 / l.sqrt()));
            rep.push(
                "D^-1 sqrt(1+D^2) = -i/sinh(L/2)|_H",
                frobenius(&(-(&i * &csch * &q) - &q * &lhs)) / scale,
                tol,
            );
            let csch_calc = odd_calculus(&gen, |t| -1.0 / (t / 2.0).sinh())?;
            rep.push(
                "D^-1 sqrt(1+D^2) = -i/sinh(L/2)|_H (real calculus)",
                frobenius(&(&csch_calc - &lhs)) / scale,
                tol,
            );
        } else {
            rep.notice("subspace is not factorial: inverse polariser identities skipped");
        }

        Ok(PolariserReport {
            trace_one_plus_d2: one_plus_d2.trace(),
            factorial: self.subspace.is_factorial(),
            d,
            report: rep,
        })
    }

    /// Every modular identity at finite dimension: polariser relations, the
    /// fundamental relations of `S`, `Δ`, `J`, and both projection formulas.
    pub fn identity_report(&self) -> Result<IdentityReport> {
        let tol = self.tol();
        let d = self.subspace.ambient.real_dim();
        let id = Mat::identity(d, d);
        let i = self.i().clone();
        let q = self.q().clone();
        let e = self.subspace.projection();
        let mut rep = self.polariser_embedded()?.report;

        rep.push("S^2 = 1", frobenius(&(&self.s * &self.s - &id)), tol);
        rep.push("S antilinear", frobenius(&(&self.s * &i + &i * &self.s)), tol);
        rep.push("J antilinear", frobenius(&(&self.j * &i + &i * &self.j)), tol);
        rep.push("J^2 = 1", frobenius(&(&self.j * &self.j - &id)), tol);
        rep.push(
            "J orthogonal",
            frobenius(&(self.j.transpose() * &self.j - &id)),
            tol,
        );
        rep.push(
            "Delta complex-linear",
            frobenius(&(&self.delta * &i - &i * &self.delta)),
            tol,
        );
        let delta_inv = self.fn_delta(|l| 1.0 / l);
        let jdj = &self.j * &self.delta * &self.j;
        rep.push(
            "J Delta J = Delta^-1",
            frobenius(&(&jdj - &delta_inv)) / (1.0 + op_norm(&delta_inv)),
            tol,
        );
        let jq = &self.j * &q;
        let qc = self.subspace.complement_basis();
        let e_prime = qc * qc.transpose();
        rep.push("J H = H'", frobenius(&(&jq - &e_prime * &jq)), tol);
        for s in [0.3, 1.0, 2.7] {
            let u = self.delta_it(s);
            rep.push(
                format!("Delta^is H = H (s = {s})"),
                frobenius(&((&id - &e) * &u * &e)),
                tol,
            );
        }
        let pe = self.projection_e_formula();
        rep.push("E_H modular formula = Gram projection", frobenius(&(&e - &pe)), tol);

        if self.subspace.is_factorial() {
            let direct = self.cutting_p_direct()?;
            let scale = 1.0 + op_norm(&direct);
            let fp = {
                let r = self.fn_delta(|l| 1.0 / (1.0 - l));
                &r + &self.j * self.delta_sqrt() * &r
            };
            rep.push(
                "P_H modular formula = direct cutting",
                frobenius(&(&direct - fp)) / scale,
                tol,
            );
            let pe = -(&e * self.fn_delta(|l| (l + 1.0) / (l - 1.0)));
            rep.push(
                "P_H = -E_H coth(L/2)",
                frobenius(&(&direct - pe)) / scale,
                tol,
            );
            let comp = self.subspace.complement()?.modular_data()?;
            let p_comp = comp.cutting_p()?.op;
            rep.push(
                "P_H + P_H' = 1",
                frobenius(&(&direct + &p_comp - &id)) / scale,
                tol,
            );
            rep.push(
                "P_H i|_H in H",
                frobenius(&((&id - &e) * &direct * &i * &q)) / scale,
                tol,
            );
        } else {
            rep.notice("subspace is not factorial: cutting projection identities skipped");
        }
        Ok(rep)
    }

    /// Symplectic matrix decomposition of `C` over `H + H'` (frames `Q` and `JQ`).
    pub fn symplectic_blocks(&self, c: &Mat) -> Result<SymplecticBlocks> {
        let d = self.subspace.ambient.real_dim();
        if c.nrows() != d || c.ncols() != d {
            return Err(dim_mismatch(
                format!("{d}x{d}"),
                format!("{}x{}", c.nrows(), c.ncols()),
            ));
        }
        let p = self.cutting_p()?.op;
        let pc = Mat::identity(d, d) - &p;
        let q = self.q();
        let jq = self.complement_frame();
        Ok(SymplecticBlocks {
            c11: q.transpose() * &p * c * q,
            c12: q.transpose() * &p * c * &jq,
            c21: jq.transpose() * &pc * c * q,
            c22: jq.transpose() * &pc * c * &jq,
        })
    }

    /// Block forms of `i`, `E_H`, `E_{H⊥}`, `E_{H'}` and `P_{H'} i|_H` over `H + H'`.
    pub fn block_form_report(&self) -> Result<IdentityReport> {
        let tol = self.tol();
        let d = self.polariser();
        let n = d.nrows();
        let id = Mat::identity(n, n);
        let zero = Mat::zeros(n, n);
        let d_inv = inverse(&d)?;
        let root = sym_sqrt(&(&id + &d * &d));
        let s = &d_inv * &root;
        let mut rep = IdentityReport::default();
        let scale = 1.0 + op_norm(&d_inv);

        let mut cmp = |name: &str, blocks: SymplecticBlocks, expect: [&Mat; 4], sc: f64| {
            let r = frobenius(&(&blocks.c11 - expect[0]))
                + frobenius(&(&blocks.c12 - expect[1]))
                + frobenius(&(&blocks.c21 - expect[2]))
                + frobenius(&(&blocks.c22 - expect[3]));
            rep.push(name, r / sc, tol);
        };

        let i = self.i().clone();
        cmp(
            "i = [[D^-1, D^-1 sqrt(1+D^2) J], [-J D^-1 sqrt(1+D^2), -J D^-1 J]]",
            self.symplectic_blocks(&i)?,
            [&d_inv, &s, &(-&s), &(-&d_inv)],
            scale,
        );
        let e = self.subspace.projection();
        cmp(
            "E_H = [[1, sqrt(1+D^2) J], [0, 0]]",
            self.symplectic_blocks(&e)?,
            [&id, &root, &zero, &zero],
            1.0,
        );
        let amb = self.subspace.ambient.real_dim();
        let e_perp = Mat::identity(amb, amb) - &e;
        cmp(
            "E_Hperp = [[0, -sqrt(1+D^2) J], [0, 1]]",
            self.symplectic_blocks(&e_perp)?,
            [&zero, &(-&root), &zero, &id],
            1.0,
        );
        let qc = self.subspace.complement_basis();
        let e_prime = qc * qc.transpose();
        cmp(
            "E_H' = [[0, 0], [J sqrt(1+D^2), 1]]",
            self.symplectic_blocks(&e_prime)?,
            [&zero, &zero, &root, &id],
            1.0,
        );
        let p = self.cutting_p()?.op;
        let pc = Mat::identity(amb, amb) - p;
        let jq = self.complement_frame();
        let q = self.q();
        let lhs = jq.transpose() * &pc * &i * q;
        let leak = frobenius(&(&pc * &i * q - &jq * &lhs));
        rep.push(
            "P_H' i|_H = -J D^-1 sqrt(1+D^2)",
            (frobenius(&(lhs + &s)) + leak) / scale,
            tol,
        );
        Ok(rep)
    }

    /// Polariser-derived operators shared by the block formulas.
    pub fn polariser_functions(&self) -> Result<PolariserFunctions> {
        let d = self.polariser();
        let n = d.nrows();
        let d_inv = inverse(&d)?;
        let root = sym_sqrt(&(Mat::identity(n, n) + &d * &d));
        let s = &d_inv * &root;
        Ok(PolariserFunctions { d, d_inv, root, s })
    }
}

/// `D`, `D^{-1}`, `√(1+D²)` and `D^{-1}√(1+D²)` in the frame `Q`.
#[derive(Debug, Clone)]
pub struct PolariserFunctions {
    pub d: Mat,
    pub d_inv: Mat,
    pub root: Mat,
    pub s: Mat,
}

fn spectral(vecs: &Mat, vals: &[f64], f: impl Fn(f64) -> f64) -> Mat {
    let mut scaled = vecs.clone();
    for (j, &l) in vals.iter().enumerate() {
        let fl = f(l);
        scaled.column_mut(j).scale_mut(fl);
    }
    scaled * vecs.transpose()
}

/// An operator together with the residuals of its independent constructions.
#[derive(Debug, Clone)]
pub struct CheckedOp {
    pub op: Mat,
    pub residuals: Vec<(String, f64)>,
}

impl CheckedOp {
    pub fn worst(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, r| a.max(r.1))
    }

    fn ensure(&self, tol: f64) -> Result<()> {
        for (name, r) in &self.residuals {
            if *r > tol {
                return Err(Error::Consistency {
                    name: name.clone(),
                    residual: *r,
                    tolerance: tol,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PolariserReport {
    pub d: Mat,
    pub factorial: bool,
    /// `tr(1 + D²)`: finite-dimensional stand-in for the type I diagnostic.
    pub trace_one_plus_d2: f64,
    pub report: IdentityReport,
}

#[derive(Debug, Clone)]
pub struct SymplecticBlocks {
    pub c11: Mat,
    pub c12: Mat,
    pub c21: Mat,
    pub c22: Mat,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::{orthogonal_dilation, AbstractSubspace};
    use crate::linalg::symplectic_unit;
    use crate::sampling::{gaussian_matrix, rng};

    fn half_example() -> StandardSubspace {
        let abs = AbstractSubspace::new(&Mat::identity(2, 2), &(symplectic_unit(1) * 0.5)).unwrap();
        orthogonal_dilation(&abs).unwrap().subspace
    }

    #[test]
    fn real_line_is_standard_not_factorial() {
        let sp = RealifiedSpace::standard(1);
        let h = StandardSubspace::from_basis(&sp, &Mat::from_column_slice(2, 1, &[1.0, 0.0])).unwrap();
        assert!(h.flags().cyclic && h.flags().separating);
        assert!(!h.is_factorial());
    }

    #[test]
    fn full_plane_is_not_separating() {
        let sp = RealifiedSpace::standard(1);
        let err = StandardSubspace::from_basis(&sp, &Mat::identity(2, 2)).unwrap_err();
        assert!(matches!(err, Error::NotSeparating { .. }));
    }

    #[test]
    fn too_small_is_not_cyclic() {
        let sp = RealifiedSpace::standard(2);
        let err =
            StandardSubspace::from_basis(&sp, &Mat::from_column_slice(4, 1, &[1.0, 0.0, 0.0, 0.0]))
                .unwrap_err();
        assert!(matches!(err, Error::NotCyclic { .. }));
    }

    #[test]
    fn dependent_vectors_rejected() {
        let sp = RealifiedSpace::standard(2);
        let v = Mat::from_column_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            StandardSubspace::from_basis(&sp, &v),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn real_subspace_has_trivial_modular_operator() {
        let n = 3;
        let sp = RealifiedSpace::standard(n);
        let mut b = Mat::zeros(2 * n, n);
        for k in 0..n {
            b[(k, k)] = 1.0;
        }
        let h = StandardSubspace::from_basis(&sp, &b).unwrap();
        let md = h.modular_data().unwrap();
        let id = Mat::identity(2 * n, 2 * n);
        assert!(frobenius(&(md.delta() - &id)) < 1e-12);
        assert!(frobenius(&(md.j() - md.s())) < 1e-12);
        let e = md.projection_e().unwrap().op;
        assert!(frobenius(&(e - (&id + md.s()) * 0.5)) < 1e-12);
        let rep = md.polariser_embedded().unwrap();
        assert!(frobenius(&rep.d) < 1e-14);
        assert!(!rep.factorial);
        assert!(!rep.report.notices.is_empty());
    }

    #[test]
    fn non_factorial_cutting_is_singular() {
        let sp = RealifiedSpace::standard(1);
        let h = StandardSubspace::from_basis(&sp, &Mat::from_column_slice(2, 1, &[1.0, 0.0])).unwrap();
        let err = h.modular_data().unwrap().cutting_p().unwrap_err();
        match err {
            Error::Singularity { eigenvalue, .. } => assert!((eigenvalue - 1.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn half_example_spectrum_and_projections() {
        let h = half_example();
        assert!(h.is_factorial());
        let md = h.modular_data().unwrap();
        let mut spec = md.delta_spectrum().to_vec();
        spec.sort_by(f64::total_cmp);
        let want = [1.0 / 3.0, 1.0 / 3.0, 3.0, 3.0];
        for (a, b) in spec.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{spec:?}");
        }
        assert!(md.projection_e().unwrap().worst() <= 1e-10);
        assert!(md.cutting_p().unwrap().worst() <= 1e-8);
        let rep = md.polariser_embedded().unwrap();
        let d2 = &rep.d * &rep.d;
        assert!(frobenius(&(d2 + Mat::identity(2, 2) * 0.25)) < 1e-12);
        assert!((rep.trace_one_plus_d2 - 1.5).abs() < 1e-12);
    }

    #[test]
    fn cutting_projection_defining_property() {
        let h = half_example();
        let md = h.modular_data().unwrap();
        let p = md.cutting_p().unwrap().op;
        let q = h.basis();
        let qc = h.complement_basis();
        assert!(frobenius(&(&p * q - q)) < 1e-12);
        assert!(frobenius(&(&p * qc)) < 1e-12);
    }

    #[test]
    fn random_basis_identities() {
        // A generic real N-dimensional subspace of ℂ^N, independent of the dilation sampler.
        let mut r = rng(1);
        for n in [2, 3, 5] {
            let sp = RealifiedSpace::standard(n);
            let b = gaussian_matrix(&mut r, 2 * n, n);
            let h = StandardSubspace::from_basis(&sp, &b).unwrap().with_tolerance(1e-8);
            let md = h.modular_data().unwrap();
            let rep = md.identity_report().unwrap();
            for c in &rep.checks {
                assert!(c.pass, "N={n}: {} residual {:.3e}", c.identity_name, c.residual);
            }
        }
    }

    #[test]
    fn projector_axioms_for_n16() {
        let mut r = rng(16);
        let (a, b) = crate::sampling::random_gram_pair(&mut r, 16);
        let h = orthogonal_dilation(&AbstractSubspace::new(&a, &b).unwrap())
            .unwrap()
            .subspace;
        let e = h.modular_data().unwrap().projection_e().unwrap().op;
        assert!(frobenius(&(&e * &e - &e)) < 1e-10);
        assert!(frobenius(&(&e - e.transpose())) < 1e-10);
        assert!(frobenius(&(&e * h.basis() - h.basis())) < 1e-10);
    }

    #[test]
    fn block_forms_on_half_example() {
        let md = half_example().modular_data().unwrap();
        let rep = md.block_form_report().unwrap();
        for c in &rep.checks {
            assert!(c.pass, "{} residual {:.3e}", c.identity_name, c.residual);
        }
        let id = Mat::identity(4, 4);
        let b = md.symplectic_blocks(&id).unwrap();
        assert!(frobenius(&(b.c11 - Mat::identity(2, 2))) < 1e-12);
        assert!(frobenius(&b.c12) < 1e-12 && frobenius(&b.c21) < 1e-12);
        assert!(frobenius(&(b.c22 - Mat::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn blocks_need_factorial() {
        let sp = RealifiedSpace::standard(1);
        let h = StandardSubspace::from_basis(&sp, &Mat::from_column_slice(2, 1, &[1.0, 0.0])).unwrap();
        let md = h.modular_data().unwrap();
        assert!(md.symplectic_blocks(&Mat::identity(2, 2)).is_err());
    }
}
