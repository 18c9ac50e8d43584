//! Bosonic Fock space over `ℂ^n` truncated at a total particle number.
//!
//! Weyl operators act through `V(h) = e^{-‖h‖²/2} e^{a*(h)} e^{-a(h)}`, applied as
//! exact series: `e^{-a(h)}` terminates, and `e^{a*(h)}` is cut where it leaves the
//! truncated space. The coherent vector `e^h` has components `Π h_j^{n_j}/√(n_j!)`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_CUTOFF: usize = 40;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct TruncatedFock {
    n_modes: usize,
    cutoff: usize,
    tol: f64,
    states: Vec<Vec<usize>>,
    lower: Vec<Vec<Option<usize>>>,
    raise: Vec<Vec<Option<usize>>>,
}

impl TruncatedFock {
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidArgument("Fock space needs at least one mode".into()));
        }
        let mut states = Vec::new();
        enumerate(n_modes, cutoff, &mut Vec::new(), &mut states);
        let index: HashMap<Vec<usize>, usize> =
            states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut lower = vec![vec![None; states.len()]; n_modes];
        let mut raise = vec![vec![None; states.len()]; n_modes];
        for (idx, s) in states.iter().enumerate() {
            for j in 0..n_modes {
                let mut t = s.clone();
                if s[j] > 0 {
                    t[j] -= 1;
                    lower[j][idx] = index.get(&t).copied();
                    t[j] += 1;
                }
                t[j] += 1;
                raise[j][idx] = index.get(&t).copied();
            }
        }
        Ok(Self {
            n_modes,
            cutoff,
            tol: DEFAULT_TOL,
            states,
            lower,
            raise,
        })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn occupation(&self, idx: usize) -> &[usize] {
        &self.states[idx]
    }

    pub fn particle_number(&self, idx: usize) -> usize {
        self.states[idx].iter().sum()
    }

    pub fn vacuum(&self) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// `a(h) = Σ conj(h_j) a_j`.
    pub fn annihilate(&self, h: &[Complex64], v: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim());
        for (j, hj) in h.iter().enumerate() {
            let c = hj.conj();
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (idx, target) in self.lower[j].iter().enumerate() {
                if let Some(t) = target {
                    let n = self.states[idx][j] as f64;
                    out[*t] += c * n.sqrt() * v[idx];
                }
            }
        }
        out
    }

    /// `a*(h) = Σ h_j a*_j`, dropping components above the cutoff.
    pub fn create(&self, h: &[Complex64], v: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim());
        for (j, hj) in h.iter().enumerate() {
            if *hj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (idx, target) in self.raise[j].iter().enumerate() {
                if let Some(t) = target {
                    let n = self.states[idx][j] as f64 + 1.0;
                    out[*t] += hj * n.sqrt() * v[idx];
                }
            }
        }
        out
    }

    /// Bound `‖h‖^{2(c+1)}/(c+1)!` on the norm-squared mass of `e^h` beyond cutoff `c`.
    pub fn remainder_bound(norm: f64, cutoff: usize) -> f64 {
        let x = norm * norm;
        let mut term = 1.0;
        for k in 1..=cutoff + 1 {
            term *= x / k as f64;
        }
        term
    }

    /// Smallest cutoff with remainder below `tol`.
    pub fn required_cutoff(norm: f64, tol: f64) -> usize {
        let mut c = 0;
        while Self::remainder_bound(norm, c) > tol && c < 10_000 {
            c += 1;
        }
        c
    }

    fn check_vector(&self, h: &[Complex64]) -> Result<f64> {
        if h.len() != self.n_modes {
            return Err(crate::error::dim_mismatch(self.n_modes, h.len()));
        }
        let norm = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let remainder = Self::remainder_bound(norm, self.cutoff);
        if remainder > self.tol {
            return Err(Error::Cutoff {
                cutoff: self.cutoff,
                required: Self::required_cutoff(norm, self.tol),
                remainder,
                tolerance: self.tol,
            });
        }
        Ok(norm)
    }

    /// Truncated coherent vector `e^h`.
    pub fn coherent(&self, h: &[Complex64]) -> Result<CVector> {
        self.check_vector(h)?;
        Ok(self.exp_create(h, &self.vacuum()))
    }

    fn exp_create(&self, h: &[Complex64], v: &CVector) -> CVector {
        let mut out = v.clone();
        let mut term = v.clone();
        for k in 1..=self.cutoff + 1 {
            term = self.create(h, &term) / Complex64::new(k as f64, 0.0);
            if term.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                break;
            }
            out += &term;
        }
        out
    }

    fn exp_annihilate_neg(&self, h: &[Complex64], v: &CVector) -> CVector {
        let mut out = v.clone();
        let mut term = v.clone();
        for k in 1..=self.cutoff + 1 {
            term = -self.annihilate(h, &term) / Complex64::new(k as f64, 0.0);
            if term.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                break;
            }
            out += &term;
        }
        out
    }

    /// `V(h) v`.
    pub fn weyl_apply(&self, h: &[Complex64], v: &CVector) -> Result<CVector> {
        let norm = self.check_vector(h)?;
        let w = self.exp_annihilate_neg(h, v);
        Ok(self.exp_create(h, &w) * Complex64::new((-0.5 * norm * norm).exp(), 0.0))
    }

    /// Dense matrix of `V(h)` on the truncated space.
    pub fn weyl_matrix(&self, h: &[Complex64]) -> Result<CMatrix> {
        self.check_vector(h)?;
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for col in 0..d {
            let mut e = CVector::zeros(d);
            e[col] = Complex64::new(1.0, 0.0);
            m.set_column(col, &self.weyl_apply(h, &e)?);
        }
        Ok(m)
    }

    /// `‖V(h+k) − e^{iβ(h,k)} V(h)V(k)‖` on the sector with at most `sector` particles
    /// (Frobenius norm of the restriction), `β(h, k) = Im(h, k)`.
    pub fn ccr_residual(&self, h: &[Complex64], k: &[Complex64], sector: usize) -> Result<f64> {
        let sum: Vec<Complex64> = h.iter().zip(k).map(|(a, b)| a + b).collect();
        let beta = imag_part(h, k);
        let phase = Complex64::from_polar(1.0, beta);
        let mut total = 0.0;
        for idx in 0..self.dim() {
            if self.particle_number(idx) > sector {
                continue;
            }
            let mut e = CVector::zeros(self.dim());
            e[idx] = Complex64::new(1.0, 0.0);
            let lhs = self.weyl_apply(&sum, &e)?;
            let rhs = self.weyl_apply(h, &self.weyl_apply(k, &e)?)? * phase;
            total += (lhs - rhs).norm_squared();
        }
        Ok(total.sqrt())
    }

    /// `|⟨e⁰, V(h) e⁰⟩ − e^{-‖h‖²/2}|`.
    pub fn vacuum_kernel_residual(&self, h: &[Complex64]) -> Result<f64> {
        let norm2: f64 = h.iter().map(|z| z.norm_sqr()).sum();
        let v = self.weyl_apply(h, &self.vacuum())?;
        Ok((v[0] - Complex64::new((-0.5 * norm2).exp(), 0.0)).norm())
    }
}

/// `Im(h, k)` with the scalar product antilinear in the first slot.
pub fn imag_part(h: &[Complex64], k: &[Complex64]) -> f64 {
    h.iter().zip(k).map(|(a, b)| (a.conj() * b).im).sum()
}

fn enumerate(modes: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == modes {
        out.push(prefix.clone());
        return;
    }
    for n in 0..=budget {
        prefix.push(n);
        enumerate(modes, budget - n, prefix, out);
        prefix.pop();
    }
}
