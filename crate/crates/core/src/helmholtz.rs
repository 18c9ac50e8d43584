//! Self-adjoint extension of `−∂²` on `B = (−1, 1)` obtained by compressing the
//! Helmholtz resolvent of the line.
//!
//! The line `[−L, L]` carries a cell-centred grid with Dirichlet ends, and `B`
//! is the block of cells whose centres lie in `(−1, 1)`. With `E` the
//! restriction to that block,
//!
//! ```text
//! T = E (A + m²)⁻¹ E,    A_m = T⁻¹ − m².
//! ```
//!
//! The exterior solution decays like `e^{−m|x|}`, so `A_m` is the Laplacian on `B`
//! with the Robin condition `f'(±1) = ∓m f(±1)`.
//!
//! Reference extensions on the same block:
//!
//! * Friedrichs (Dirichlet): `q_max(u) = Σ (u_{i+1} − u_i)²/h + 2u_0²/h + 2u_{n−1}²/h`.
//! * Krein (soft): `q_min(u) = Σ (u_{i+1} − u_i)²/h − (u_{n−1} − u_0)²/(x_{n−1} − x_0)`,
//!   i.e. the Dirichlet energy of `u'` minus its mean, whose kernel is the affine functions.
//!
//! The operator `A` is stored as a constant-coefficient tridiagonal and `T` is
//! assembled column by column with one Thomas solve per block cell.

use std::io::Write;

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{sym_eigen, Mat};
use crate::report::IdentityReport;
use crate::sampling;

pub const DEFAULT_BOX: f64 = 12.0;
pub const DEFAULT_INTERVAL_POINTS: usize = 400;
pub const COND_LIMIT: f64 = 1e12;
pub const BA_TOL: f64 = 1e-6;
/// Robin residual tolerance in units of the grid spacing.
pub const ROBIN_TOL_CELLS: f64 = 4.0;
pub const FORM_TOL: f64 = 1e-9;

/// `−∂²` on a cell-centred grid over `[−L, L]` with Dirichlet ends.
#[derive(Debug, Clone)]
pub struct LineOperator {
    box_half: f64,
    h: f64,
    n: usize,
    first: usize,
    inner: usize,
}

impl LineOperator {
    /// `interval_points` cells cover `B`, so `h = 2 / interval_points`.
    pub fn new(box_half: f64, interval_points: usize) -> Result<Self> {
        if interval_points < 4 {
            return Err(Error::InvalidArgument(format!(
                "need at least 4 interval points, got {interval_points}"
            )));
        }
        if !(box_half > 1.0) || !box_half.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "box half-length must exceed 1, got {box_half}"
            )));
        }
        let h = 2.0 / interval_points as f64;
        let side = ((box_half - 1.0) / h).round();
        if ((box_half - 1.0) / h - side).abs() > 1e-9 || side < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "box half-length {box_half} is not 1 plus a whole number of cells of width {h}"
            )));
        }
        let side = side as usize;
        Ok(Self {
            box_half,
            h,
            n: interval_points + 2 * side,
            first: side,
            inner: interval_points,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn box_half_length(&self) -> f64 {
        self.box_half
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.box_half + (j as f64 + 0.5) * self.h
    }

    pub fn interval_len(&self) -> usize {
        self.inner
    }

    /// Cell centres inside `B`.
    pub fn interval_grid(&self) -> Vec<f64> {
        (self.first..self.first + self.inner).map(|j| self.x(j)).collect()
    }

    /// `(A + shift) u` on the full line.
    pub fn apply(&self, u: &[f64], shift: f64) -> Result<Vec<f64>> {
        if u.len() != self.n {
            return Err(dim_mismatch(self.n, u.len()));
        }
        let h2 = 1.0 / (self.h * self.h);
        let n = self.n;
        Ok((0..n)
            .map(|j| {
                let left = if j > 0 { u[j - 1] } else { -u[j] };
                let right = if j + 1 < n { u[j + 1] } else { -u[j] };
                (2.0 * u[j] - left - right) * h2 + shift * u[j]
            })
            .collect())
    }

    /// Block of `v` living on `B`.
    pub fn restrict(&self, v: &[f64]) -> Vec<f64> {
        v[self.first..self.first + self.inner].to_vec()
    }

    /// Zero extension from `B` to the line.
    pub fn extend(&self, u: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.n];
        v[self.first..self.first + self.inner].copy_from_slice(u);
        v
    }

    fn factor(&self, shift: f64) -> Thomas {
        let off = -1.0 / (self.h * self.h);
        let n = self.n;
        let diag = |j: usize| {
            let ends = if j == 0 || j + 1 == n { 3.0 } else { 2.0 };
            ends / (self.h * self.h) + shift
        };
        let mut dp = vec![0.0; n];
        let mut cp = vec![0.0; n];
        dp[0] = diag(0);
        cp[0] = off / dp[0];
        for j in 1..n {
            dp[j] = diag(j) - off * cp[j - 1];
            cp[j] = off / dp[j];
        }
        Thomas { off, dp, cp }
    }
}

struct Thomas {
    off: f64,
    dp: Vec<f64>,
    cp: Vec<f64>,
}

impl Thomas {
    fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        rhs[0] /= self.dp[0];
        for j in 1..n {
            rhs[j] = (rhs[j] - self.off * rhs[j - 1]) / self.dp[j];
        }
        for j in (0..n - 1).rev() {
            rhs[j] -= self.cp[j] * rhs[j + 1];
        }
    }
}

/// `T`, `A_m = T⁻¹ − m²` and the spectrum of `A_m` on `B`.
#[derive(Debug, Clone)]
pub struct HelmholtzExtension {
    pub m: f64,
    pub h: f64,
    pub t: Mat,
    pub am: Mat,
    /// Ascending eigenvalues of `A_m`.
    pub eigenvalues: Vec<f64>,
    /// Matching eigenvectors as columns.
    pub eigenvectors: Mat,
    pub cond_t: f64,
    pub min_singular_t: f64,
}

pub fn extension_am(op: &LineOperator, m: f64) -> Result<HelmholtzExtension> {
    extension_am_with_limit(op, m, COND_LIMIT)
}

/// As [`extension_am`] with a custom bound on `cond(T)`.
pub fn extension_am_with_limit(op: &LineOperator, m: f64, cond_limit: f64) -> Result<HelmholtzExtension> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::InvalidArgument(format!("mass must be positive, got {m}")));
    }
    let nb = op.inner;
    let thomas = op.factor(m * m);
    let mut t = Mat::zeros(nb, nb);
    let mut rhs = vec![0.0; op.n];
    for c in 0..nb {
        rhs.iter_mut().for_each(|v| *v = 0.0);
        rhs[op.first + c] = 1.0;
        thomas.solve(&mut rhs);
        for r in 0..nb {
            t[(r, c)] = rhs[op.first + r];
        }
    }
    let t = (&t + t.transpose()) * 0.5;
    let eig = sym_eigen(&t);
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v.abs())));
    let cond_t = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if cond_t > cond_limit {
        return Err(Error::IllConditioned {
            cond: cond_t,
            limit: cond_limit,
        });
    }
    // T⁻¹ − m² shares eigenvectors with T; sort by ascending A_m eigenvalue.
    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| 1.0 / eig.eigenvalues[k] - m * m).collect();
    let eigenvectors = Mat::from_fn(nb, nb, |r, c| eig.eigenvectors[(r, order[c])]);
    let am = &eigenvectors * Mat::from_diagonal(&DVector::from_vec(eigenvalues.clone())) * eigenvectors.transpose();
    Ok(HelmholtzExtension {
        m,
        h: op.h,
        t,
        am,
        eigenvalues,
        eigenvectors,
        cond_t,
        min_singular_t: lo,
    })
}

impl HelmholtzExtension {
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `q_m(u) = h uᵀ A_m u`.
    pub fn form(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.am.nrows() {
            return Err(dim_mismatch(self.am.nrows(), u.len()));
        }
        let v = DVector::from_column_slice(u);
        Ok(self.h * v.dot(&(&self.am * &v)))
    }

    /// Lowest eigenvector, positive at the centre.
    pub fn ground_state(&self) -> Vec<f64> {
        let mut f: Vec<f64> = self.eigenvectors.column(0).iter().copied().collect();
        if f[f.len() / 2] < 0.0 {
            f.iter_mut().for_each(|v| *v = -*v);
        }
        f
    }

    /// Worst relative defect of `f'(±1) ± m f(±1) = 0` for the ground state.
    pub fn robin_residual(&self) -> f64 {
        let f = self.ground_state();
        let n = f.len();
        let scale = f.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let right_val = 0.5 * (3.0 * f[n - 1] - f[n - 2]);
        let right_der = (f[n - 1] - f[n - 2]) / self.h;
        let left_val = 0.5 * (3.0 * f[0] - f[1]);
        let left_der = (f[1] - f[0]) / self.h;
        let right = (right_der + self.m * right_val).abs();
        let left = (left_der - self.m * left_val).abs();
        right.max(left) / scale
    }

    /// Worst relative defect of `T (A + m²) ξ = ξ` over vectors supported strictly inside `B`.
    pub fn ba_identity_residual(&self, op: &LineOperator, xis: &[Vec<f64>]) -> Result<f64> {
        let mut worst = 0.0_f64;
        for xi in xis {
            if xi.len() != op.inner || xi[0] != 0.0 || xi[xi.len() - 1] != 0.0 {
                return Err(Error::InvalidArgument(
                    "test vectors must vanish on the boundary cells of the interval".into(),
                ));
            }
            let lifted = op.apply(&op.extend(xi), self.m * self.m)?;
            let back = &self.t * DVector::from_vec(op.restrict(&lifted));
            let x = DVector::from_column_slice(xi);
            worst = worst.max((back - &x).norm() / x.norm().max(f64::MIN_POSITIVE));
        }
        Ok(worst)
    }
}

/// Positive root of `k tan k = m` on `(0, π/2)`.
pub fn robin_root(m: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.tan() < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Dirichlet and Krein extensions on the interval block.
#[derive(Debug, Clone)]
pub struct ReferenceExtensions {
    pub h: f64,
    pub dirichlet: Mat,
    pub krein: Mat,
}

pub fn reference_extensions(op: &LineOperator) -> ReferenceExtensions {
    let nb = op.inner;
    let h = op.h;
    let h2 = 1.0 / (h * h);
    let mut neumann = Mat::zeros(nb, nb);
    for j in 0..nb {
        neumann[(j, j)] = if j == 0 || j + 1 == nb { h2 } else { 2.0 * h2 };
        if j + 1 < nb {
            neumann[(j, j + 1)] = -h2;
            neumann[(j + 1, j)] = -h2;
        }
    }
    let mut dirichlet = neumann.clone();
    dirichlet[(0, 0)] += 2.0 * h2;
    dirichlet[(nb - 1, nb - 1)] += 2.0 * h2;
    let mut krein = neumann;
    let c = 1.0 / (h * h * (nb - 1) as f64);
    for (a, b, s) in [(0, 0, 1.0), (nb - 1, nb - 1, 1.0), (0, nb - 1, -1.0), (nb - 1, 0, -1.0)] {
        krein[(a, b)] -= s * c;
    }
    ReferenceExtensions { h, dirichlet, krein }
}

impl ReferenceExtensions {
    pub fn dirichlet_spectrum(&self) -> Vec<f64> {
        sorted_spectrum(&self.dirichlet)
    }

    pub fn krein_spectrum(&self) -> Vec<f64> {
        sorted_spectrum(&self.krein)
    }
}

fn sorted_spectrum(m: &Mat) -> Vec<f64> {
    let mut v: Vec<f64> = sym_eigen(m).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn diff_energy(u: &[f64], h: f64) -> f64 {
    u.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h
}

pub fn krein_form(u: &[f64], grid: &[f64]) -> f64 {
    let n = u.len();
    let h = grid[1] - grid[0];
    diff_energy(u, h) - (u[n - 1] - u[0]).powi(2) / (grid[n - 1] - grid[0])
}

pub fn dirichlet_form(u: &[f64], grid: &[f64]) -> f64 {
    let n = u.len();
    let h = grid[1] - grid[0];
    diff_energy(u, h) + 2.0 * (u[0] * u[0] + u[n - 1] * u[n - 1]) / h
}

/// A named trial function; `vanishes` marks membership in the Dirichlet form domain.
#[derive(Debug, Clone)]
pub struct TrialFunction {
    pub name: String,
    pub values: Vec<f64>,
    pub vanishes: bool,
}

/// `sin(πx/2)`, an affine function and `count` random `(1 − x²) p(x)` with `deg p = 4`.
pub fn trial_corpus(grid: &[f64], count: usize, seed: u64) -> Vec<TrialFunction> {
    let mut out = vec![
        TrialFunction {
            name: "cos(pi x / 2)".into(),
            values: grid.iter().map(|x| (std::f64::consts::FRAC_PI_2 * x).cos()).collect(),
            vanishes: true,
        },
        TrialFunction {
            name: "sin(pi x)".into(),
            values: grid.iter().map(|x| (std::f64::consts::PI * x).sin()).collect(),
            vanishes: true,
        },
        TrialFunction {
            name: "1 + x/2".into(),
            values: grid.iter().map(|x| 1.0 + 0.5 * x).collect(),
            vanishes: false,
        },
    ];
    let mut rng = sampling::rng(seed);
    for k in 0..count {
        let c: Vec<f64> = (0..5).map(|_| sampling::uniform(&mut rng, -1.0, 1.0)).collect();
        out.push(TrialFunction {
            name: format!("random bump #{k}"),
            values: grid
                .iter()
                .map(|&x| (1.0 - x * x) * c.iter().rev().fold(0.0, |acc, a| acc * x + a))
                .collect(),
            vanishes: true,
        });
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FormRow {
    pub name: String,
    pub q_min: f64,
    pub q_m: f64,
    pub q_max: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct FormOrder {
    pub rows: Vec<FormRow>,
    /// Smallest `(q_m − q_min)/q_m`.
    pub lower_margin: f64,
    /// Smallest `(q_max − q_m)/q_max` over the Dirichlet form domain.
    pub upper_margin: f64,
    pub report: IdentityReport,
}

/// Checks `q_min ≤ q_m ≤ q_max` on each trial function.
pub fn form_order_check(ext: &HelmholtzExtension, grid: &[f64], trials: &[TrialFunction]) -> Result<FormOrder> {
    let mut rows = Vec::with_capacity(trials.len());
    let mut report = IdentityReport::default();
    let (mut lower_margin, mut upper_margin) = (f64::INFINITY, f64::INFINITY);
    for trial in trials {
        let q_min = krein_form(&trial.values, grid);
        let q_m = ext.form(&trial.values)?;
        let scale = q_m.abs().max(1.0);
        lower_margin = lower_margin.min((q_m - q_min) / scale);
        report.push(
            format!("q_min <= q_m [{}]", trial.name),
            (q_min - q_m).max(0.0) / scale,
            FORM_TOL,
        );
        let q_max = trial.vanishes.then(|| dirichlet_form(&trial.values, grid));
        if let Some(q_max) = q_max {
            upper_margin = upper_margin.min((q_max - q_m) / q_max.abs().max(1.0));
            report.push(
                format!("q_m <= q_max [{}]", trial.name),
                (q_m - q_max).max(0.0) / scale,
                FORM_TOL,
            );
        }
        rows.push(FormRow {
            name: trial.name.clone(),
            q_min,
            q_m,
            q_max,
        });
    }
    Ok(FormOrder {
        rows,
        lower_margin,
        upper_margin,
        report,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub m: f64,
    pub k: usize,
    pub lambda_k_am: f64,
    pub lambda_k_dirichlet: f64,
    pub lambda_k_krein: f64,
}

pub fn spectrum_rows(exts: &[HelmholtzExtension], refs: &ReferenceExtensions, count: usize) -> Vec<SpectrumRow> {
    let dir = refs.dirichlet_spectrum();
    let kre = refs.krein_spectrum();
    exts.iter()
        .flat_map(|e| {
            (0..count.min(e.eigenvalues.len())).map(|k| SpectrumRow {
                m: e.m,
                k: k + 1,
                lambda_k_am: e.eigenvalues[k],
                lambda_k_dirichlet: dir[k],
                lambda_k_krein: kre[k],
            })
        })
        .collect()
}

pub fn write_spectrum_csv<W: Write>(rows: &[SpectrumRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn default_op() -> LineOperator {
        LineOperator::new(DEFAULT_BOX, DEFAULT_INTERVAL_POINTS).unwrap()
    }

    /// `k = atan(m / k)` by fixed-point iteration.
    fn robin_fixed_point(m: f64) -> f64 {
        let mut k = 1.0;
        for _ in 0..10_000 {
            k = (m / k).atan();
        }
        k
    }

    #[test]
    fn robin_root_oracle() {
        let k = robin_root(1.0);
        assert!((k - 0.8603335890193797).abs() < 1e-12);
        for m in [0.5, 1.0, 2.0] {
            assert!((robin_root(m) - robin_fixed_point(m)).abs() < 1e-8);
        }
    }

    #[test]
    fn grid_layout() {
        let op = default_op();
        assert_eq!(op.interval_len(), 400);
        assert_eq!(op.len(), 4800);
        let g = op.interval_grid();
        assert!((g[0] + 1.0 - op.h() / 2.0).abs() < 1e-12);
        assert!(LineOperator::new(12.0013, 400).is_err());
        assert!(extension_am(&op, 0.0).is_err());
    }

    #[test]
    fn thomas_matches_apply() {
        let op = LineOperator::new(3.0, 40).unwrap();
        let u: Vec<f64> = (0..op.len()).map(|j| (j as f64 * 0.37).sin()).collect();
        let mut r = op.apply(&u, 2.0).unwrap();
        op.factor(2.0).solve(&mut r);
        let err = r.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn schur_complement_cross_check() {
        let op = LineOperator::new(3.0, 20).unwrap();
        let n = op.len();
        let mut dense = Mat::zeros(n, n);
        for c in 0..n {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            let col = op.apply(&e, 0.0).unwrap();
            for r in 0..n {
                dense[(r, c)] = col[r];
            }
        }
        let m = 1.3;
        let b: Vec<usize> = (op.first..op.first + op.inner).collect();
        let x: Vec<usize> = (0..n).filter(|j| !b.contains(j)).collect();
        let pick = |rows: &[usize], cols: &[usize]| Mat::from_fn(rows.len(), cols.len(), |r, c| dense[(rows[r], cols[c])]);
        let shift = |mut a: Mat| {
            for j in 0..a.nrows() {
                a[(j, j)] += m * m;
            }
            a
        };
        let schur = shift(pick(&b, &b))
            - pick(&b, &x) * shift(pick(&x, &x)).try_inverse().unwrap() * pick(&x, &b);
        let ext = extension_am(&op, m).unwrap();
        let am_plus = shift(ext.am.clone());
        assert!((am_plus - &schur).amax() < 1e-9 * schur.amax());
    }

    #[test]
    fn robin_eigenvalue_oracle() {
        let op = default_op();
        let ext = extension_am(&op, 1.0).unwrap();
        let want = robin_fixed_point(1.0).powi(2);
        assert!((ext.lambda1() - want).abs() < 0.01 * want, "{}", ext.lambda1());
        assert!(ext.min_singular_t > 0.0);
        assert!(ext.eigenvalues[0] >= 0.0);
        assert!(ext.robin_residual() < ROBIN_TOL_CELLS * ext.h);
    }

    #[test]
    fn reference_spectra() {
        let op = default_op();
        let refs = reference_extensions(&op);
        let d = refs.dirichlet_spectrum();
        assert!((d[0] - PI * PI / 4.0).abs() < 0.005 * PI * PI / 4.0);
        assert!((d[1] - PI * PI).abs() < 0.005 * PI * PI);
        let k = refs.krein_spectrum();
        assert!(k[0].abs() < 1e-6 && k[1].abs() < 1e-6 && k[2] > 1.0);
        let ext = extension_am(&op, 1.0).unwrap();
        assert!(d[0] > ext.lambda1() && ext.lambda1() > 0.0);
    }

    #[test]
    fn monotone_in_m_below_dirichlet() {
        let op = default_op();
        let lams: Vec<f64> = [0.5, 1.0, 2.0, 5.0]
            .iter()
            .map(|&m| extension_am(&op, m).unwrap().lambda1())
            .collect();
        assert!(lams.windows(2).all(|w| w[0] < w[1]), "{lams:?}");
        let d = reference_extensions(&op).dirichlet_spectrum()[0];
        assert!(lams[3] < d);
        let want = robin_fixed_point(5.0).powi(2);
        assert!((lams[3] - want).abs() < 0.01 * want);
    }

    #[test]
    fn forms_match_matrices() {
        let op = LineOperator::new(2.0, 50).unwrap();
        let refs = reference_extensions(&op);
        let g = op.interval_grid();
        for t in trial_corpus(&g, 3, 1) {
            let v = DVector::from_vec(t.values.clone());
            let qd = refs.h * v.dot(&(&refs.dirichlet * &v));
            let qk = refs.h * v.dot(&(&refs.krein * &v));
            assert!((qd - dirichlet_form(&t.values, &g)).abs() < 1e-10 * qd.abs().max(1.0));
            assert!((qk - krein_form(&t.values, &g)).abs() < 1e-10 * qd.abs().max(1.0));
        }
    }

    #[test]
    fn form_ordering_on_corpus() {
        let op = default_op();
        let g = op.interval_grid();
        let ext = extension_am(&op, 1.0).unwrap();
        let trials = trial_corpus(&g, 20, 3);
        let order = form_order_check(&ext, &g, &trials).unwrap();
        assert!(order.report.all_pass(), "{:?}", order.report.failures().collect::<Vec<_>>());
        assert!(order.lower_margin >= 0.0 && order.upper_margin >= 0.0);
        let affine = order.rows.iter().find(|r| r.name == "1 + x/2").unwrap();
        assert!(affine.q_min.abs() < 1e-9 && affine.q_m > 0.0 && affine.q_max.is_none());
    }

    #[test]
    fn ba_identity() {
        let op = default_op();
        let ext = extension_am(&op, 1.0).unwrap();
        let g = op.interval_grid();
        let xis: Vec<Vec<f64>> = trial_corpus(&g, 4, 9)
            .into_iter()
            .map(|t| {
                let mut v = t.values;
                let n = v.len();
                v[0] = 0.0;
                v[n - 1] = 0.0;
                v
            })
            .collect();
        assert!(ext.ba_identity_residual(&op, &xis).unwrap() < BA_TOL);
        assert!(ext.ba_identity_residual(&op, &[vec![1.0; 400]]).is_err());
    }

    #[test]
    fn ill_conditioning_is_reported() {
        let op = LineOperator::new(3.0, 40).unwrap();
        let cond = extension_am(&op, 1.0).unwrap().cond_t;
        assert!(cond > 1.0 && cond < COND_LIMIT);
        assert!(matches!(
            extension_am_with_limit(&op, 1.0, cond / 2.0),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn spectrum_csv() {
        let op = LineOperator::new(2.0, 40).unwrap();
        let refs = reference_extensions(&op);
        let exts = vec![extension_am(&op, 1.0).unwrap(), extension_am(&op, 2.0).unwrap()];
        let rows = spectrum_rows(&exts, &refs, 3);
        let mut buf = Vec::new();
        write_spectrum_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("m,k,lambda_k_am,lambda_k_dirichlet,lambda_k_krein"));
        assert_eq!(text.lines().count(), 7);
    }
}
