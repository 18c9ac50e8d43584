//! Identity suites, parameter scans and their report files.
//!
//! Each suite draws its random instances from a ChaCha8 stream seeded by
//! `(seed, suite, N)`, aggregates every identity to its worst residual per
//! dimension, and emits plot-ready CSV tables. Runs are sequential, so equal
//! configurations produce byte-identical files.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bogoliubov::{
    darboux_frame, implementability_conditions, innerness_blocks, random_symplectic,
    random_symplectic_between, shale_defect, squeeze, tilde_commutator_blocks, CommutatorBlocks,
    ScanRow,
};
use crate::dilation::{one_particle_unitary, orthogonal_dilation, symplectic_dilation, AbstractSubspace};
use crate::error::{Error, Result};
use crate::helmholtz::{self, LineOperator};
use crate::linalg::{frobenius, inverse, Mat};
use crate::qft1d::{self, Interval, SpectralGrid};
use crate::quasiequiv::{self, fock::TruncatedFock};
use crate::realop::RealifiedSpace;
use crate::report::{IdentityCheck, IdentityReport};
use crate::sampling::{self, gaussian_matrix, uniform, SeededRng};
use crate::stdspace::ModularData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ModularIdentities,
    Dilation,
    Bogoliubov,
    Quasiequiv,
    Entropy,
    Helmholtz,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::ModularIdentities,
        Suite::Dilation,
        Suite::Bogoliubov,
        Suite::Quasiequiv,
        Suite::Entropy,
        Suite::Helmholtz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ModularIdentities => "modular-identities",
            Suite::Dilation => "dilation",
            Suite::Bogoliubov => "bogoliubov",
            Suite::Quasiequiv => "quasiequiv",
            Suite::Entropy => "entropy",
            Suite::Helmholtz => "helmholtz",
            Suite::All => "all",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .chain([Suite::All])
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Parameters shared by all suites and scans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Complex dimensions `N` of the random instances.
    pub dims: Vec<usize>,
    /// Instances per dimension; `None` uses each suite's default.
    pub samples: Option<usize>,
    /// Overrides every check tolerance.
    pub tol: Option<f64>,
    /// Spectral grid size for the entropy suite.
    pub grid_n: usize,
    /// Half-length of the spectral box.
    #[serde(rename = "box")]
    pub box_half: f64,
    pub helmholtz_box: f64,
    pub interval_points: usize,
    pub masses: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            dims: vec![2, 4, 8, 16],
            samples: None,
            tol: None,
            grid_n: 4096,
            box_half: qft1d::DEFAULT_BOX,
            helmholtz_box: helmholtz::DEFAULT_BOX,
            interval_points: helmholtz::DEFAULT_INTERVAL_POINTS,
            masses: vec![0.5, 1.0, 2.0, 5.0],
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(format!("tolerance must be positive, got {t}")));
            }
        }
        if self.dims.is_empty() {
            return Err(Error::InvalidArgument("dimension list is empty".into()));
        }
        if self.samples == Some(0) {
            return Err(Error::InvalidArgument("samples must be positive".into()));
        }
        if self.masses.iter().any(|&m| !(m > 0.0)) {
            return Err(Error::InvalidArgument("masses must be positive".into()));
        }
        Ok(())
    }

    fn even_dims(&self) -> Result<&[usize]> {
        if let Some(&n) = self.dims.iter().find(|&&n| n == 0 || n % 2 != 0) {
            return Err(Error::InvalidArgument(format!(
                "dimension {n} is odd; factorial instances need even N"
            )));
        }
        Ok(&self.dims)
    }

    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn stream(&self, suite: Suite, n: usize) -> SeededRng {
        sampling::rng(
            self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (suite.tag() << 48) ^ (n as u64),
        )
    }
}

/// A named CSV or JSON artefact.
#[derive(Debug, Clone)]
pub struct Table {
    pub file: String,
    pub body: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct SuiteOutput {
    pub suite: String,
    /// `(suite, check)` pairs in evaluation order.
    pub checks: Vec<(String, IdentityCheck)>,
    pub notices: Vec<String>,
    pub tables: Vec<Table>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub suite: String,
    pub n_checks: usize,
    pub n_pass: usize,
    pub worst_residual: f64,
    pub failures: Vec<String>,
}

impl SuiteOutput {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, c)| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().map(|(_, c)| c).filter(|c| !c.pass)
    }

    pub fn summary(&self) -> Summary {
        Summary {
            suite: self.suite.clone(),
            n_checks: self.checks.len(),
            n_pass: self.checks.iter().filter(|(_, c)| c.pass).count(),
            worst_residual: self.checks.iter().fold(0.0, |a, (_, c)| a.max(c.residual)),
            failures: self.failures().map(|c| c.identity_name.clone()).collect(),
        }
    }

    pub fn checks_csv(&self) -> Result<Vec<u8>> {
        #[derive(Serialize)]
        struct Row<'a> {
            suite: &'a str,
            identity_name: &'a str,
            residual: f64,
            tolerance: f64,
            pass: bool,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for (suite, c) in &self.checks {
            w.serialize(Row {
                suite,
                identity_name: &c.identity_name,
                residual: c.residual,
                tolerance: c.tolerance,
                pass: c.pass,
            })?;
        }
        csv_bytes(w)
    }

    /// Writes `summary.json`, `checks.csv` and every table into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(
            dir.join("summary.json"),
            serde_json::to_string_pretty(&self.summary())? + "\n",
        )?;
        fs::write(dir.join("checks.csv"), self.checks_csv()?)?;
        for t in &self.tables {
            fs::write(dir.join(&t.file), &t.body)?;
        }
        Ok(())
    }
}

fn csv_bytes(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn csv_table<T: Serialize>(file: &str, rows: &[T]) -> Result<Table> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(Table {
        file: file.into(),
        body: csv_bytes(w)?,
    })
}

/// Worst residual per identity name, in first-seen order.
struct Aggregate {
    tol_override: Option<f64>,
    order: Vec<String>,
    worst: HashMap<String, (f64, f64)>,
    notices: Vec<String>,
}

impl Aggregate {
    fn new(cfg: &RunConfig) -> Self {
        Self {
            tol_override: cfg.tol,
            order: Vec::new(),
            worst: HashMap::new(),
            notices: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        let name = name.into();
        let tolerance = self.tol_override.unwrap_or(tolerance);
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        match self.worst.get_mut(&name) {
            Some(e) => e.0 = e.0.max(residual),
            None => {
                self.order.push(name.clone());
                self.worst.insert(name, (residual, tolerance));
            }
        }
    }

    /// Adds a report, re-scoring each check at `tolerance`.
    fn report(&mut self, prefix: &str, rep: &IdentityReport, tolerance: f64) {
        for c in &rep.checks {
            self.push(format!("{prefix}{}", c.identity_name), c.residual, tolerance);
        }
        for n in &rep.notices {
            if !self.notices.contains(n) {
                self.notices.push(n.clone());
            }
        }
    }

    /// Records an error as a failed check.
    fn error(&mut self, name: impl Into<String>, err: &Error) {
        let name = name.into();
        self.notices.push(format!("{name}: {err}"));
        self.push(name, f64::INFINITY, 0.0);
    }

    fn finish(self, suite: Suite, tables: Vec<Table>) -> SuiteOutput {
        let checks = self
            .order
            .iter()
            .map(|name| {
                let (r, t) = self.worst[name];
                (suite.name().to_string(), IdentityCheck::new(name.clone(), r, t))
            })
            .collect();
        SuiteOutput {
            suite: suite.name().into(),
            checks,
            notices: self.notices,
            tables,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteOutput> {
    cfg.validate()?;
    match suite {
        Suite::ModularIdentities => modular_identities(cfg),
        Suite::Dilation => dilation(cfg),
        Suite::Bogoliubov => bogoliubov(cfg),
        Suite::Quasiequiv => quasiequiv(cfg),
        Suite::Entropy => entropy(cfg),
        Suite::Helmholtz => helmholtz_suite(cfg),
        Suite::All => {
            let mut out = SuiteOutput {
                suite: "all".into(),
                checks: Vec::new(),
                notices: Vec::new(),
                tables: Vec::new(),
            };
            for s in Suite::ALL {
                let part = run_suite(s, cfg)?;
                out.checks.extend(part.checks);
                out.notices.extend(part.notices);
                out.tables.extend(part.tables);
            }
            Ok(out)
        }
    }
}

pub fn run_suite_named(name: &str, cfg: &RunConfig) -> Result<SuiteOutput> {
    run_suite(name.parse()?, cfg)
}

fn random_md(rng: &mut SeededRng, n: usize) -> Result<ModularData> {
    let abs = AbstractSubspace::sample(rng, n)?;
    orthogonal_dilation(&abs)?.subspace.modular_data()
}

#[derive(Serialize)]
struct ModularRow {
    #[serde(rename = "N")]
    n: usize,
    sample: usize,
    worst_residual: f64,
    delta_min: f64,
    delta_max: f64,
}

fn modular_identities(cfg: &RunConfig) -> Result<SuiteOutput> {
    const TOL: f64 = 1e-8;
    let suite = Suite::ModularIdentities;
    let mut agg = Aggregate::new(cfg);
    let mut rows = Vec::new();
    for &n in cfg.even_dims()? {
        let mut rng = cfg.stream(suite, n);
        let prefix = format!("[N={n}] ");
        for sample in 0..cfg.samples_or(100) {
            let md = match random_md(&mut rng, n) {
                Ok(md) => md,
                Err(e) => {
                    agg.error(format!("{prefix}modular data"), &e);
                    continue;
                }
            };
            let rep = md.identity_report()?;
            agg.report(&prefix, &rep, TOL);
            let e = md.projection_e()?;
            agg.push(format!("{prefix}E_H modular formula vs direct"), e.worst(), TOL);
            let p = md.cutting_p()?;
            agg.push(format!("{prefix}P_H modular formula vs direct"), p.worst(), TOL);
            let spec = md.delta_spectrum();
            rows.push(ModularRow {
                n,
                sample,
                worst_residual: rep.worst_residual().max(e.worst()).max(p.worst()),
                delta_min: spec.iter().copied().fold(f64::INFINITY, f64::min),
                delta_max: spec.iter().copied().fold(0.0, f64::max),
            });
        }
    }
    worked_example(&mut agg)?;
    Ok(agg.finish(suite, vec![csv_table("modular_identities.csv", &rows)?]))
}

/// `A = 1`, `B = R/2`: `spec Δ = {3, 1/3}` and `E_H E_H'|_H = 3/4`.
fn worked_example(agg: &mut Aggregate) -> Result<()> {
    const TOL: f64 = 1e-10;
    let abs = AbstractSubspace::two_dim(0.5)?;
    let md = orthogonal_dilation(&abs)?.subspace.modular_data()?;
    let mut spec = md.delta_spectrum().to_vec();
    spec.sort_by(f64::total_cmp);
    let want = [1.0 / 3.0, 1.0 / 3.0, 3.0, 3.0];
    let r = spec.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    agg.push("[b=1/2] spec(Delta) = {3, 1/3}", r, TOL);
    let h = md.subspace();
    let q = h.basis();
    let qc = h.complement_basis();
    let ee = q.transpose() * h.projection() * qc * qc.transpose() * q;
    agg.push(
        "[b=1/2] E_H E_H'|_H = 0.75",
        frobenius(&(ee - Mat::identity(2, 2) * 0.75)),
        TOL,
    );
    Ok(())
}

#[derive(Serialize)]
struct DilationRow {
    #[serde(rename = "N")]
    n: usize,
    sample: usize,
    delta_intertwining: f64,
    polariser_orthogonal: f64,
    polariser_symplectic: f64,
    alpha_hat_cond: f64,
}

fn dilation(cfg: &RunConfig) -> Result<SuiteOutput> {
    let suite = Suite::Dilation;
    let mut agg = Aggregate::new(cfg);
    let mut rows = Vec::new();
    for &n in cfg.even_dims()? {
        let mut rng = cfg.stream(suite, n);
        let prefix = format!("[N={n}] ");
        for sample in 0..cfg.samples_or(50) {
            let abs = AbstractSubspace::sample(&mut rng, n)?;
            let od = orthogonal_dilation(&abs)?;
            let sd = match symplectic_dilation(&abs) {
                Ok(sd) => sd,
                Err(e) => {
                    agg.error(format!("{prefix}symplectic dilation"), &e);
                    continue;
                }
            };
            agg.report(&format!("{prefix}orthogonal: "), &od.axioms(&abs, 1e-10), 1e-10);
            agg.report(&format!("{prefix}symplectic: "), &sd.dilation.axioms(&abs, 1e-10), 1e-10);
            agg.report(&format!("{prefix}symplectic: "), &sd.report(1e-10), 1e-10);
            let u = one_particle_unitary(&od, &sd.dilation)?;
            let d1 = od.subspace.modular_data()?;
            let d2 = sd.dilation.subspace.modular_data()?;
            let dim = u.nrows();
            let inter = frobenius(&(&u * d1.delta() * u.transpose() - d2.delta()));
            agg.push(format!("{prefix}U Delta1 U* = Delta2"), inter, 1e-8);
            agg.push(
                format!("{prefix}U unitary"),
                frobenius(&(u.transpose() * &u - Mat::identity(dim, dim))),
                1e-8,
            );
            agg.push(
                format!("{prefix}U i1 = i2 U"),
                frobenius(&(&u * od.space.i_op() - sd.dilation.space.i_op() * &u)),
                1e-8,
            );
            let po = od.polariser_residual(&abs)?;
            let ps = sd.dilation.polariser_residual(&abs)?;
            agg.push(format!("{prefix}orthogonal: embedded polariser = D"), po, 1e-10);
            agg.push(format!("{prefix}symplectic: embedded polariser = D"), ps, 1e-10);
            rows.push(DilationRow {
                n,
                sample,
                delta_intertwining: inter,
                polariser_orthogonal: po,
                polariser_symplectic: ps,
                alpha_hat_cond: sd.alpha_hat_condition(),
            });
        }
    }
    Ok(agg.finish(suite, vec![csv_table("dilation.csv", &rows)?]))
}

#[derive(Serialize)]
struct ShaleRow {
    #[serde(rename = "N")]
    n: usize,
    sample: usize,
    hs_defect: f64,
    comm_defect: f64,
    identity_residual: f64,
}

fn push_blocks(agg: &mut Aggregate, prefix: &str, res: Result<CommutatorBlocks>) -> Option<CommutatorBlocks> {
    match res {
        Ok(b) => {
            agg.report(prefix, &b.report, 1e-8);
            Some(b)
        }
        Err(Error::Consistency {
            name,
            residual,
            tolerance,
        }) => {
            agg.push(format!("{prefix}{name}"), residual, tolerance);
            None
        }
        Err(e) => {
            agg.error(format!("{prefix}commutator blocks"), &e);
            None
        }
    }
}

fn bogoliubov(cfg: &RunConfig) -> Result<SuiteOutput> {
    let suite = Suite::Bogoliubov;
    let mut agg = Aggregate::new(cfg);
    let mut scan_rows = Vec::new();
    let mut shale_rows = Vec::new();
    for &n in cfg.even_dims()? {
        let mut rng = cfg.stream(suite, n);
        let prefix = format!("[N={n}] ");
        for sample in 0..cfg.samples_or(50) {
            let (m1, m2) = match random_md(&mut rng, n).and_then(|a| Ok((a, random_md(&mut rng, n)?))) {
                Ok(pair) => pair,
                Err(e) => {
                    agg.error(format!("{prefix}modular data"), &e);
                    continue;
                }
            };
            agg.report(&prefix, &m1.block_form_report()?, 1e-8);
            let d1 = m1.polariser();
            let scale = uniform(&mut rng, 0.05, 0.5);
            let t = random_symplectic(&mut rng, &d1, scale)?;
            if let Some(b) = push_blocks(&mut agg, &prefix, tilde_commutator_blocks(&t, &m1)) {
                scan_rows.push(ScanRow::new(n, sample as u64, scale, &b));
            }
            let t12 = random_symplectic_between(&mut rng, &d1, &m2.polariser(), scale)?;
            push_blocks(
                &mut agg,
                &format!("{prefix}two spaces: "),
                implementability_conditions(&t12, &m1, &m2),
            );
            let x = &t - Mat::identity(n, n);
            push_blocks(&mut agg, &prefix, innerness_blocks(&x, &m1));
            let s = uniform(&mut rng, -2.0, 2.0);
            if let Some(b) = push_blocks(
                &mut agg,
                &format!("{prefix}modular flow: "),
                tilde_commutator_blocks(&m1.flow_on_h(s), &m1),
            ) {
                let worst = b.block_norms.iter().copied().fold(0.0, f64::max);
                agg.push(format!("{prefix}modular flow: [T~,i] blocks vanish"), worst, 1e-9);
            }
        }
        let space = RealifiedSpace::standard(n);
        let beta = space.beta_gram(&Mat::identity(2 * n, 2 * n));
        for sample in 0..cfg.samples_or(100) {
            let scale = uniform(&mut rng, 0.05, 0.5);
            let t = random_symplectic(&mut rng, &beta, scale)?;
            let sd = shale_defect(&space, &t)?;
            agg.push(format!("{prefix}[T,i] = -T i (T*T - 1)"), sd.identity_residual, 1e-10);
            shale_rows.push(ShaleRow {
                n,
                sample,
                hs_defect: sd.hs_defect,
                comm_defect: sd.comm_defect,
                identity_residual: sd.identity_residual,
            });
        }
    }
    let mut scan = Vec::new();
    crate::bogoliubov::write_scan_csv(&scan_rows, &mut scan)?;
    Ok(agg.finish(
        suite,
        vec![
            Table {
                file: "bogoliubov_blocks.csv".into(),
                body: scan,
            },
            csv_table("shale.csv", &shale_rows)?,
        ],
    ))
}

#[derive(Serialize)]
struct QeRow {
    #[serde(rename = "N")]
    n: usize,
    sample: usize,
    t1_norm: f64,
    t2_norm: f64,
    brute_t1_norm: f64,
    brute_t2_norm: f64,
    chain_worst_residual: f64,
}

#[derive(Serialize)]
struct FockRow {
    sample: usize,
    norm_h: f64,
    norm_k: f64,
    vacuum_kernel_residual: f64,
    ccr_residual: f64,
}

fn random_cvec(rng: &mut SeededRng, n: usize, norm: f64) -> Vec<Complex64> {
    let g = gaussian_matrix(rng, 2 * n, 1);
    let len = g.norm();
    (0..n)
        .map(|j| Complex64::new(g[j], g[n + j]) * (norm / len))
        .collect()
}

fn quasiequiv(cfg: &RunConfig) -> Result<SuiteOutput> {
    let suite = Suite::Quasiequiv;
    let mut agg = Aggregate::new(cfg);
    let mut rows = Vec::new();
    for &n in cfg.even_dims()? {
        let mut rng = cfg.stream(suite, n);
        let prefix = format!("[N={n}] ");
        for sample in 0..cfg.samples_or(50) {
            let (a1, a2) = quasiequiv::sample_pair(&mut rng, n)?;
            let chain = match quasiequiv::qe_corollary_chain(&a1, &a2) {
                Ok(c) => c,
                Err(e) => {
                    agg.error(format!("{prefix}criterion chain"), &e);
                    continue;
                }
            };
            agg.report(&prefix, &chain.report, quasiequiv::CHAIN_TOL);
            let q = quasiequiv::qe_theorem_norms(&a1, &a2)?;
            agg.push(
                format!("{prefix}condition a norm: calculus = brute force"),
                (q.t1_norm - q.brute_t1_norm).abs() / (1.0 + q.t1_norm),
                1e-10,
            );
            agg.push(
                format!("{prefix}condition b norm: calculus = brute force"),
                (q.t2_norm - q.brute_t2_norm).abs() / (1.0 + q.t2_norm),
                1e-10,
            );
            let h = DVector::from_fn(n, |_, _| uniform(&mut rng, -1.0, 1.0));
            let s = uniform(&mut rng, -3.0, 3.0);
            agg.push(
                format!("{prefix}state invariant under modular flow"),
                quasiequiv::modular_flow_invariance(&a1, &h, s)?,
                1e-10,
            );
            let family = gaussian_matrix(&mut rng, n, 6);
            let g = quasiequiv::kernel_gram(&a1, &family)?;
            agg.push(
                format!("{prefix}kernel positive definite"),
                (-quasiequiv::min_eigenvalue(&g)).max(0.0),
                1e-10,
            );
            rows.push(QeRow {
                n,
                sample,
                t1_norm: q.t1_norm,
                t2_norm: q.t2_norm,
                brute_t1_norm: q.brute_t1_norm,
                brute_t2_norm: q.brute_t2_norm,
                chain_worst_residual: chain.report.worst_residual(),
            });
        }
    }
    let fock_rows = fock_checks(cfg, &mut agg)?;
    Ok(agg.finish(
        suite,
        vec![
            csv_table("quasiequiv.csv", &rows)?,
            csv_table("fock_ccr.csv", &fock_rows)?,
        ],
    ))
}

fn fock_checks(cfg: &RunConfig, agg: &mut Aggregate) -> Result<Vec<FockRow>> {
    let fock = TruncatedFock::new(2, 40)?;
    let mut rng = cfg.stream(Suite::Quasiequiv, 0);
    let mut rows = Vec::new();
    for sample in 0..cfg.samples_or(10).min(20) {
        let (nh, nk) = (uniform(&mut rng, 0.1, 1.0), uniform(&mut rng, 0.1, 1.0));
        let h = random_cvec(&mut rng, 2, nh);
        let k = random_cvec(&mut rng, 2, nk);
        let vac = fock.vacuum_kernel_residual(&h)?;
        let ccr = fock.ccr_residual(&h, &k, 5)?;
        agg.push("[Fock cutoff 40] <0|V(h)|0> = exp(-|h|^2/2)", vac, 1e-10);
        agg.push("[Fock cutoff 40] V(h+k) = e^{i Im(h,k)} V(h) V(k) on <= 5 particles", ccr, 1e-8);
        rows.push(FockRow {
            sample,
            norm_h: nh,
            norm_k: nk,
            vacuum_kernel_residual: vac,
            ccr_residual: ccr,
        });
    }
    Ok(rows)
}

#[derive(Serialize)]
struct EntropyRow {
    packet: String,
    closed_form: f64,
    modular_route: f64,
    raw_modular_value: f64,
    relative_gap: f64,
    zero_mode_leak: f64,
}

#[derive(Serialize)]
struct NamedReport {
    packet: String,
    #[serde(flatten)]
    report: qft1d::EntropyReport,
}

fn entropy(cfg: &RunConfig) -> Result<SuiteOutput> {
    let suite = Suite::Entropy;
    let mut agg = Aggregate::new(cfg);
    let grid = SpectralGrid::new(cfg.grid_n, cfg.box_half)?;
    let bump = |x: f64| if x.abs() < 1.0 { x * (1.0 - x * x).powi(2) } else { 0.0 };
    let oracle = qft1d::WavePacket::from_fns(&grid, |_| 0.0, bump);
    let beta_value = 256.0 * std::f64::consts::PI / 9009.0;
    let s = qft1d::entropy_closed_form(&grid, &oracle)?;
    agg.push(
        "g = x(1-x^2)^2: closed form = 256 pi / 9009",
        (s - beta_value).abs() / beta_value,
        1e-3,
    );
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (name, phi) in qft1d::packet_corpus(&grid)? {
        match qft1d::entropy_report(&grid, &phi) {
            Ok(rep) => {
                agg.push(format!("[{name}] modular route = closed form"), rep.relative_gap, 1e-2);
                let s2 = qft1d::entropy_closed_form(&grid, &phi.scaled(2.0))?;
                agg.push(
                    format!("[{name}] S[2 phi] = 4 S[phi]"),
                    (s2 - 4.0 * rep.closed_form).abs() / (4.0 * rep.closed_form.abs()).max(1e-300),
                    1e-12,
                );
                rows.push(EntropyRow {
                    packet: name.clone(),
                    closed_form: rep.closed_form,
                    modular_route: rep.modular_route,
                    raw_modular_value: rep.raw_modular_value,
                    relative_gap: rep.relative_gap,
                    zero_mode_leak: rep.zero_mode_leak,
                });
                reports.push(NamedReport { packet: name, report: rep });
            }
            Err(e) => agg.error(format!("[{name}] entropy routes"), &e),
        }
    }
    let f = |x: f64| if x.abs() < 1.0 { (1.0 - x * x).powi(3) } else { 0.0 };
    let base = qft1d::entropy_closed_form(&grid, &qft1d::WavePacket::from_fns(&grid, f, bump))?;
    let iv = Interval::new(0.5, 1.5)?;
    let moved = iv.transport(&grid, f, bump);
    match qft1d::entropy_report_on(&grid, &moved, iv) {
        Ok(rep) => {
            agg.push(
                "[interval (-1, 2)] closed form covariant",
                (rep.closed_form - base).abs() / base,
                1e-3,
            );
            agg.push(
                "[interval (-1, 2)] modular route covariant",
                (rep.modular_route - base).abs() / base,
                1e-2,
            );
        }
        Err(e) => agg.error("[interval (-1, 2)] entropy routes", &e),
    }
    let json = serde_json::to_string_pretty(&reports)? + "\n";
    Ok(agg.finish(
        suite,
        vec![
            csv_table("entropy.csv", &rows)?,
            Table {
                file: "entropy.json".into(),
                body: json.into_bytes(),
            },
        ],
    ))
}

fn helmholtz_suite(cfg: &RunConfig) -> Result<SuiteOutput> {
    use std::f64::consts::PI;
    let suite = Suite::Helmholtz;
    let mut agg = Aggregate::new(cfg);
    let op = LineOperator::new(cfg.helmholtz_box, cfg.interval_points)?;
    let grid = op.interval_grid();
    let refs = helmholtz::reference_extensions(&op);
    let dir = refs.dirichlet_spectrum();
    let kre = refs.krein_spectrum();
    let d1 = PI * PI / 4.0;
    agg.push("Dirichlet lambda_1 = pi^2/4", (dir[0] - d1).abs() / d1, 5e-3);
    agg.push("Krein lambda_1 = lambda_2 = 0", kre[0].abs().max(kre[1].abs()), 1e-6);

    let mut exts = Vec::new();
    for &m in &cfg.masses {
        match helmholtz::extension_am(&op, m) {
            Ok(e) => exts.push(e),
            Err(e) => agg.error(format!("[m={m}] extension"), &e),
        }
    }
    for e in &exts {
        let m = e.m;
        let k = helmholtz::robin_root(m);
        agg.push(
            format!("[m={m}] lambda_1(A_m) = k^2, k tan k = m"),
            (e.lambda1() - k * k).abs() / (k * k),
            1e-2,
        );
        agg.push(format!("[m={m}] A_m >= 0"), (-e.lambda1()).max(0.0), 1e-9);
        agg.push(
            format!("[m={m}] lambda_1(A_m) < Dirichlet lambda_1"),
            (e.lambda1() - dir[0]).max(0.0),
            0.0,
        );
        agg.push(
            format!("[m={m}] f'(1) + m f(1) = 0 (ground state)"),
            e.robin_residual(),
            helmholtz::ROBIN_TOL_CELLS * e.h,
        );
        let xis: Vec<Vec<f64>> = helmholtz::trial_corpus(&grid, 4, cfg.seed)
            .into_iter()
            .map(|t| {
                let mut v = t.values;
                let last = v.len() - 1;
                v[0] = 0.0;
                v[last] = 0.0;
                v
            })
            .collect();
        agg.push(
            format!("[m={m}] T (A + m^2) xi = xi"),
            e.ba_identity_residual(&op, &xis)?,
            helmholtz::BA_TOL,
        );
    }
    let lams: Vec<f64> = exts.iter().map(|e| e.lambda1()).collect();
    if lams.len() > 1 {
        let drop = lams
            .windows(2)
            .map(|w| if w[1] > w[0] { 0.0 } else { w[0] - w[1] + f64::MIN_POSITIVE })
            .fold(0.0, f64::max);
        agg.push("lambda_1(A_m) strictly increasing in m", drop, 0.0);
    }
    let mut form_rows = Vec::new();
    if let Some(e1) = exts.iter().find(|e| e.m == 1.0).or(exts.first()) {
        let trials = helmholtz::trial_corpus(&grid, 20, 3);
        let order = helmholtz::form_order_check(e1, &grid, &trials)?;
        agg.report(&format!("[m={}] ", e1.m), &order.report, helmholtz::FORM_TOL);
        form_rows = order.rows;
    }
    let spectrum = helmholtz::spectrum_rows(&exts, &refs, 10);
    Ok(agg.finish(
        suite,
        vec![
            csv_table("helmholtz_spectrum.csv", &spectrum)?,
            csv_table("helmholtz_forms.csv", &form_rows)?,
        ],
    ))
}

/// Quantities available to [`scan`].
pub const SCAN_QUANTITIES: [&str; 5] = ["t1_norm", "cond_a", "cond_b", "hs_defect", "lambda1_Am"];

#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub quantity: String,
    pub parameter: f64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct ScanOutput {
    pub quantity: String,
    /// `dims`, `squeeze` or `mass`.
    pub over: &'static str,
    pub points: Vec<ScanPoint>,
    pub monotone_increasing: bool,
}

impl ScanOutput {
    pub fn csv(&self) -> Result<Vec<u8>> {
        Ok(csv_table("", &self.points)?.body)
    }

    pub fn file_name(&self) -> String {
        format!("scan_{}.csv", self.quantity)
    }
}

/// Tabulates `quantity` over its natural parameter. `values` overrides the default
/// squeeze factors or masses; dimension scans use `cfg.dims`.
pub fn scan(quantity: &str, cfg: &RunConfig, values: Option<&[f64]>) -> Result<ScanOutput> {
    let (over, params): (&'static str, Vec<f64>) = match quantity {
        "t1_norm" => {
            if cfg.dims.is_empty() {
                return Err(Error::InvalidArgument("dimension list is empty".into()));
            }
            ("dims", cfg.even_dims()?.iter().map(|&n| n as f64).collect())
        }
        "cond_a" | "cond_b" | "hs_defect" => (
            "squeeze",
            values.map(<[f64]>::to_vec).unwrap_or_else(|| vec![1.0, 1.25, 1.5, 2.0, 3.0, 4.0]),
        ),
        "lambda1_Am" => ("mass", values.map(<[f64]>::to_vec).unwrap_or_else(|| cfg.masses.clone())),
        other => {
            return Err(Error::UnknownQuantity {
                name: other.into(),
                available: SCAN_QUANTITIES.join(", "),
            })
        }
    };
    if params.is_empty() {
        return Err(Error::InvalidArgument(format!("no {over} values to scan")));
    }
    let mut points = Vec::with_capacity(params.len());
    let n0 = *cfg.dims.first().unwrap_or(&2);
    let scan_dim = if n0.is_multiple_of(2) && n0 > 0 { n0 } else { 2 };
    let fixed_md = || -> Result<ModularData> {
        let mut rng = sampling::rng(cfg.seed);
        random_md(&mut rng, scan_dim)
    };
    let md = if over == "squeeze" { Some(fixed_md()?) } else { None };
    let helm_op = if over == "mass" {
        Some(LineOperator::new(cfg.helmholtz_box, cfg.interval_points)?)
    } else {
        None
    };
    for &p in &params {
        let value = match quantity {
            "t1_norm" => {
                let n = p as usize;
                let mut rng = cfg.stream(Suite::Quasiequiv, n);
                let (a1, a2) = quasiequiv::sample_pair(&mut rng, n)?;
                quasiequiv::qe_theorem_norms(&a1, &a2)?.t1_norm
            }
            "cond_a" | "cond_b" => {
                let md = md.as_ref().expect("squeeze scans build modular data");
                let d = md.polariser();
                let w = darboux_frame(&d)?;
                let t = &w * squeeze(scan_dim / 2, p) * inverse(&w)?;
                let b = tilde_commutator_blocks(&t, md)?;
                if quantity == "cond_a" {
                    b.cond_a
                } else {
                    b.cond_b
                }
            }
            "hs_defect" => {
                let space = RealifiedSpace::standard(scan_dim);
                let beta = space.beta_gram(&Mat::identity(2 * scan_dim, 2 * scan_dim));
                let w = darboux_frame(&beta)?;
                let t = &w * squeeze(scan_dim, p) * inverse(&w)?;
                shale_defect(&space, &t)?.hs_defect
            }
            _ => {
                let op = helm_op.as_ref().expect("mass scans build the line operator");
                helmholtz::extension_am(op, p)?.lambda1()
            }
        };
        points.push(ScanPoint {
            quantity: quantity.into(),
            parameter: p,
            value,
        });
    }
    let monotone_increasing = points.windows(2).all(|w| w[1].value > w[0].value);
    Ok(ScanOutput {
        quantity: quantity.into(),
        over,
        points,
        monotone_increasing,
    })
}
