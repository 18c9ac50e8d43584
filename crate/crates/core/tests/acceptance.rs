//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Every quantitative target is recomputed here from an oracle that does not go
//! through the library routine under test (Simpson quadrature, Newton on the Robin
//! equation, Δ spectrum from polariser singular values, a hand-built complement).

use std::f64::consts::PI;
use std::cell::OnceCell;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use modspace::dilation::{orthogonal_dilation, AbstractSubspace};
use modspace::helmholtz::{self, LineOperator};
use modspace::linalg::{frobenius, Mat};
use modspace::qft1d::{self, SpectralGrid, WavePacket};
use modspace::sampling;
use modspace::suites::{run_suite, RunConfig, Suite, SuiteOutput};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

type Outcome = Result<Verdict, String>;

/// Worst residual and match count over checks whose name contains `pat`.
fn worst(out: &SuiteOutput, pat: &str) -> (f64, usize) {
    out.checks
        .iter()
        .filter(|(_, c)| c.identity_name.contains(pat))
        .fold((0.0_f64, 0), |(w, n), (_, c)| (w.max(c.residual), n + 1))
}

fn worst_where(out: &SuiteOutput, keep: impl Fn(&str) -> bool) -> (f64, usize, usize) {
    out.checks
        .iter()
        .filter(|(_, c)| keep(&c.identity_name))
        .fold((0.0_f64, 0, 0), |(w, n, bad), (_, c)| {
            (w.max(c.residual), n + 1, bad + usize::from(!c.pass))
        })
}

fn suite(s: Suite) -> Result<SuiteOutput, String> {
    run_suite(s, &RunConfig::default()).map_err(|e| format!("{} suite: {e}", s.name()))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let inner: f64 = (1..panels)
        .map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    h / 3.0 * (f(a) + f(b) + inner)
}

/// Smallest positive root of `k tan k = m` by Newton from `k = min(1, sqrt m)`.
fn robin_oracle(m: f64) -> f64 {
    let mut k = m.sqrt().min(1.0);
    for _ in 0..60 {
        let (s, c) = k.sin_cos();
        let f = k * s - m * c;
        let df = s + k * c + m * s;
        k -= f / df;
    }
    k
}

fn c1_modular_identities() -> Outcome {
    let out = suite(Suite::ModularIdentities)?;
    let (w, n, bad) = worst_where(&out, |name| !name.starts_with("[b=1/2]"));
    // Δ spectrum from singular values of D: e^{|l|} = (1 + ν)/(1 − ν).
    let mut rng = sampling::rng(11);
    let mut spec_err = 0.0_f64;
    for n in [2, 4, 8, 16] {
        for _ in 0..10 {
            let abs = AbstractSubspace::sample(&mut rng, n).map_err(|e| e.to_string())?;
            let md = orthogonal_dilation(&abs)
                .and_then(|d| d.subspace.modular_data())
                .map_err(|e| e.to_string())?;
            let nu = abs.polariser().clone().svd(false, false).singular_values;
            let predicted: Vec<f64> = nu
                .iter()
                .flat_map(|&v| [(1.0 + v) / (1.0 - v), (1.0 - v) / (1.0 + v)])
                .collect();
            for &l in md.delta_spectrum() {
                let d = predicted
                    .iter()
                    .map(|p| (p - l).abs() / p.max(1.0))
                    .fold(f64::INFINITY, f64::min);
                spec_err = spec_err.max(d);
            }
        }
    }
    Ok(Verdict::new(
        bad == 0 && w <= 1e-8 && spec_err <= 1e-8,
        format!("{n} identities, worst {w:.2e} <= 1e-8; spec(Delta) vs singular values of D {spec_err:.2e}"),
    ))
}

fn c2_dilation() -> Outcome {
    let out = suite(Suite::Dilation)?;
    let (wu, nu) = worst(&out, "U Delta1 U* = Delta2");
    let (wp, np) = worst(&out, "embedded polariser = D");
    Ok(Verdict::new(
        out.all_pass() && nu > 0 && np > 0 && wu <= 1e-8 && wp <= 1e-10,
        format!("|U D1 U* - D2| {wu:.2e} <= 1e-8, embedded polariser {wp:.2e} <= 1e-10"),
    ))
}

fn c3_worked_example() -> Outcome {
    let abs = AbstractSubspace::two_dim(0.5).map_err(|e| e.to_string())?;
    let dil = orthogonal_dilation(&abs).map_err(|e| e.to_string())?;
    let md = dil.subspace.modular_data().map_err(|e| e.to_string())?;
    let mut spec = md.delta_spectrum().to_vec();
    spec.sort_by(f64::total_cmp);
    let spec_err = spec
        .iter()
        .zip([1.0 / 3.0, 1.0 / 3.0, 3.0, 3.0])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    // E_H' = 1 - (iQ)(iQ)^T for an orthonormal frame Q of H and orthogonal i.
    let q = dil.subspace.basis();
    let i = dil.space.i_op();
    let iq = i * q;
    let dim = i.nrows();
    let e_comp = Mat::identity(dim, dim) - &iq * iq.transpose();
    let compressed = q.transpose() * e_comp * q;
    let ee_err = frobenius(&(compressed - Mat::identity(2, 2) * 0.75));
    Ok(Verdict::new(
        spec_err <= 1e-10 && ee_err <= 1e-10,
        format!("spec(Delta) vs {{1/3, 3}} {spec_err:.2e}, E_H E_H'|_H vs 0.75 {ee_err:.2e}"),
    ))
}

fn c4_blocks(out: &SuiteOutput) -> Outcome {
    let (w, n, bad) = worst_where(out, |name| {
        !name.contains("[T,i] = -T i") && !name.contains("modular flow")
    });
    let (wf, _) = worst(out, "modular flow: [T~,i] blocks vanish");
    Ok(Verdict::new(
        bad == 0 && w <= 1e-8 && wf <= 1e-9,
        format!("{n} block identities, worst {w:.2e} <= 1e-8; modular-flow blocks {wf:.2e} <= 1e-9"),
    ))
}

fn c5_shale(out: &SuiteOutput) -> Outcome {
    let (w, n) = worst(out, "[T,i] = -T i (T*T - 1)");
    Ok(Verdict::new(
        n > 0 && w <= 1e-10,
        format!("|[T,i] - T i (1 - T*T)| {w:.2e} <= 1e-10 over {n} dimensions"),
    ))
}

fn c6_quasiequiv(out: &SuiteOutput) -> Outcome {
    let (wn, nn) = worst(out, "norm: calculus = brute force");
    let (wc, nc, bad) = worst_where(out, |name| {
        !name.contains("Fock cutoff") && !name.contains("norm: calculus")
    });
    Ok(Verdict::new(
        bad == 0 && nn > 0 && wc <= 1e-9 && wn <= 1e-10,
        format!("{nc} chain identities, worst {wc:.2e} <= 1e-9; theorem norms {wn:.2e} <= 1e-10"),
    ))
}

fn c7_ccr(out: &SuiteOutput) -> Outcome {
    let (wv, nv) = worst(out, "<0|V(h)|0> = exp(-|h|^2/2)");
    let (ww, nw) = worst(out, "on <= 5 particles");
    Ok(Verdict::new(
        nv > 0 && nw > 0 && wv <= 1e-10 && ww <= 1e-8,
        format!("vacuum kernel {wv:.2e} <= 1e-10, Weyl relation {ww:.2e} <= 1e-8"),
    ))
}

fn c8_entropy() -> Outcome {
    let beta_oracle = simpson(
        |x| 0.5 * PI * x * x * (1.0 - x * x).powi(5),
        -1.0,
        1.0,
        20_000,
    );
    let pinned = 256.0 * PI / 9009.0;
    let oracle_gap = (beta_oracle - pinned).abs() / pinned;
    let grid = SpectralGrid::new(4096, qft1d::DEFAULT_BOX).map_err(|e| e.to_string())?;
    let phi = WavePacket::from_fns(
        &grid,
        |_| 0.0,
        |x| if x.abs() < 1.0 { x * (1.0 - x * x).powi(2) } else { 0.0 },
    );
    let s = qft1d::entropy_closed_form(&grid, &phi).map_err(|e| e.to_string())?;
    let rel = (s - beta_oracle).abs() / beta_oracle;
    let s2 = qft1d::entropy_closed_form(&grid, &phi.scaled(2.0)).map_err(|e| e.to_string())?;
    let scaling = (s2 - 4.0 * s).abs() / s;
    let mut route_gap = 0.0_f64;
    let corpus = qft1d::packet_corpus(&grid).map_err(|e| e.to_string())?;
    for (_, p) in &corpus {
        let c = qft1d::entropy_closed_form(&grid, p).map_err(|e| e.to_string())?;
        let r = qft1d::entropy_modular_route(&grid, p).map_err(|e| e.to_string())?;
        route_gap = route_gap.max((r.value - c).abs() / c);
    }
    Ok(Verdict::new(
        oracle_gap <= 1e-9 && rel <= 1e-3 && route_gap <= 1e-2 && scaling <= 1e-12 && corpus.len() == 10,
        format!(
            "S = {s:.6} vs quadrature {beta_oracle:.6} (rel {rel:.1e}); modular route gap {route_gap:.1e} on {} packets; scaling {scaling:.1e}",
            corpus.len()
        ),
    ))
}

fn c9_helmholtz() -> Outcome {
    let op = LineOperator::new(helmholtz::DEFAULT_BOX, helmholtz::DEFAULT_INTERVAL_POINTS)
        .map_err(|e| e.to_string())?;
    let ext = helmholtz::extension_am(&op, 1.0).map_err(|e| e.to_string())?;
    let k = robin_oracle(1.0);
    let robin_rel = (ext.lambda1() - k * k).abs() / (k * k);
    let refs = helmholtz::reference_extensions(&op);
    let dir1 = refs.dirichlet_spectrum().iter().copied().fold(f64::INFINITY, f64::min);
    let dir_rel = (dir1 - PI * PI / 4.0).abs() / (PI * PI / 4.0);
    let grid = op.interval_grid();
    let trials = helmholtz::trial_corpus(&grid, 17, 3);
    let order = helmholtz::form_order_check(&ext, &grid, &trials).map_err(|e| e.to_string())?;
    Ok(Verdict::new(
        robin_rel <= 1e-2 && dir_rel <= 5e-3 && order.report.all_pass() && trials.len() == 20,
        format!(
            "lambda_1(A_1) = {:.5} vs k^2 = {:.5} (rel {robin_rel:.1e}); Dirichlet rel {dir_rel:.1e}; form order on {} functions, margins {:.1e}/{:.1e}",
            ext.lambda1(),
            k * k,
            trials.len(),
            order.lower_margin,
            order.upper_margin
        ),
    ))
}

fn c10_determinism() -> Outcome {
    let cfg = RunConfig::default();
    let mut compared = 0;
    for s in Suite::ALL {
        let a = run_suite(s, &cfg).map_err(|e| e.to_string())?;
        let b = run_suite(s, &cfg).map_err(|e| e.to_string())?;
        let ca = a.checks_csv().map_err(|e| e.to_string())?;
        let cb = b.checks_csv().map_err(|e| e.to_string())?;
        if ca != cb {
            return Ok(Verdict::new(false, format!("{}: checks.csv differs", s.name())));
        }
        compared += 1;
        for (ta, tb) in a.tables.iter().zip(&b.tables) {
            if ta.file.ends_with(".csv") {
                if ta.body != tb.body {
                    return Ok(Verdict::new(false, format!("{}: {} differs", s.name(), ta.file)));
                }
                compared += 1;
            }
        }
    }
    Ok(Verdict::new(true, format!("{compared} CSV bodies byte-identical across two runs")))
}

fn main() -> ExitCode {
    let limit = |s: u64| Some(Duration::from_secs(s));
    let mut failed = 0;
    let mut line = |id: usize, title: &str, budget: Option<Duration>, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = budget.is_none_or(|b| took <= b);
        let ok = pass && in_time;
        failed += usize::from(!ok);
        let budget = budget.map_or(String::new(), |b| format!(" <= {} s", b.as_secs()));
        println!(
            "criterion {id:>2} {:<4} {title}: {detail} [{:.2} s{budget}]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    };
    line(1, "modular identities", limit(30), &c1_modular_identities);
    line(2, "dilation equivalence", None, &c2_dilation);
    line(3, "worked b = 1/2 example", None, &c3_worked_example);
    // Suites shared by two criteria run inside the first one's timing.
    let bogo = OnceCell::new();
    let qe = OnceCell::new();
    let with = |cell: &OnceCell<Result<SuiteOutput, String>>, s: Suite, f: fn(&SuiteOutput) -> Outcome| {
        match cell.get_or_init(|| suite(s)) {
            Ok(o) => f(o),
            Err(e) => Err(e.clone()),
        }
    };
    line(4, "block formulas", None, &|| with(&bogo, Suite::Bogoliubov, c4_blocks));
    line(5, "Shale identity", None, &|| with(&bogo, Suite::Bogoliubov, c5_shale));
    line(6, "quasi-equivalence chain", None, &|| with(&qe, Suite::Quasiequiv, c6_quasiequiv));
    line(7, "CCR at truncation", None, &|| with(&qe, Suite::Quasiequiv, c7_ccr));
    line(8, "wave-packet entropy", limit(10), &c8_entropy);
    line(9, "Helmholtz extension", limit(20), &c9_helmholtz);
    line(10, "determinism", None, &c10_determinism);
    if failed == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria fail");
        ExitCode::FAILURE
    }
}
