//! Massless scalar field in 1+1 dimensions on a periodic spectral grid.
//!
//! Cauchy data `Φ = ⟨f, g⟩` live in `H^{1/2} ⊕ Ḣ^{-1/2}`. Fourier multipliers act
//! through an FFT on `[-L, L)`; with `U = DFT(u)` the Sobolev norm is
//! `‖u‖²_s = Σ_k (k² + m²)^s |U_k|² dx/N`, the discrete Parseval weighting.
//!
//! The interval modular Hamiltonian acts as `log Δ = 2π ι₀ M` with
//! `M = [[0, w], [∂ w ∂, 0]]` and `w(x) = (r² − (x−a)²)/(2r)` for the interval
//! `(a−r, a+r)`; on `(-1, 1)` this is `w = (1−x²)/2`. The entropy of a packet is
//! `S = 2π ∫ w · ½(g² + f'²) dx`.

use std::fmt;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};

pub const DEFAULT_N: usize = 2048;
pub const DEFAULT_BOX: f64 = 8.0;
/// Relative size of the zero mode allowed in dotted data.
pub const DOTTED_TOL: f64 = 1e-10;
/// Relative size of samples allowed outside the interval.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Route disagreement that counts as a discretization failure.
pub const ROUTE_FAILURE: f64 = 0.05;

#[derive(Clone)]
pub struct SpectralGrid {
    n: usize,
    half: f64,
    dx: f64,
    x: Vec<f64>,
    k: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("box_half_length", &self.half)
            .finish()
    }
}

impl SpectralGrid {
    pub fn new(n: usize, box_half_length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a power of two >= 8, got {n}"
            )));
        }
        if !(box_half_length > 1.0) || !box_half_length.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "box half-length must exceed 1, got {box_half_length}"
            )));
        }
        let dx = 2.0 * box_half_length / n as f64;
        let x = (0..n).map(|j| -box_half_length + j as f64 * dx).collect();
        let base = std::f64::consts::PI / box_half_length;
        let k = (0..n)
            .map(|j| {
                let m = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                base * m
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            half: box_half_length,
            dx,
            x,
            k,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_half_length(&self) -> f64 {
        self.half
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.x.iter().map(|&x| f(x)).collect()
    }

    fn check(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.n {
            return Err(dim_mismatch(self.n, u.len()));
        }
        Ok(())
    }

    pub fn fft(&self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    pub fn ifft_real(&self, mut buf: Vec<Complex64>) -> Vec<f64> {
        self.inv.process(&mut buf);
        let s = 1.0 / self.n as f64;
        buf.iter().map(|z| z.re * s).collect()
    }

    /// Real Fourier multiplier; the Nyquist mode is kept with the symbol at `|k|`.
    pub fn multiplier(&self, u: &[f64], symbol: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut buf = self.fft(u);
        for (z, &k) in buf.iter_mut().zip(&self.k) {
            *z *= symbol(k);
        }
        self.ifft_real(buf)
    }

    /// Spectral derivative (Nyquist mode dropped).
    pub fn derivative(&self, u: &[f64]) -> Vec<f64> {
        let mut buf = self.fft(u);
        for (j, z) in buf.iter_mut().enumerate() {
            *z *= if j == self.n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, self.k[j])
            };
        }
        self.ifft_real(buf)
    }

    /// `L²` pairing by the periodic trapezoid rule.
    pub fn pairing(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>() * self.dx
    }

    /// `(|Û(0)|, ‖u‖)` in the unitary normalisation.
    pub fn zero_mode(&self, u: &[f64]) -> (f64, f64) {
        let mean = u.iter().sum::<f64>().abs() / (self.n as f64).sqrt();
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        (mean, norm)
    }

    fn require_dotted(&self, u: &[f64]) -> Result<()> {
        let (zero_mode, norm) = self.zero_mode(u);
        if zero_mode > DOTTED_TOL * norm.max(f64::MIN_POSITIVE) && zero_mode > 0.0 {
            return Err(Error::DottedConstraint { zero_mode, norm });
        }
        Ok(())
    }
}

/// Cauchy data `⟨f, g⟩` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavePacket {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl WavePacket {
    pub fn new(f: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if f.len() != g.len() {
            return Err(dim_mismatch(f.len(), g.len()));
        }
        Ok(Self { f, g })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            f: vec![0.0; n],
            g: vec![0.0; n],
        }
    }

    pub fn from_fns(
        grid: &SpectralGrid,
        f: impl Fn(f64) -> f64,
        g: impl Fn(f64) -> f64,
    ) -> Self {
        Self {
            f: grid.sample(f),
            g: grid.sample(g),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            f: self.f.iter().map(|v| v * c).collect(),
            g: self.g.iter().map(|v| v * c).collect(),
        }
    }

    fn check(&self, grid: &SpectralGrid) -> Result<()> {
        grid.check(&self.f)?;
        grid.check(&self.g)
    }

    /// Time-zero energy density `½(g² + f'²)`.
    pub fn energy_density(&self, grid: &SpectralGrid) -> Result<Vec<f64>> {
        self.check(grid)?;
        let df = grid.derivative(&self.f);
        Ok(self
            .g
            .iter()
            .zip(&df)
            .map(|(g, d)| 0.5 * (g * g + d * d))
            .collect())
    }
}

/// Squared Sobolev norm `∫ (p² + m²)^s |û|² dp`. The massless negative-order symbol
/// drops the zero mode and requires the dotted constraint.
pub fn sobolev_norm_sq(u: &[f64], s: f64, m: f64, grid: &SpectralGrid) -> Result<f64> {
    grid.check(u)?;
    if m < 0.0 {
        return Err(Error::InvalidArgument(format!("mass must be >= 0, got {m}")));
    }
    let massless_negative = m == 0.0 && s < 0.0;
    if massless_negative {
        grid.require_dotted(u)?;
    }
    let buf = grid.fft(u);
    let w = grid.dx / grid.n as f64;
    Ok(buf
        .iter()
        .zip(&grid.k)
        .filter(|(_, &k)| !(massless_negative && k == 0.0))
        .map(|(z, &k)| (k * k + m * m).powf(s) * z.norm_sqr())
        .sum::<f64>()
        * w)
}

pub fn sobolev_norm(u: &[f64], s: f64, m: f64, grid: &SpectralGrid) -> Result<f64> {
    Ok(sobolev_norm_sq(u, s, m, grid)?.sqrt())
}

fn mu(k: f64, m: f64) -> f64 {
    (k * k + m * m).sqrt()
}

fn mu_inv(k: f64, m: f64) -> f64 {
    let v = mu(k, m);
    if v == 0.0 {
        0.0
    } else {
        1.0 / v
    }
}

/// `ι_m⟨f, g⟩ = ⟨μ_m⁻¹ g, −μ_m f⟩`, `μ_m = (p² + m²)^{1/2}`.
pub fn apply_iota_m(grid: &SpectralGrid, phi: &WavePacket, m: f64) -> Result<WavePacket> {
    phi.check(grid)?;
    if m < 0.0 {
        return Err(Error::InvalidArgument(format!("mass must be >= 0, got {m}")));
    }
    if m == 0.0 {
        grid.require_dotted(&phi.g)?;
    }
    Ok(iota_unchecked(grid, phi, m))
}

fn iota_unchecked(grid: &SpectralGrid, phi: &WavePacket, m: f64) -> WavePacket {
    WavePacket {
        f: grid.multiplier(&phi.g, |k| mu_inv(k, m)),
        g: grid.multiplier(&phi.f, |k| -mu(k, m)),
    }
}

/// One-particle energy norm `‖f‖²_{1/2} + ‖g‖²_{-1/2}`; at `m = 0` zero modes are dropped.
pub fn energy_norm_sq(grid: &SpectralGrid, phi: &WavePacket, m: f64) -> Result<f64> {
    phi.check(grid)?;
    let buf_f = grid.fft(&phi.f);
    let buf_g = grid.fft(&phi.g);
    let w = grid.dx / grid.n as f64;
    let mut total = 0.0;
    for ((zf, zg), &k) in buf_f.iter().zip(&buf_g).zip(&grid.k) {
        let mk = mu(k, m);
        if mk == 0.0 {
            continue;
        }
        total += mk * zf.norm_sqr() + zg.norm_sqr() / mk;
    }
    Ok(total * w)
}

/// `σ(⟨f, g⟩, ⟨h, k⟩) = ½((h, g) − (f, k))`.
pub fn symplectic_form(grid: &SpectralGrid, phi1: &WavePacket, phi2: &WavePacket) -> Result<f64> {
    phi1.check(grid)?;
    phi2.check(grid)?;
    Ok(0.5 * (grid.pairing(&phi2.f, &phi1.g) - grid.pairing(&phi1.f, &phi2.g)))
}

/// Subtracts a multiple of the bump `(1 − x²)⁴` on `(-1, 1)` so that `∫ g = 0`.
pub fn enforce_dotted(grid: &SpectralGrid, g: &[f64]) -> Result<Vec<f64>> {
    grid.check(g)?;
    let bump = grid.sample(|x| if x.abs() < 1.0 { (1.0 - x * x).powi(4) } else { 0.0 });
    let c = g.iter().sum::<f64>() / bump.iter().sum::<f64>();
    Ok(g.iter().zip(&bump).map(|(v, b)| v - c * b).collect())
}

/// The interval `(center − radius, center + radius)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub center: f64,
    pub radius: f64,
}

impl Default for Interval {
    fn default() -> Self {
        Self::UNIT
    }
}

impl Interval {
    pub const UNIT: Interval = Interval {
        center: 0.0,
        radius: 1.0,
    };

    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "interval radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() < self.radius
    }

    /// `w(x) = (r² − (x−a)²)/(2r)` inside, 0 outside.
    pub fn weight(&self, x: f64) -> f64 {
        if self.contains(x) {
            let u = x - self.center;
            (self.radius * self.radius - u * u) / (2.0 * self.radius)
        } else {
            0.0
        }
    }

    fn weight_slope(&self, x: f64) -> f64 {
        if self.contains(x) {
            -(x - self.center) / self.radius
        } else {
            0.0
        }
    }

    /// Image of a unit-interval packet: `⟨f((x−a)/r), g((x−a)/r)/r⟩`.
    pub fn transport(
        &self,
        grid: &SpectralGrid,
        f: impl Fn(f64) -> f64,
        g: impl Fn(f64) -> f64,
    ) -> WavePacket {
        let (a, r) = (self.center, self.radius);
        WavePacket::from_fns(grid, |x| f((x - a) / r), |x| g((x - a) / r) / r)
    }

    fn fits(&self, grid: &SpectralGrid) -> Result<()> {
        let l = grid.box_half_length();
        if self.center - self.radius <= -l || self.center + self.radius >= l {
            return Err(Error::InvalidArgument(format!(
                "interval ({}, {}) does not fit in the box [-{l}, {l})",
                self.center - self.radius,
                self.center + self.radius
            )));
        }
        Ok(())
    }
}

/// Multiplication by the indicator of the interval.
pub fn cut_to_interval(grid: &SpectralGrid, phi: &WavePacket, interval: Interval) -> Result<WavePacket> {
    phi.check(grid)?;
    let keep = |u: &[f64]| -> Vec<f64> {
        u.iter()
            .zip(grid.x())
            .map(|(v, &x)| if interval.contains(x) { *v } else { 0.0 })
            .collect()
    };
    Ok(WavePacket {
        f: keep(&phi.f),
        g: keep(&phi.g),
    })
}

fn check_support(grid: &SpectralGrid, phi: &WavePacket, interval: Interval) -> Result<()> {
    phi.check(grid)?;
    interval.fits(grid)?;
    let scale = phi
        .f
        .iter()
        .chain(&phi.g)
        .fold(0.0_f64, |a, v| a.max(v.abs()));
    for u in [&phi.f, &phi.g] {
        for (v, &x) in u.iter().zip(grid.x()) {
            if !interval.contains(x) && v.abs() > SUPPORT_TOL * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::Support { x, value: v.abs() });
            }
        }
    }
    Ok(())
}

/// `MΦ = ⟨w g, w f'' + w' f'⟩` with second-order central differences, zero outside the interval.
pub fn modular_k0_apply_on(
    grid: &SpectralGrid,
    phi: &WavePacket,
    interval: Interval,
) -> Result<WavePacket> {
    check_support(grid, phi, interval)?;
    let n = grid.n();
    let h = grid.dx();
    let f = &phi.f;
    let mut out = WavePacket::zeros(n);
    for (j, &x) in grid.x().iter().enumerate() {
        if !interval.contains(x) {
            continue;
        }
        let (jm, jp) = ((j + n - 1) % n, (j + 1) % n);
        let d1 = (f[jp] - f[jm]) / (2.0 * h);
        let d2 = (f[jp] - 2.0 * f[j] + f[jm]) / (h * h);
        let w = interval.weight(x);
        out.f[j] = w * phi.g[j];
        out.g[j] = w * d2 + interval.weight_slope(x) * d1;
    }
    Ok(out)
}

/// `MΦ` on the unit interval.
pub fn modular_k0_apply(grid: &SpectralGrid, phi: &WavePacket) -> Result<WavePacket> {
    modular_k0_apply_on(grid, phi, Interval::UNIT)
}

/// `2π ∫ w · ½(g² + f'²) dx`.
pub fn entropy_closed_form_on(grid: &SpectralGrid, phi: &WavePacket, interval: Interval) -> Result<f64> {
    check_support(grid, phi, interval)?;
    let density = phi.energy_density(grid)?;
    let integral: f64 = density
        .iter()
        .zip(grid.x())
        .map(|(e, &x)| interval.weight(x) * e)
        .sum::<f64>()
        * grid.dx();
    Ok(2.0 * std::f64::consts::PI * integral)
}

pub fn entropy_closed_form(grid: &SpectralGrid, phi: &WavePacket) -> Result<f64> {
    entropy_closed_form_on(grid, phi, Interval::UNIT)
}

/// Modular-route value `σ(Φ, χ_B i log Δ Φ)` with `i log Δ = 2π ι₀ ι₀ M`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModularRoute {
    /// Sign-normalised value, comparable with the closed form.
    pub value: f64,
    /// The pairing as computed; it comes out with the opposite sign.
    pub raw: f64,
    /// Relative zero mode of `MΦ`'s second component dropped before `ι₀`.
    pub zero_mode_leak: f64,
}

/// Fixed sign between the raw pairing and the closed form.
pub const MODULAR_SIGN: f64 = -1.0;

pub fn entropy_modular_route_on(
    grid: &SpectralGrid,
    phi: &WavePacket,
    interval: Interval,
) -> Result<ModularRoute> {
    check_support(grid, phi, interval)?;
    grid.require_dotted(&phi.g)?;
    let m_phi = modular_k0_apply_on(grid, phi, interval)?;
    let (zm, norm) = grid.zero_mode(&m_phi.g);
    let zero_mode_leak = if norm > 0.0 { zm / norm } else { 0.0 };
    // Discretisation leaves a tiny mean in (w f')'; ι₀ ignores the zero mode.
    let once = iota_unchecked(grid, &m_phi, 0.0);
    let twice = iota_unchecked(grid, &once, 0.0).scaled(2.0 * std::f64::consts::PI);
    let cut = cut_to_interval(grid, &twice, interval)?;
    let raw = symplectic_form(grid, phi, &cut)?;
    Ok(ModularRoute {
        value: MODULAR_SIGN * raw,
        raw,
        zero_mode_leak,
    })
}

pub fn entropy_modular_route(grid: &SpectralGrid, phi: &WavePacket) -> Result<ModularRoute> {
    entropy_modular_route_on(grid, phi, Interval::UNIT)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridInfo {
    pub n: usize,
    pub r#box: f64,
}

/// Both entropy routes with their gap.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub closed_form: f64,
    pub modular_route: f64,
    pub raw_modular_value: f64,
    pub relative_gap: f64,
    pub zero_mode_leak: f64,
    pub grid: GridInfo,
    pub interval: Interval,
    /// The interval cutting projection is used in the massless space by extrapolation.
    pub massless_cut_extrapolation: bool,
}

pub fn entropy_report_on(
    grid: &SpectralGrid,
    phi: &WavePacket,
    interval: Interval,
) -> Result<EntropyReport> {
    let closed = entropy_closed_form_on(grid, phi, interval)?;
    let route = entropy_modular_route_on(grid, phi, interval)?;
    let relative_gap = (route.value - closed).abs() / closed.abs().max(1e-12);
    if relative_gap > ROUTE_FAILURE && closed.abs() > 1e-12 {
        return Err(Error::Discretization(format!(
            "entropy routes disagree by {:.2}% at N = {}; refine the grid (larger N) or widen the packet",
            100.0 * relative_gap,
            grid.n()
        )));
    }
    Ok(EntropyReport {
        closed_form: closed,
        modular_route: route.value,
        raw_modular_value: route.raw,
        relative_gap: if closed.abs() > 1e-12 { relative_gap } else { 0.0 },
        zero_mode_leak: route.zero_mode_leak,
        grid: GridInfo {
            n: grid.n(),
            r#box: grid.box_half_length(),
        },
        interval,
        massless_cut_extrapolation: true,
    })
}

pub fn entropy_report(grid: &SpectralGrid, phi: &WavePacket) -> Result<EntropyReport> {
    entropy_report_on(grid, phi, Interval::UNIT)
}

type PacketSpec = (&'static str, fn(f64) -> f64, fn(f64) -> f64);

/// Ten smooth packets supported in `(-1, 1)` with dotted momentum component.
pub fn packet_corpus(grid: &SpectralGrid) -> Result<Vec<(String, WavePacket)>> {
    let inside = |p: fn(f64) -> f64| move |x: f64| if x.abs() < 1.0 { p(x) } else { 0.0 };
    let specs: Vec<PacketSpec> = vec![
        ("g = x(1-x^2)^2", |_| 0.0, |x| x * (1.0 - x * x).powi(2)),
        ("f = (1-x^2)^2", |x| (1.0 - x * x).powi(2), |_| 0.0),
        ("f = (1-x^2)^3", |x| (1.0 - x * x).powi(3), |_| 0.0),
        ("g = x(1-x^2)^3", |_| 0.0, |x| x * (1.0 - x * x).powi(3)),
        (
            "f = (1-x^2)^3, g = x(1-x^2)^2",
            |x| (1.0 - x * x).powi(3),
            |x| x * (1.0 - x * x).powi(2),
        ),
        (
            "f = x(1-x^2)^3",
            |x| x * (1.0 - x * x).powi(3),
            |_| 0.0,
        ),
        (
            "f = (1-x^2)^4 cos(3x)",
            |x| (1.0 - x * x).powi(4) * (3.0 * x).cos(),
            |_| 0.0,
        ),
        (
            "g = d/dx[(1-x^2)^4 sin(2x)]",
            |_| 0.0,
            |x| {
                let b = 1.0 - x * x;
                -8.0 * x * b.powi(3) * (2.0 * x).sin() + 2.0 * b.powi(4) * (2.0 * x).cos()
            },
        ),
        (
            "f = (1-x^2)^3 (1+x), g = x^3(1-x^2)^3",
            |x| (1.0 - x * x).powi(3) * (1.0 + x),
            |x| x.powi(3) * (1.0 - x * x).powi(3),
        ),
        (
            "f = exp(-1/(1-x^2)), g = x exp(-1/(1-x^2))",
            |x| (-1.0 / (1.0 - x * x)).exp(),
            |x| x * (-1.0 / (1.0 - x * x)).exp(),
        ),
    ];
    specs
        .into_iter()
        .map(|(name, f, g)| {
            let f_s = grid.sample(inside(f));
            let g_s = enforce_dotted(grid, &grid.sample(inside(g)))?;
            Ok((name.to_string(), WavePacket::new(f_s, g_s)?))
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct PacketRow {
    x: f64,
    f: f64,
    g: f64,
}

pub fn write_packet_csv<W: Write>(grid: &SpectralGrid, phi: &WavePacket, out: W) -> Result<()> {
    phi.check(grid)?;
    let mut w = csv::Writer::from_writer(out);
    for ((x, f), g) in grid.x().iter().zip(&phi.f).zip(&phi.g) {
        w.serialize(PacketRow { x: *x, f: *f, g: *g })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `x, f, g` rows; the `x` column must match the grid.
pub fn read_packet_csv<R: Read>(grid: &SpectralGrid, input: R) -> Result<WavePacket> {
    let mut r = csv::Reader::from_reader(input);
    let mut phi = WavePacket::zeros(0);
    for (j, row) in r.deserialize::<PacketRow>().enumerate() {
        let row = row?;
        if j >= grid.n() || (row.x - grid.x()[j]).abs() > 1e-9 * grid.box_half_length() {
            return Err(Error::Discretization(format!(
                "packet row {j} at x = {} does not match the grid",
                row.x
            )));
        }
        phi.f.push(row.f);
        phi.g.push(row.g);
    }
    phi.check(grid)?;
    Ok(phi)
}
