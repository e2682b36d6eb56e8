//! Solitary wave profile `φ = k + ψ` of the Camassa–Holm equation.
//!
//! The profile is even with its maximum `ψ(0) = c − 3k` at the origin, so only
//! the half line `x ≥ 0` is integrated. Near the peak the second-order form
//!
//! ```text
//! ψ″ = k + ψ − k(c−k)²/(c−k−ψ)²
//! ```
//!
//! is stepped from the regular point `(ψ, ψ′) = (c − 3k, 0)`. Outward
//! integration of a second-order equation towards a saddle amplifies errors
//! like `e^{ν₀x}`, so once ψ has dropped by two orders of magnitude the
//! integrator switches to the decaying branch of the first-order invariant
//! `(ln ψ)′ = −sqrt((c−3k−ψ)/(c−k−ψ))`, which is contracting.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::{fmt_f64, CsvTable};
use crate::params::WaveParams;

/// Switch from the second-order form to the invariant once `ψ < SWITCH·a`.
const SWITCH: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileOptions {
    /// Half-width of the grid; `None` selects `max(40, 30/ν₀)`.
    pub x_max: Option<f64>,
    pub n_x: usize,
    /// RK4 steps per characteristic length `min(1/ν₀, 2·sqrt(k/a))`.
    pub resolution: f64,
    /// Bound on the first-order invariant residual.
    pub inv_tol: f64,
    /// Bound on ψ at the grid edge; `None` selects `1e−12·a`.
    pub tail_tol: Option<f64>,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            x_max: None,
            n_x: 4096,
            resolution: 400.0,
            inv_tol: 1e-9,
            tail_tol: None,
        }
    }
}

impl ProfileOptions {
    pub fn default_x_max(params: &WaveParams) -> f64 {
        f64::max(40.0, 30.0 / params.nu0())
    }

    pub fn x_max_for(&self, params: &WaveParams) -> f64 {
        self.x_max.unwrap_or_else(|| Self::default_x_max(params))
    }

    pub fn tail_tol_for(&self, params: &WaveParams) -> f64 {
        self.tail_tol.unwrap_or(1e-12 * params.amplitude())
    }

    /// Largest integration step.
    pub fn step_for(&self, params: &WaveParams) -> f64 {
        let a = params.amplitude();
        let length = f64::min(1.0 / params.nu0(), 2.0 * (params.k() / a).sqrt());
        length / self.resolution
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct HalfLineState {
    psi: f64,
    dpsi: f64,
    ddpsi: f64,
}

/// ψ″ as a function of ψ, written without the cancellation between `k` and
/// `k(c−k)²/(c−k−ψ)²` in the tail.
#[inline]
fn second_derivative(params: &WaveParams, psi: f64) -> f64 {
    let w = psi / (params.c() - params.k());
    psi - params.k() * w * (2.0 - w) / ((1.0 - w) * (1.0 - w))
}

/// Decay rate `g(ψ) = sqrt((a − ψ)/(c − k − ψ))` so that `ψ′ = −ψ g(ψ)` on `x > 0`.
#[inline]
fn decay_rate(params: &WaveParams, psi: f64) -> f64 {
    let a = params.amplitude();
    ((a - psi).max(0.0) / (params.c() - params.k() - psi)).sqrt()
}

fn rk4_second_order(params: &WaveParams, y: [f64; 2], h: f64) -> [f64; 2] {
    let f = |s: [f64; 2]| [s[1], second_derivative(params, s[0])];
    let k1 = f(y);
    let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
    let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
    let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

fn rk4_log(params: &WaveParams, u: f64, h: f64) -> f64 {
    let f = |v: f64| -decay_rate(params, v.exp());
    let k1 = f(u);
    let k2 = f(u + 0.5 * h * k1);
    let k3 = f(u + 0.5 * h * k2);
    let k4 = f(u + h * k3);
    u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

#[derive(Debug, Clone, Copy)]
enum Phase {
    /// `(ψ, ψ′)` of the second-order equation.
    Core([f64; 2]),
    /// `ln ψ` on the decaying branch of the invariant.
    Tail(f64),
}

impl Phase {
    fn state(&self, params: &WaveParams) -> HalfLineState {
        match *self {
            Phase::Core([psi, dpsi]) => HalfLineState {
                psi,
                dpsi,
                ddpsi: second_derivative(params, psi),
            },
            Phase::Tail(u) => {
                let psi = u.exp();
                HalfLineState {
                    psi,
                    dpsi: -psi * decay_rate(params, psi),
                    ddpsi: second_derivative(params, psi),
                }
            }
        }
    }

    fn step(self, params: &WaveParams, h: f64) -> Phase {
        match self {
            Phase::Core(y) => {
                let next = rk4_second_order(params, y, h);
                if next[0] < SWITCH * params.amplitude() && next[0] > 0.0 {
                    Phase::Tail(next[0].ln())
                } else {
                    Phase::Core(next)
                }
            }
            Phase::Tail(u) => Phase::Tail(rk4_log(params, u, h)),
        }
    }
}

/// Integrates from the peak and reports the state at each of the sorted,
/// non-negative `targets`.
fn integrate_half_line(params: &WaveParams, targets: &[f64], h_max: f64) -> Vec<HalfLineState> {
    let mut phase = Phase::Core([params.amplitude(), 0.0]);
    let mut x = 0.0;
    let mut out = Vec::with_capacity(targets.len());
    for &t in targets {
        debug_assert!(t >= x);
        let span = t - x;
        if span > 0.0 {
            let n = (span / h_max).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for _ in 0..n {
                phase = phase.step(params, h);
            }
            x = t;
        }
        out.push(phase.state(params));
    }
    out
}

/// Samples `(ψ, ψ′, ψ″)` at arbitrary points using evenness.
fn sample_states(params: &WaveParams, xs: &[f64], h_max: f64) -> Vec<HalfLineState> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].abs().total_cmp(&xs[j].abs()));
    let targets: Vec<f64> = order.iter().map(|&i| xs[i].abs()).collect();
    let states = integrate_half_line(params, &targets, h_max);
    let mut out = vec![HalfLineState::default(); xs.len()];
    for (&i, s) in order.iter().zip(states) {
        let sign = if xs[i] < 0.0 {
            -1.0
        } else if xs[i] > 0.0 {
            1.0
        } else {
            0.0
        };
        out[i] = HalfLineState {
            psi: s.psi,
            dpsi: sign * s.dpsi,
            ddpsi: s.ddpsi,
        };
    }
    out
}

/// Sampled solitary wave with its c-derivatives on a uniform grid.
///
/// `dcpsi` is `∂cφ` and `dcmu` is `∂c(φ − φ″)`, both by centered differences
/// in `c` with the peak pinned at `x = 0`. The profile is immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    params: WaveParams,
    options: ProfileOptions,
    dx: f64,
    pub(crate) x: Vec<f64>,
    pub(crate) psi: Vec<f64>,
    pub(crate) dpsi: Vec<f64>,
    pub(crate) ddpsi: Vec<f64>,
    pub(crate) dcpsi: Vec<f64>,
    pub(crate) dcdpsi: Vec<f64>,
    pub(crate) dcmu: Vec<f64>,
}

/// Pointwise residuals of the three forms of the traveling-wave ODE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `(c−φ)(φ−φ″) + ½φ′² − ½φ² − (kc − 3k²/2)`.
    pub r1: f64,
    /// `−(c−φ)²(φ″−φ) − k(c−k)²`.
    pub r2: f64,
    /// `ψ′² − ψ²(c−3k−ψ)/(c−k−ψ)`.
    pub r3: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3)
    }
}

/// Builds the profile on `n_x` uniform points spanning `[−x_max, x_max]`.
pub fn solve_profile(params: WaveParams, x_max: f64, n_x: usize) -> Result<Profile> {
    let options = ProfileOptions {
        x_max: Some(x_max),
        n_x,
        ..ProfileOptions::default()
    };
    Profile::solve(params, &options)
}

impl Profile {
    pub fn solve(params: WaveParams, options: &ProfileOptions) -> Result<Self> {
        let x_max = options.x_max_for(&params);
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "x_max must be positive, got {x_max}"
            )));
        }
        if options.n_x < 256 {
            return Err(Error::InvalidArgument(format!(
                "n_x must be at least 256, got {}",
                options.n_x
            )));
        }
        if params.amplitude() * (-params.nu0() * x_max).exp() >= 1e-12 {
            log::warn!(
                "x_max = {x_max} truncates the tail: a·exp(−ν₀·x_max) = {:e}",
                params.amplitude() * (-params.nu0() * x_max).exp()
            );
        }
        let dx = 2.0 * x_max / (options.n_x - 1) as f64;
        let profile = Self::sample_uniform(params, -x_max, dx, options.n_x, options)?;
        profile.check_invariants()?;
        Ok(profile)
    }

    /// Samples the profile at `x_i = x0 + i·dx`, `i < n`. The grid need not
    /// be symmetric; evenness of ψ is used to fill negative points.
    pub fn sample_uniform(
        params: WaveParams,
        x0: f64,
        dx: f64,
        n: usize,
        options: &ProfileOptions,
    ) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) || n < 2 {
            return Err(Error::InvalidArgument(format!(
                "uniform grid needs dx > 0 and at least two points (dx = {dx}, n = {n})"
            )));
        }
        let x: Vec<f64> = (0..n).map(|i| x0 + i as f64 * dx).collect();
        let h_max = options.step_for(&params);

        let base = sample_states(&params, &x, h_max);
        let dc = params.dc_step();
        let plus = sample_states(&params.with_speed(params.c() + dc)?, &x, h_max);
        let minus = sample_states(&params.with_speed(params.c() - dc)?, &x, h_max);

        let column = |f: fn(&HalfLineState) -> f64, s: &[HalfLineState]| -> Vec<f64> {
            s.iter().map(f).collect()
        };
        let centered = |f: fn(&HalfLineState) -> f64| -> Vec<f64> {
            plus.iter()
                .zip(&minus)
                .map(|(p, m)| (f(p) - f(m)) / (2.0 * dc))
                .collect()
        };

        Ok(Self {
            params,
            options: *options,
            dx,
            psi: column(|s| s.psi, &base),
            dpsi: column(|s| s.dpsi, &base),
            ddpsi: column(|s| s.ddpsi, &base),
            dcpsi: centered(|s| s.psi),
            dcdpsi: centered(|s| s.dpsi),
            dcmu: centered(|s| s.psi - s.ddpsi),
            x,
        })
    }

    /// The constant state `φ ≡ k` sampled on the same kind of grid.
    pub fn flat(params: WaveParams, x0: f64, dx: f64, n: usize) -> Self {
        let zeros = vec![0.0; n];
        Self {
            params,
            options: ProfileOptions::default(),
            dx,
            x: (0..n).map(|i| x0 + i as f64 * dx).collect(),
            psi: zeros.clone(),
            dpsi: zeros.clone(),
            ddpsi: zeros.clone(),
            dcpsi: zeros.clone(),
            dcdpsi: zeros.clone(),
            dcmu: zeros,
        }
    }

    /// Re-evaluates the same wave on another uniform grid with the same
    /// integrator settings.
    pub fn resample(&self, x0: f64, dx: f64, n: usize) -> Result<Self> {
        if self.is_flat() {
            return Ok(Self::flat(self.params, x0, dx, n));
        }
        Self::sample_uniform(self.params, x0, dx, n, &self.options)
    }

    fn is_flat(&self) -> bool {
        self.psi.iter().all(|&v| v == 0.0)
    }

    fn check_invariants(&self) -> Result<()> {
        let a = self.params.amplitude();
        if let Some(i) = self.psi.iter().position(|&v| v.is_nan() || v <= 0.0) {
            return Err(Error::Convergence(format!(
                "ψ lost positivity at x = {} (ψ = {})",
                self.x[i], self.psi[i]
            )));
        }
        for i in 1..self.x.len() {
            if self.x[i - 1] >= 0.0 && self.psi[i] > self.psi[i - 1] {
                return Err(Error::Convergence(format!(
                    "ψ not decreasing at x = {}",
                    self.x[i]
                )));
            }
        }
        let residuals = invariant_residuals(self);
        if residuals.r3 > self.options.inv_tol {
            return Err(Error::Convergence(format!(
                "invariant residual {:e} exceeds {:e}",
                residuals.r3, self.options.inv_tol
            )));
        }
        let tail = self.psi[0].max(self.psi[self.psi.len() - 1]);
        let tail_tol = self.options.tail_tol_for(&self.params);
        if tail >= tail_tol {
            log::warn!("ψ at the grid edge is {tail:e}, above tail_tol = {tail_tol:e}");
        }
        debug_assert!(self.psi.iter().all(|&v| v <= a * (1.0 + 1e-12)));
        Ok(())
    }

    pub fn params(&self) -> &WaveParams {
        &self.params
    }

    pub fn options(&self) -> &ProfileOptions {
        &self.options
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Largest `|x|` on the grid.
    pub fn x_max(&self) -> f64 {
        self.x.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn dpsi(&self) -> &[f64] {
        &self.dpsi
    }

    pub fn ddpsi(&self) -> &[f64] {
        &self.ddpsi
    }

    pub fn dcpsi(&self) -> &[f64] {
        &self.dcpsi
    }

    /// `∂cψ′`, used for the c-derivative of the energy.
    pub fn dcdpsi(&self) -> &[f64] {
        &self.dcdpsi
    }

    pub fn dcmu(&self) -> &[f64] {
        &self.dcmu
    }

    /// `ψ(0)`, the initial condition of the integration.
    pub fn peak(&self) -> f64 {
        if self.is_flat() {
            0.0
        } else {
            self.params.amplitude()
        }
    }

    pub fn header(&self) -> ProfileHeader {
        ProfileHeader {
            k: self.params.k(),
            c: self.params.c(),
            nu0: self.params.nu0(),
            x_max: self.x_max(),
            n_x: self.len(),
            residuals: invariant_residuals(self),
        }
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["x", "psi", "dpsi", "ddpsi", "dcpsi", "dcmu"]);
        for i in 0..self.len() {
            t.push_row(
                [
                    self.x[i],
                    self.psi[i],
                    self.dpsi[i],
                    self.ddpsi[i],
                    self.dcpsi[i],
                    self.dcmu[i],
                ]
                .iter()
                .map(|v| fmt_f64(*v))
                .collect(),
            );
        }
        t
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        Ok(self.to_csv().write_to(w)?)
    }

    /// Least-squares slope of `ln ψ` over the last quarter of the grid.
    pub fn tail_slope(&self) -> f64 {
        let n = self.len();
        let start = n - n / 4;
        let pts: Vec<(f64, f64)> = (start..n)
            .filter(|&i| self.psi[i] > 0.0)
            .map(|i| (self.x[i], self.psi[i].ln()))
            .collect();
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / m, sy / m);
        let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
            (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
        });
        num / den
    }
}

/// JSON header accompanying the profile CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileHeader {
    pub k: f64,
    pub c: f64,
    pub nu0: f64,
    pub x_max: f64,
    pub n_x: usize,
    pub residuals: Residuals,
}

/// Maximum pointwise residuals of the second-order form, the `(c − φ)`
/// multiplied form and the first-order invariant, using the stored derivatives.
pub fn invariant_residuals(profile: &Profile) -> Residuals {
    let k = profile.params.k();
    let c = profile.params.c();
    let a = profile.params.amplitude();
    let mut r = Residuals {
        r1: 0.0,
        r2: 0.0,
        r3: 0.0,
    };
    for i in 0..profile.len() {
        let (psi, dpsi, ddpsi) = (profile.psi[i], profile.dpsi[i], profile.ddpsi[i]);
        let phi = k + psi;
        let r1 =
            (c - phi) * (phi - ddpsi) + 0.5 * dpsi * dpsi - 0.5 * phi * phi - (k * c - 1.5 * k * k);
        let r2 = -(c - phi) * (c - phi) * (ddpsi - phi) - k * (c - k) * (c - k);
        let r3 = dpsi * dpsi - psi * psi * (a - psi) / (c - k - psi);
        r.r1 = r.r1.max(r1.abs());
        r.r2 = r.r2.max(r2.abs());
        r.r3 = r.r3.max(r3.abs());
    }
    r
}

/// KdV soliton `Ψ_KdV(X) = sech²(X/(2√(2k)))`.
pub fn kdv_profile(k: f64, x: f64) -> f64 {
    let s = 1.0 / (x / (2.0 * (2.0 * k).sqrt())).cosh();
    s * s
}

/// Samples of a rescaled profile `Ψ(X)` with its second derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct KdvSamples {
    pub x: Vec<f64>,
    pub psi: Vec<f64>,
    pub ddpsi: Vec<f64>,
}

impl KdvSamples {
    /// `Ψ_KdV` and `Ψ″_KdV = Ψ(2 − 3Ψ)/(4k)` at the given points.
    pub fn kdv(k: f64, xs: &[f64]) -> Self {
        let psi: Vec<f64> = xs.iter().map(|&x| kdv_profile(k, x)).collect();
        let ddpsi = psi
            .iter()
            .map(|&p| p * (2.0 - 3.0 * p) / (4.0 * k))
            .collect();
        Self {
            x: xs.to_vec(),
            psi,
            ddpsi,
        }
    }

    /// `Ψ(X) = ψ(X/ε)/ε²` with `X = εx` and `ε = sqrt(c − 3k)`.
    pub fn rescale(profile: &Profile) -> Self {
        let eps = profile.params.eps();
        let e2 = eps * eps;
        Self {
            x: profile.x.iter().map(|x| eps * x).collect(),
            psi: profile.psi.iter().map(|p| p / e2).collect(),
            ddpsi: profile.ddpsi.iter().map(|p| p / (e2 * e2)).collect(),
        }
    }
}

/// Sup-norm of `F(Ψ, ε²) = −Ψ″ + Ψ(k(2−3Ψ) + ε²(1−Ψ)²)/(2k + ε²(1−Ψ))²`.
pub fn kdv_residual(k: f64, eps: f64, samples: &KdvSamples) -> f64 {
    let e2 = eps * eps;
    samples
        .psi
        .iter()
        .zip(&samples.ddpsi)
        .map(|(&p, &pp)| {
            let q = 1.0 - p;
            let den = 2.0 * k + e2 * q;
            (-pp + p * (k * (2.0 - 3.0 * p) + e2 * q * q) / (den * den)).abs()
        })
        .fold(0.0, f64::max)
}

/// `sup |ψ(x) − ε²Ψ_KdV(εx)|` over the profile grid.
pub fn kdv_deviation(profile: &Profile) -> f64 {
    let k = profile.params.k();
    let eps = profile.params.eps();
    profile
        .x
        .iter()
        .zip(&profile.psi)
        .map(|(&x, &p)| (p - eps * eps * kdv_profile(k, eps * x)).abs())
        .fold(0.0, f64::max)
}
