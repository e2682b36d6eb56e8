//! Fourier collocation of the weighted transverse linearization
//!
//! ```text
//! A = e^{νx} ∂ₓ(1 − ∂ₓ²)⁻¹ (L + η²∂ₓ⁻²) e^{−νx},   L = c − 3φ + φ″ − ∂ₓ(c − φ)∂ₓ
//! ```
//!
//! on the periodic grid `x_j = −ℓ/2 + jℓ/N`. Every `∂ₓ` becomes the shifted
//! symbol `z = ik − ν` in Fourier space, and the two variable coefficients act
//! pointwise. Constant-coefficient factors are assembled as real circulant
//! matrices, so `A` is a real `N × N` matrix and its spectrum is closed under
//! conjugation.
//!
//! The Nyquist mode carries effective wavenumber 0, i.e. `z = −ν`.

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::{fmt_f64, CsvTable};
use crate::params::WaveParams;
use crate::profile::Profile;
use crate::puiseux::{puiseux_coefficients, resonance_pair_prediction};
use crate::symbol::lambda_of_z;

/// Eigenvalues with `|λ| ≤ CLUSTER_TOL · max|λ|` form the near-zero cluster.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Required ratio between the nearest outside eigenvalue and the cluster.
pub const CLUSTER_SEPARATION: f64 = 1e2;

const CONJUGATE_TOL: f64 = 1e-8;

/// Angular wavenumbers of an `n`-point periodic grid of length `domain_length`
/// in FFT order, with the Nyquist entry set to 0.
pub fn wavenumbers(n: usize, domain_length: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / domain_length;
    (0..n)
        .map(|m| {
            if 2 * m < n {
                base * m as f64
            } else if 2 * m == n {
                0.0
            } else {
                base * (m as f64 - n as f64)
            }
        })
        .collect()
}

/// A profile sampled on the collocation grid together with the weight,
/// transverse wavenumber and domain size.
#[derive(Debug, Clone)]
pub struct Discretization {
    profile: Profile,
    nu: f64,
    eta: f64,
    n_modes: usize,
    domain_length: f64,
    wavenumbers: Vec<f64>,
}

impl Discretization {
    /// Validates the setup and re-samples `profile` on `x_j = −ℓ/2 + jℓ/N`.
    /// `domain_length` must be at least twice the extent of `profile`.
    pub fn new(
        profile: &Profile,
        nu: f64,
        eta: f64,
        n_modes: usize,
        domain_length: f64,
    ) -> Result<Self> {
        let params = *profile.params();
        if n_modes < 4 || !n_modes.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "n_modes must be even and at least 4, got {n_modes}"
            )));
        }
        if !(nu.is_finite() && nu >= 0.0 && nu < params.nu0()) {
            return Err(Error::WeightOutOfRange {
                nu,
                nu0: params.nu0(),
            });
        }
        if !eta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "eta must be finite, got {eta}"
            )));
        }
        if nu == 0.0 && eta != 0.0 {
            return Err(Error::SingularMode { eta });
        }
        if !(domain_length.is_finite() && domain_length >= 2.0 * profile.x_max() * (1.0 - 1e-12)) {
            return Err(Error::DomainTooSmall(format!(
                "domain length {domain_length} is below 2·x_max = {}",
                2.0 * profile.x_max()
            )));
        }
        let dx = domain_length / n_modes as f64;
        let sampled = profile.resample(-0.5 * domain_length, dx, n_modes)?;
        let tail = sampled.psi()[0];
        let tail_tol = sampled.options().tail_tol_for(&params);
        if tail > tail_tol {
            return Err(Error::DomainTooSmall(format!(
                "ψ at the domain edge is {tail:e}, above tail_tol = {tail_tol:e}"
            )));
        }
        Ok(Self {
            profile: sampled,
            nu,
            eta,
            n_modes,
            domain_length,
            wavenumbers: wavenumbers(n_modes, domain_length),
        })
    }

    /// Same setup with another transverse wavenumber; reuses the samples.
    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        if !eta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "eta must be finite, got {eta}"
            )));
        }
        if self.nu == 0.0 && eta != 0.0 {
            return Err(Error::SingularMode { eta });
        }
        Ok(Self {
            eta,
            ..self.clone()
        })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn params(&self) -> &WaveParams {
        self.profile.params()
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Shifted derivative symbols `z_m = ik_m − ν`.
    pub fn shifted_symbols(&self) -> Vec<Complex64> {
        self.wavenumbers
            .iter()
            .map(|&k| Complex64::new(-self.nu, k))
            .collect()
    }

    /// The constant-coefficient spectrum `λ(z_m)` on the wavenumber grid.
    pub fn symbol_grid(&self) -> Vec<Complex64> {
        let params = *self.params();
        self.shifted_symbols()
            .into_iter()
            .map(|z| lambda_of_z(&params, self.eta, z))
            .collect()
    }

    /// `e^{νx_j} v_j`.
    pub fn weighted(&self, v: &[f64]) -> Vec<f64> {
        self.profile
            .x()
            .iter()
            .zip(v)
            .map(|(x, v)| (self.nu * x).exp() * v)
            .collect()
    }

    fn circulant(&self, f: impl Fn(Complex64) -> Complex64) -> Mat<f64> {
        let mut col: Vec<Complex64> = self.shifted_symbols().into_iter().map(f).collect();
        let n = self.n_modes;
        FftPlanner::<f64>::new()
            .plan_fft_inverse(n)
            .process(&mut col);
        let scale = 1.0 / n as f64;
        Mat::from_fn(n, n, |i, j| col[(i + n - j) % n].re * scale)
    }

    fn potential(&self) -> Vec<f64> {
        let (k, c) = (self.params().k(), self.params().c());
        self.profile
            .psi()
            .iter()
            .zip(self.profile.ddpsi())
            .map(|(p, pp)| c - 3.0 * k - 3.0 * p + pp)
            .collect()
    }

    fn stiffness(&self) -> Vec<f64> {
        let (k, c) = (self.params().k(), self.params().c());
        self.profile.psi().iter().map(|p| c - k - p).collect()
    }
}

fn scale_columns(m: &mut Mat<f64>, s: &[f64]) {
    for (j, &sj) in s.iter().enumerate() {
        for i in 0..m.nrows() {
            m[(i, j)] *= sj;
        }
    }
}

fn add_diagonal(m: &mut Mat<f64>, d: &[f64]) {
    for (i, &di) in d.iter().enumerate() {
        m[(i, i)] += di;
    }
}

/// Weighted `L + η²∂ₓ⁻²`.
pub fn build_hessian(disc: &Discretization) -> Mat<f64> {
    let d = disc.circulant(|z| z);
    let mut dw = d.clone();
    scale_columns(&mut dw, &disc.stiffness());
    let mut h = -(&dw * &d);
    add_diagonal(&mut h, &disc.potential());
    if disc.eta != 0.0 {
        let eta2 = disc.eta * disc.eta;
        h += disc.circulant(|z| eta2 / (z * z));
    }
    h
}

/// The weighted operator `A` as a real dense matrix.
pub fn build_operator(disc: &Discretization) -> Mat<f64> {
    let one = Complex64::new(1.0, 0.0);
    let mut a = disc.circulant(|z| z / (one - z * z));
    scale_columns(&mut a, &disc.potential());
    let mut gz = disc.circulant(|z| z * z / (one - z * z));
    scale_columns(&mut gz, &disc.stiffness());
    a -= &gz * &disc.circulant(|z| z);
    if disc.eta != 0.0 {
        let eta2 = disc.eta * disc.eta;
        a += disc.circulant(|z| eta2 / (z * (one - z * z)));
    }
    a
}

/// Matrix–vector product.
pub fn apply(m: &Mat<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn rel_residual(num: &[f64], den: &[f64]) -> f64 {
    norm(num) / norm(den)
}

/// Spectral norm, from the largest singular value.
pub fn operator_norm(m: &Mat<f64>) -> Result<f64> {
    let s = m
        .singular_values()
        .map_err(|e| Error::EigensolverFailure(format!("{e:?}")))?;
    Ok(s.first().copied().unwrap_or(0.0))
}

/// All eigenvalues of a real square matrix.
pub fn eigenvalues(m: &Mat<f64>) -> Result<Vec<Complex64>> {
    m.eigenvalues()
        .map_err(|e| Error::EigensolverFailure(format!("{e:?}")))
}

/// Largest distance from an eigenvalue to the conjugate of its nearest
/// partner.
pub fn conjugate_defect(values: &[Complex64]) -> f64 {
    values
        .iter()
        .map(|v| {
            values
                .iter()
                .map(|w| (v - w.conj()).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Kernel diagnostics at `η = 0` from the sampled `φ′` and `∂cφ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelResiduals {
    /// `‖A e^{νx}φ′‖ / (‖A‖ ‖e^{νx}φ′‖)`.
    pub translation: f64,
    /// `‖A e^{νx}∂cφ + e^{νx}φ′‖ / ‖e^{νx}φ′‖`.
    pub generalized: f64,
}

pub fn kernel_residuals(disc: &Discretization, a: &Mat<f64>) -> Result<KernelResiduals> {
    let v1 = disc.weighted(disc.profile.dpsi());
    let v2 = disc.weighted(disc.profile.dcpsi());
    let av1 = apply(a, &v1);
    let av2 = apply(a, &v2);
    let gen: Vec<f64> = av2.iter().zip(&v1).map(|(x, y)| x + y).collect();
    Ok(KernelResiduals {
        translation: rel_residual(&av1, &v1) / operator_norm(a)?,
        generalized: rel_residual(&gen, &v1),
    })
}

/// A matched resonance pair, `+` branch first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceMatch {
    pub measured: [Complex64; 2],
    pub predicted: [Complex64; 2],
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub conjugate_defect: f64,
    /// Eigenvalues in the near-zero cluster, smallest modulus first.
    pub cluster: Vec<Complex64>,
    pub kernel: Option<KernelResiduals>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub k: f64,
    pub c: f64,
    pub nu: f64,
    pub eta: f64,
    pub n_modes: usize,
    pub domain_length: f64,
    /// `max |λ|`.
    pub scale: f64,
    pub eigenvalues: Vec<Complex64>,
    pub resonance_pair: Option<ResonanceMatch>,
    /// Largest real part outside the cluster and the resonance pair.
    pub continuous_band_estimate: f64,
    pub diagnostics: Diagnostics,
}

impl SpectrumReport {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["re", "im"]);
        for v in &self.eigenvalues {
            t.push_values(&[v.re, v.im]);
        }
        t
    }

    /// Eigenvalues not in the cluster and not in the resonance pair.
    pub fn band(&self) -> Vec<Complex64> {
        let mut excluded: Vec<Complex64> = self.diagnostics.cluster.clone();
        if let Some(m) = &self.resonance_pair {
            excluded.extend(m.measured);
        }
        let mut out = Vec::with_capacity(self.eigenvalues.len());
        for v in &self.eigenvalues {
            if let Some(i) = excluded.iter().position(|e| e == v) {
                excluded.swap_remove(i);
            } else {
                out.push(*v);
            }
        }
        out
    }
}

/// Indices of the near-zero cluster sorted by modulus.
fn cluster_indices(values: &[Complex64], scale: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len())
        .filter(|&i| values[i].norm() <= CLUSTER_TOL * scale)
        .collect();
    idx.sort_by(|&a, &b| values[a].norm().total_cmp(&values[b].norm()));
    idx
}

fn nearest(values: &[Complex64], target: Complex64, skip: Option<usize>) -> usize {
    (0..values.len())
        .filter(|&i| Some(i) != skip)
        .min_by(|&a, &b| {
            (values[a] - target)
                .norm()
                .total_cmp(&(values[b] - target).norm())
        })
        .expect("nonempty spectrum")
}

fn match_pair(values: &[Complex64], predicted: [Complex64; 2]) -> ResonanceMatch {
    let i = nearest(values, predicted[0], None);
    let j = nearest(values, predicted[1], Some(i));
    let measured = [values[i], values[j]];
    let distance = (measured[0] - predicted[0])
        .norm()
        .max((measured[1] - predicted[1]).norm());
    ResonanceMatch {
        measured,
        predicted,
        distance,
    }
}

fn predicted_pair(disc: &Discretization) -> [Complex64; 2] {
    let (p, m) = resonance_pair_prediction(&puiseux_coefficients(disc.params()), disc.eta);
    [p, m]
}

/// Assembles `A` and computes its spectrum with cluster, resonance and
/// kernel diagnostics.
pub fn full_spectrum(disc: &Discretization) -> Result<SpectrumReport> {
    let a = build_operator(disc);
    spectrum_of(disc, &a)
}

/// Spectrum of an operator already assembled from `disc`.
pub fn spectrum_of(disc: &Discretization, a: &Mat<f64>) -> Result<SpectrumReport> {
    if a.nrows() != disc.n_modes || a.ncols() != disc.n_modes {
        return Err(Error::InvalidArgument(format!(
            "operator is {}×{}, expected {n}×{n}",
            a.nrows(),
            a.ncols(),
            n = disc.n_modes
        )));
    }
    let values = eigenvalues(a)?;
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let defect = conjugate_defect(&values);
    if defect > CONJUGATE_TOL * scale.max(1.0) {
        return Err(Error::EigensolverFailure(format!(
            "spectrum not closed under conjugation (defect {defect:e})"
        )));
    }
    let cluster: Vec<Complex64> = cluster_indices(&values, scale)
        .into_iter()
        .map(|i| values[i])
        .collect();

    let mut resonance_pair = None;
    let mut kernel = None;
    if disc.eta == 0.0 {
        if !disc.profile.psi().iter().all(|&p| p == 0.0) {
            kernel = Some(kernel_residuals(disc, a)?);
        }
    } else if disc.nu > 0.0 {
        let predicted = predicted_pair(disc);
        let m = match_pair(&values, predicted);
        if m.distance <= 0.5 * predicted[0].norm() {
            resonance_pair = Some(m);
        } else {
            log::warn!(
                "no eigenvalue near the predicted resonance {} at eta = {} (distance {:e})",
                predicted[0],
                disc.eta,
                m.distance
            );
        }
    }

    let params = *disc.params();
    let mut report = SpectrumReport {
        k: params.k(),
        c: params.c(),
        nu: disc.nu,
        eta: disc.eta,
        n_modes: disc.n_modes,
        domain_length: disc.domain_length,
        scale,
        eigenvalues: values,
        resonance_pair,
        continuous_band_estimate: f64::NEG_INFINITY,
        diagnostics: Diagnostics {
            conjugate_defect: defect,
            cluster,
            kernel,
        },
    };
    report.continuous_band_estimate = report
        .band()
        .iter()
        .map(|v| v.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(report)
}

/// Multiplicities of the zero eigenvalue at `η = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleZero {
    pub geometric_dim: usize,
    pub algebraic_dim: usize,
    pub cluster: Vec<Complex64>,
    /// Smallest eigenvalue modulus outside the cluster.
    pub gap: f64,
    pub scale: f64,
    pub kernel: Option<KernelResiduals>,
}

/// Counts the near-zero cluster (algebraic dimension) and the singular
/// values of `A` below the same tolerance (geometric dimension).
pub fn double_zero_check(
    profile: &Profile,
    nu: f64,
    n_modes: usize,
    domain_length: f64,
) -> Result<DoubleZero> {
    let disc = Discretization::new(profile, nu, 0.0, n_modes, domain_length)?;
    let a = build_operator(&disc);
    let report = spectrum_of(&disc, &a)?;
    let cluster = report.diagnostics.cluster.clone();
    let gap = report
        .band()
        .iter()
        .map(|v| v.norm())
        .fold(f64::INFINITY, f64::min);
    let edge = cluster
        .last()
        .map(|v| v.norm())
        .unwrap_or(CLUSTER_TOL * report.scale);
    if gap < CLUSTER_SEPARATION * edge {
        return Err(Error::ClusterAmbiguity(format!(
            "cluster edge {edge:e} and nearest outside eigenvalue {gap:e} are closer than a factor {CLUSTER_SEPARATION}"
        )));
    }
    let sigma = a
        .singular_values()
        .map_err(|e| Error::EigensolverFailure(format!("{e:?}")))?;
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let deficiency = sigma
        .iter()
        .filter(|&&s| s <= CLUSTER_TOL * sigma_max)
        .count();
    Ok(DoubleZero {
        geometric_dim: deficiency.min(cluster.len()),
        algebraic_dim: cluster.len(),
        cluster,
        gap,
        scale: report.scale,
        kernel: report.diagnostics.kernel,
    })
}

/// One tracked `η` with the `+` branch first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackRow {
    pub eta: f64,
    pub measured: [Complex64; 2],
    pub predicted: [Complex64; 2],
    pub distance: f64,
}

/// Least-squares fit `Im λ₊ ≈ sη + s₃η³`, `Re λ₊ ≈ rη² + r₄η⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceFit {
    pub im_slope: f64,
    pub im_cubic: f64,
    pub re_curvature: f64,
    pub re_quartic: f64,
    /// `sqrt(−λ₁²)`.
    pub predicted_slope: f64,
    /// `λ₂`.
    pub predicted_curvature: f64,
}

impl ResonanceFit {
    pub fn slope_error(&self) -> f64 {
        (self.im_slope / self.predicted_slope - 1.0).abs()
    }

    pub fn curvature_error(&self) -> f64 {
        (self.re_curvature / self.predicted_curvature - 1.0).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tracking {
    pub rows: Vec<TrackRow>,
    /// Present when at least two nonzero `η` were tracked.
    pub fit: Option<ResonanceFit>,
}

impl Tracking {
    pub const CSV_HEADER: [&'static str; 6] =
        ["eta", "re_meas", "im_meas", "re_pred", "im_pred", "dist"];

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&Self::CSV_HEADER);
        for r in &self.rows {
            t.push_values(&[
                r.eta,
                r.measured[0].re,
                r.measured[0].im,
                r.predicted[0].re,
                r.predicted[0].im,
                r.distance,
            ]);
        }
        t
    }
}

impl TrackRow {
    pub fn csv_row(&self) -> Vec<String> {
        [
            self.eta,
            self.measured[0].re,
            self.measured[0].im,
            self.predicted[0].re,
            self.predicted[0].im,
            self.distance,
        ]
        .iter()
        .map(|v| fmt_f64(*v))
        .collect()
    }
}

fn track_one(base: &Discretization, eta: f64) -> Result<TrackRow> {
    let disc = base.with_eta(eta)?;
    let a = build_operator(&disc);
    let values = eigenvalues(&a)?;
    if eta == 0.0 {
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let idx = cluster_indices(&values, scale);
        if idx.len() != 2 {
            return Err(Error::MatchFailure {
                eta,
                reason: format!("expected a two-element zero cluster, found {}", idx.len()),
            });
        }
        let (p, m) = (values[idx[0]], values[idx[1]]);
        let measured = if p.im >= m.im { [p, m] } else { [m, p] };
        let zero = Complex64::new(0.0, 0.0);
        return Ok(TrackRow {
            eta,
            measured,
            predicted: [zero, zero],
            distance: measured[0].norm().max(measured[1].norm()),
        });
    }
    let predicted = predicted_pair(&disc);
    let m = match_pair(&values, predicted);
    let limit = 0.5 * predicted[0].norm();
    if m.distance > limit {
        return Err(Error::MatchFailure {
            eta,
            reason: format!(
                "closest eigenvalue is {:e} from the prediction {}, limit {limit:e}",
                m.distance, predicted[0]
            ),
        });
    }
    Ok(TrackRow {
        eta,
        measured: m.measured,
        predicted,
        distance: m.distance,
    })
}

/// Two-parameter least squares `y ≈ α·t^p + β·t^{p+2}` in the scaled
/// variable `t = η/η_max`.
fn fit_two(eta: &[f64], y: &[f64], p: i32) -> (f64, f64) {
    let h = eta.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (e, y) in eta.iter().zip(y) {
        let t = e / h;
        let (f1, f2) = (t.powi(p), t.powi(p + 2));
        s11 += f1 * f1;
        s12 += f1 * f2;
        s22 += f2 * f2;
        r1 += f1 * y;
        r2 += f2 * y;
    }
    let det = s11 * s22 - s12 * s12;
    let alpha = (r1 * s22 - r2 * s12) / det;
    let beta = (s11 * r2 - s12 * r1) / det;
    (alpha / h.powi(p), beta / h.powi(p + 2))
}

/// Tracks the resonance pair over `etas`, one eigensolution per entry run
/// in parallel, then fits the small-`η` expansion.
pub fn track_resonances(
    profile: &Profile,
    nu: f64,
    etas: &[f64],
    n_modes: usize,
    domain_length: f64,
) -> Result<Tracking> {
    if nu.is_nan() || nu <= 0.0 {
        return Err(Error::WeightOutOfRange {
            nu,
            nu0: profile.params().nu0(),
        });
    }
    let base = Discretization::new(profile, nu, 0.0, n_modes, domain_length)?;
    let rows = etas
        .par_iter()
        .map(|&eta| track_one(&base, eta))
        .collect::<Result<Vec<_>>>()?;

    let fitted: Vec<&TrackRow> = rows.iter().filter(|r| r.eta > 0.0).collect();
    let fit = (fitted.len() >= 2).then(|| {
        let eta: Vec<f64> = fitted.iter().map(|r| r.eta).collect();
        let im: Vec<f64> = fitted.iter().map(|r| r.measured[0].im).collect();
        let re: Vec<f64> = fitted.iter().map(|r| r.measured[0].re).collect();
        let (im_slope, im_cubic) = fit_two(&eta, &im, 1);
        let (re_curvature, re_quartic) = fit_two(&eta, &re, 2);
        let coeffs = puiseux_coefficients(profile.params());
        ResonanceFit {
            im_slope,
            im_cubic,
            re_curvature,
            re_quartic,
            predicted_slope: coeffs.lambda1_im(),
            predicted_curvature: coeffs.lambda2,
        }
    });
    Ok(Tracking { rows, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_disc(nu: f64, eta: f64, n: usize) -> Discretization {
        let params = WaveParams::new(1.0, 4.0).unwrap();
        let l = 40.0;
        let flat = Profile::flat(params, -0.5 * l, l / n as f64, n);
        Discretization::new(&flat, nu, eta, n, l).unwrap()
    }

    #[test]
    fn wavenumber_layout() {
        let k = wavenumbers(8, 2.0 * std::f64::consts::PI);
        assert_eq!(k, vec![0.0, 1.0, 2.0, 3.0, 0.0, -3.0, -2.0, -1.0]);
    }

    #[test]
    fn circulant_matches_fft_application() {
        let d = flat_disc(0.2, 0.0, 16);
        let m = d.circulant(|z| z);
        let x = d.profile().x().to_vec();
        let u: Vec<f64> = x
            .iter()
            .map(|x| (2.0 * std::f64::consts::PI * x / 40.0).sin())
            .collect();
        let du = apply(&m, &u);
        let w = 2.0 * std::f64::consts::PI / 40.0;
        for ((x, u), du) in x.iter().zip(&u).zip(&du) {
            let expected = w * (w * x).cos() - 0.2 * u;
            assert!((du - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn flat_spectrum_is_symbol_grid() {
        for (nu, eta) in [(0.1, 0.0), (0.3, 0.05), (0.05, 1.0)] {
            let d = flat_disc(nu, eta, 64);
            let values = eigenvalues(&build_operator(&d)).unwrap();
            let mut grid = d.symbol_grid();
            for v in values {
                let i = nearest(&grid, v, None);
                assert!((grid[i] - v).norm() < 1e-10, "{v} vs {}", grid[i]);
                grid.swap_remove(i);
            }
        }
    }

    #[test]
    fn rejects_bad_setups() {
        let params = WaveParams::new(1.0, 4.0).unwrap();
        let flat = Profile::flat(params, -20.0, 40.0 / 64.0, 64);
        assert!(matches!(
            Discretization::new(&flat, 0.0, 0.1, 64, 40.0),
            Err(Error::SingularMode { .. })
        ));
        assert!(matches!(
            Discretization::new(&flat, 0.1, 0.0, 64, 30.0),
            Err(Error::DomainTooSmall(_))
        ));
        assert!(matches!(
            Discretization::new(&flat, 0.1, 0.0, 63, 40.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            Discretization::new(&flat, params.nu0(), 0.0, 64, 40.0),
            Err(Error::WeightOutOfRange { .. })
        ));
    }

    #[test]
    fn flat_has_no_zero_cluster() {
        let d = flat_disc(0.2, 0.0, 64);
        let r = full_spectrum(&d).unwrap();
        assert!(r.diagnostics.cluster.is_empty());
        assert!(r.continuous_band_estimate < 0.0);
    }

    #[test]
    fn fit_recovers_polynomial() {
        let eta = [0.002, 0.004, 0.006, 0.008, 0.01];
        let y: Vec<f64> = eta
            .iter()
            .map(|e: &f64| 0.7 * e - 3.0 * e.powi(3))
            .collect();
        let (a, b) = fit_two(&eta, &y, 1);
        assert!((a - 0.7).abs() < 1e-12 && (b + 3.0).abs() < 1e-6);
        let y: Vec<f64> = eta
            .iter()
            .map(|e: &f64| -2.5 * e * e + 40.0 * e.powi(4))
            .collect();
        let (a, b) = fit_two(&eta, &y, 2);
        assert!((a + 2.5).abs() < 1e-12 && (b - 40.0).abs() < 1e-6);
    }
}
