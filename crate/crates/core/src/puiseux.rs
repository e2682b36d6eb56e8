//! Splitting of the double zero eigenvalue under transverse modulation.
//!
//! For small `η` the pair `λ±(η) = λ₁η + λ₂η² + O(η³)` has
//!
//! ```text
//! λ₁² = −‖ψ‖² / (dE₁D/dc)
//! 2λ₂ = (dM₁D/dc) / (2 (dE₁D/dc)²) · [‖ψ‖² dM₁D/dc − 2 M₁D dE₁D/dc]
//! ```
//!
//! Both are negative for every `c > 3k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::functionals::{functionals_closed, FunctionalReport};
use crate::output::{fmt_f64, CsvTable};
use crate::params::WaveParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constituents {
    pub mass: f64,
    pub dmass_dc: f64,
    pub denergy_dc: f64,
    pub norm2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxCoefficients {
    pub params: WaveParams,
    pub lambda1_sq: f64,
    pub lambda2: f64,
    pub constituents: Constituents,
}

impl PuiseuxCoefficients {
    /// Assembles the coefficients from any functional report, closed-form or
    /// quadrature.
    pub fn from_report(report: &FunctionalReport) -> Self {
        let constituents = Constituents {
            mass: report.mass,
            dmass_dc: report.dmass_dc,
            denergy_dc: report.denergy_dc,
            norm2: report.norm2,
        };
        let Constituents {
            mass,
            dmass_dc: dm,
            denergy_dc: de,
            norm2,
        } = constituents;
        let lambda1_sq = -norm2 / de;
        let two_lambda2 = dm / (2.0 * de * de) * (norm2 * dm - 2.0 * mass * de);
        Self {
            params: report.params,
            lambda1_sq,
            lambda2: 0.5 * two_lambda2,
            constituents,
        }
    }

    /// `Im λ₊′(0) = sqrt(−λ₁²)`.
    pub fn lambda1_im(&self) -> f64 {
        (-self.lambda1_sq).sqrt()
    }

    pub fn report(&self) -> PuiseuxReport {
        let (asym_lambda1_sq, asym_2lambda2) = kdv_limit_coefficients(&self.params);
        PuiseuxReport {
            k: self.params.k(),
            c: self.params.c(),
            lambda1_sq: self.lambda1_sq,
            lambda2: self.lambda2,
            asym_lambda1_sq,
            asym_2lambda2,
            coefficients: *self,
        }
    }
}

/// Coefficients from the closed-form functionals.
pub fn puiseux_coefficients(params: &WaveParams) -> PuiseuxCoefficients {
    PuiseuxCoefficients::from_report(&functionals_closed(params))
}

/// Leading-order pair `λ± = ±i·sqrt(−λ₁²)·η + λ₂η²`, `+` branch with `Im > 0`
/// for `η > 0`.
pub fn resonance_pair_prediction(coeffs: &PuiseuxCoefficients, eta: f64) -> (Complex64, Complex64) {
    let slope = coeffs.lambda1_im();
    if eta.abs() > 0.1 * slope {
        log::warn!(
            "eta = {eta} exceeds the heuristic range 0.1·sqrt(−λ₁²) = {:e} of the expansion",
            0.1 * slope
        );
    }
    let re = coeffs.lambda2 * eta * eta;
    let im = slope * eta;
    (Complex64::new(re, im), Complex64::new(re, -im))
}

/// KdV-limit asymptotics `(λ₁² ~ −(4/3)(c − 3k), 2λ₂ ~ −8√(2k)/(3√(c − 3k)))`.
pub fn kdv_limit_coefficients(params: &WaveParams) -> (f64, f64) {
    let a = params.amplitude();
    let k = params.k();
    (-4.0 / 3.0 * a, -8.0 * (2.0 * k).sqrt() / (3.0 * a.sqrt()))
}

/// Exact KP-II pair `Λ±(Υ) = ±(2i/√3)Υ sqrt(1 ± (4i/√3)√(2k)Υ)`, principal
/// branch of the square root.
pub fn kp2_resonance(k: f64, upsilon: f64) -> (Complex64, Complex64) {
    let s3 = 3f64.sqrt();
    let pre = Complex64::new(0.0, 2.0 / s3 * upsilon);
    let d = Complex64::new(0.0, 4.0 / s3 * (2.0 * k).sqrt() * upsilon);
    let one = Complex64::new(1.0, 0.0);
    (pre * (one + d).sqrt(), -pre * (one - d).sqrt())
}

/// JSON report per `(k, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxReport {
    pub k: f64,
    pub c: f64,
    pub lambda1_sq: f64,
    pub lambda2: f64,
    pub asym_lambda1_sq: f64,
    pub asym_2lambda2: f64,
    pub coefficients: PuiseuxCoefficients,
}

impl PuiseuxReport {
    pub const CSV_HEADER: [&'static str; 5] = [
        "c",
        "lambda1_sq",
        "lambda2",
        "asym_lambda1_sq",
        "asym_2lambda2",
    ];

    pub fn csv_row(&self) -> Vec<String> {
        [
            self.c,
            self.lambda1_sq,
            self.lambda2,
            self.asym_lambda1_sq,
            self.asym_2lambda2,
        ]
        .iter()
        .map(|v| fmt_f64(*v))
        .collect()
    }
}

pub fn sweep_table(reports: &[PuiseuxReport]) -> CsvTable {
    let mut t = CsvTable::new(&PuiseuxReport::CSV_HEADER);
    for r in reports {
        t.push_row(r.csv_row());
    }
    t
}
