//! Conserved functionals of the one-dimensional wave and their c-derivatives.
//!
//! With `ξ₀ = sqrt((c − 3k)/(2k))` and `B(ξ₀) = ξ₀√(1+ξ₀²) + arcsinh ξ₀`:
//!
//! ```text
//! M₁D     = ∫ψ              = 4k·B(ξ₀)
//! ‖ψ‖²    = ∫ψ²             = 2k(2c − 5k)·B(ξ₀) − 4k²ξ₀(1+ξ₀²)^{3/2}
//! E₁D     = ½∫(ψ′² + ψ²)    = (a+k)√(a(a+2k)) − k²·ln((a + k + √(a(a+2k)))/k),  a = c − 3k
//! dM₁D/dc = 2√((c−k)/(c−3k))
//! dE₁D/dc = 2√((c−3k)(c−k))
//! ```

use serde::{Deserialize, Serialize};

use crate::output::{fmt_f64, CsvTable};
use crate::params::WaveParams;
use crate::profile::Profile;
use crate::quadrature::{inner, simpson, trapezoid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub params: WaveParams,
    pub mass: f64,
    pub energy: f64,
    pub norm2: f64,
    pub dmass_dc: f64,
    pub denergy_dc: f64,
    pub method: Method,
}

fn arc_term(xi0: f64) -> f64 {
    xi0 * (1.0 + xi0 * xi0).sqrt() + xi0.asinh()
}

pub fn mass_closed(params: &WaveParams) -> f64 {
    4.0 * params.k() * arc_term(params.xi0())
}

pub fn mass_derivative_closed(params: &WaveParams) -> f64 {
    let (k, c) = (params.k(), params.c());
    2.0 * ((c - k) / params.amplitude()).sqrt()
}

pub fn energy_closed(params: &WaveParams) -> f64 {
    let k = params.k();
    let a = params.amplitude();
    let root = (a * (a + 2.0 * k)).sqrt();
    // ln(1 + t) form keeps precision as a → 0
    (a + k) * root - k * k * ((a + root) / k).ln_1p()
}

pub fn energy_derivative_closed(params: &WaveParams) -> f64 {
    2.0 * (params.amplitude() * (params.c() - params.k())).sqrt()
}

pub fn norm2_closed(params: &WaveParams) -> f64 {
    let (k, c) = (params.k(), params.c());
    let xi0 = params.xi0();
    let s = 1.0 + xi0 * xi0;
    2.0 * k * (2.0 * c - 5.0 * k) * arc_term(xi0) - 4.0 * k * k * xi0 * (s * s * s).sqrt()
}

pub fn functionals_closed(params: &WaveParams) -> FunctionalReport {
    FunctionalReport {
        params: *params,
        mass: mass_closed(params),
        energy: energy_closed(params),
        norm2: norm2_closed(params),
        dmass_dc: mass_derivative_closed(params),
        denergy_dc: energy_derivative_closed(params),
        method: Method::ClosedForm,
    }
}

/// Trapezoid quadrature over the profile grid. The c-derivatives integrate
/// the profile's centered differences `∂cψ`, `∂cψ′`.
pub fn functionals_quadrature(profile: &Profile) -> FunctionalReport {
    let dx = profile.dx();
    let psi = profile.psi();
    let dpsi = profile.dpsi();
    let energy_density: Vec<f64> = psi
        .iter()
        .zip(dpsi)
        .map(|(p, d)| 0.5 * (d * d + p * p))
        .collect();
    FunctionalReport {
        params: *profile.params(),
        mass: trapezoid(psi, dx),
        energy: trapezoid(&energy_density, dx),
        norm2: inner(psi, psi, dx),
        dmass_dc: trapezoid(profile.dcpsi(), dx),
        denergy_dc: inner(dpsi, profile.dcdpsi(), dx) + inner(psi, profile.dcpsi(), dx),
        method: Method::Quadrature,
    }
}

/// `E₁D` from the ψ-substituted integral `2∫₀^a (a − z)(z + k)/sqrt(z(z + 2k)) dz`,
/// with `z = s²` removing the endpoint singularity. Independent of any profile.
pub fn energy_substituted_quadrature(params: &WaveParams, panels: usize) -> f64 {
    let k = params.k();
    let a = params.amplitude();
    4.0 * simpson(
        |s| {
            let z = s * s;
            (a - z) * (z + k) / (z + 2.0 * k).sqrt()
        },
        0.0,
        a.sqrt(),
        panels,
    )
}

/// Sup-norm of the first variation of the augmented energy,
/// `Λ′c(φ) = −(3/2)φ² + ½φ′² + φφ″ + cφ − cφ″ − ck + (3/2)k²`.
pub fn euler_lagrange_residual(profile: &Profile) -> f64 {
    let k = profile.params().k();
    let c = profile.params().c();
    profile
        .psi()
        .iter()
        .zip(profile.dpsi())
        .zip(profile.ddpsi())
        .map(|((&psi, &dpsi), &ddpsi)| {
            let phi = k + psi;
            let v =
                -1.5 * phi * phi + 0.5 * dpsi * dpsi + phi * ddpsi + c * phi - c * ddpsi - c * k
                    + 1.5 * k * k;
            v.abs()
        })
        .fold(0.0, f64::max)
}

/// Fredholm pairing `⟨φ′, ∂ₓ⁻¹∂cμ⟩`, evaluated as `−⟨φ − k, ∂cμ⟩`. Equals
/// `−dE₁D/dc`.
pub fn fredholm_pairing(profile: &Profile) -> f64 {
    -inner(profile.psi(), profile.dcmu(), profile.dx())
}

/// The same pairing computed literally, with `∂ₓ⁻¹f = ∫_{+∞}^x f` by
/// cumulative quadrature from the right end. Second-order accurate in `dx`.
pub fn fredholm_pairing_direct(profile: &Profile) -> f64 {
    let dx = profile.dx();
    let anti = crate::quadrature::antiderivative_from_right(profile.dcmu(), dx);
    inner(profile.dpsi(), &anti, dx)
}

impl FunctionalReport {
    pub const CSV_HEADER: [&'static str; 7] = ["c", "M", "dM/dc", "E", "dE/dc", "norm2", "method"];

    pub fn csv_row(&self) -> Vec<String> {
        let mut row: Vec<String> = [
            self.params.c(),
            self.mass,
            self.dmass_dc,
            self.energy,
            self.denergy_dc,
            self.norm2,
        ]
        .iter()
        .map(|v| fmt_f64(*v))
        .collect();
        row.push(self.method.as_str().to_owned());
        row
    }
}

/// CSV table of a c-sweep of reports.
pub fn sweep_table(reports: &[FunctionalReport]) -> CsvTable {
    let mut t = CsvTable::new(&FunctionalReport::CSV_HEADER);
    for r in reports {
        t.push_row(r.csv_row());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::solve_profile;

    fn wave(k: f64, c: f64) -> WaveParams {
        WaveParams::new(k, c).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn closed_form_values_at_k1_c4() {
        let p = wave(1.0, 4.0);
        assert!((mass_closed(&p) - 6.0980).abs() < 1e-3);
        assert!((norm2_closed(&p) - 3.9509).abs() < 1e-3);
        assert!((mass_derivative_closed(&p) - 2.0 * 3f64.sqrt()).abs() < 1e-14);
        assert!((energy_derivative_closed(&p) - 2.0 * 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn limits_at_existence_boundary() {
        let p = wave(1.0, 3.0 + 1e-10);
        assert!(mass_closed(&p) < 1e-4);
        assert!(norm2_closed(&p) < 1e-12);
        assert!(energy_closed(&p) < 1e-12);
        assert!(mass_derivative_closed(&p) > 1e4);
        assert!(energy_derivative_closed(&p) < 1e-4);
    }

    #[test]
    fn energy_closed_matches_substituted_integral() {
        for c in [3.01, 3.5, 4.0, 7.0] {
            let p = wave(1.0, c);
            assert!(rel(energy_substituted_quadrature(&p, 4000), energy_closed(&p)) < 1e-10);
        }
    }

    #[test]
    fn finite_differences_of_closed_forms() {
        for (k, c) in [(1.0, 4.0), (1.0, 3.5), (2.0, 9.0), (0.5, 1.6)] {
            let p = wave(k, c);
            let h = p.dc_step();
            let (pp, pm) = (p.with_speed(c + h).unwrap(), p.with_speed(c - h).unwrap());
            let dm = (mass_closed(&pp) - mass_closed(&pm)) / (2.0 * h);
            let de = (energy_closed(&pp) - energy_closed(&pm)) / (2.0 * h);
            assert!(rel(dm, mass_derivative_closed(&p)) < 1e-6);
            assert!(rel(de, energy_derivative_closed(&p)) < 1e-6);
        }
    }

    #[test]
    fn monotone_in_c() {
        let ladder: Vec<WaveParams> = (1..40).map(|i| wave(1.0, 3.0 + 0.25 * i as f64)).collect();
        for w in ladder.windows(2) {
            assert!(mass_closed(&w[0]) < mass_closed(&w[1]));
            assert!(energy_closed(&w[0]) < energy_closed(&w[1]));
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for c in [3.5, 4.0] {
            let p = wave(1.0, c);
            let prof = Profile::solve(p, &Default::default()).unwrap();
            let q = functionals_quadrature(&prof);
            let e = functionals_closed(&p);
            assert_eq!(q.method, Method::Quadrature);
            assert!(rel(q.mass, e.mass) < 1e-8, "M {} {}", q.mass, e.mass);
            assert!(
                rel(q.energy, e.energy) < 1e-8,
                "E {} {}",
                q.energy,
                e.energy
            );
            assert!(rel(q.norm2, e.norm2) < 1e-8, "N {} {}", q.norm2, e.norm2);
            assert!(rel(q.dmass_dc, e.dmass_dc) < 1e-6);
            assert!(rel(q.denergy_dc, e.denergy_dc) < 1e-6);
        }
    }

    #[test]
    fn odd_integrand_vanishes() {
        let prof = solve_profile(wave(1.0, 4.0), 40.0, 4096).unwrap();
        assert!(inner(prof.dpsi(), prof.psi(), prof.dx()).abs() < 1e-12);
    }

    #[test]
    fn euler_lagrange() {
        let p = wave(1.0, 4.0);
        let prof = solve_profile(p, 40.0, 4096).unwrap();
        assert!(euler_lagrange_residual(&prof) <= 1e-8);
        let flat = Profile::flat(p, -10.0, 0.1, 201);
        assert_eq!(euler_lagrange_residual(&flat), 0.0);
        let mut bad = prof.clone();
        bad.ddpsi.iter_mut().for_each(|v| *v *= 1.01);
        assert!(euler_lagrange_residual(&bad) >= 1e-3 * p.amplitude());
    }

    #[test]
    fn fredholm_pairing_identity() {
        for c in [3.5, 4.0] {
            let p = wave(1.0, c);
            let prof = Profile::solve(p, &Default::default()).unwrap();
            let pair = fredholm_pairing(&prof);
            assert!(pair < 0.0);
            assert!(rel(-pair, energy_derivative_closed(&p)) < 1e-4);
            assert!(rel(fredholm_pairing_direct(&prof), pair) < 1e-3);
        }
        let mut prof = solve_profile(wave(1.0, 4.0), 40.0, 512).unwrap();
        prof.dcmu.iter_mut().for_each(|v| *v = 0.0);
        assert_eq!(fredholm_pairing(&prof), 0.0);
    }

    #[test]
    fn report_json_round_trip() {
        let r = functionals_closed(&wave(1.0, 4.0));
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"closed_form\""));
        let back: FunctionalReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let t = sweep_table(&[r]).to_string();
        assert!(t.starts_with("c,M,dM/dc,E,dE/dc,norm2,method\n4.0,"));
    }
}
