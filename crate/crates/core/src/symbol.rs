//! Fourier symbols of the constant-coefficient operator `J(L₀ + η²∂ₓ⁻²)` in
//! the weighted space `L²_ν`, where every `∂ₓ` becomes `∂ₓ − ν`:
//!
//! ```text
//! λ(ξ) = z [1 − z²]⁻¹ [c − 3k − (c − k) z² + η² z⁻²],   z = iξ − ν.
//! ```
//!
//! The real part is also available from its explicit decomposition, which
//! gives an independent algebraic route for cross-checks.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::{fmt_f64, svg_curve, CsvTable};
use crate::params::WaveParams;

fn check_argument(nu: f64, eta: f64, xi: f64) -> Result<()> {
    if xi == 0.0 && nu == 0.0 && eta != 0.0 {
        return Err(Error::SingularArgument(format!(
            "∂ₓ⁻² is unbounded on the zero mode (ξ = 0, ν = 0, η = {eta})"
        )));
    }
    if xi == 0.0 && (nu.abs() - 1.0).abs() < f64::EPSILON {
        return Err(Error::SingularArgument(format!(
            "1 − (iξ − ν)² vanishes at ξ = 0, ν = {nu}"
        )));
    }
    Ok(())
}

/// Symbol `λ(ξ)` evaluated in complex arithmetic.
pub fn symbol_lambda(params: &WaveParams, nu: f64, eta: f64, xi: f64) -> Result<Complex64> {
    check_argument(nu, eta, xi)?;
    Ok(lambda_of_z(params, eta, Complex64::new(-nu, xi)))
}

/// `λ` as a function of the shifted derivative symbol `z`. Shared with the
/// collocation discretization, which uses the same `z` per Fourier mode.
pub(crate) fn lambda_of_z(params: &WaveParams, eta: f64, z: Complex64) -> Complex64 {
    let (k, c) = (params.k(), params.c());
    let z2 = z * z;
    let mut bracket = (c - 3.0 * k) - (c - k) * z2;
    if eta != 0.0 {
        bracket += eta * eta / z2;
    }
    z / (1.0 - z2) * bracket
}

/// `Re λ(ξ)` from the explicit decomposition
///
/// ```text
/// Re λ = −ν(c−k) − 2kν(ν² + ξ² − 1)/Q − η²ν(1 − ν² + 3ξ²)/((ξ² + ν²)Q),
/// Q = (1 − ν² + ξ²)² + 4ξ²ν².
/// ```
pub fn symbol_real_part(params: &WaveParams, nu: f64, eta: f64, xi: f64) -> Result<f64> {
    check_argument(nu, eta, xi)?;
    let (k, c) = (params.k(), params.c());
    let (n2, x2) = (nu * nu, xi * xi);
    let q = (1.0 - n2 + x2).powi(2) + 4.0 * x2 * n2;
    let mut re = -nu * (c - k) - 2.0 * k * nu * (n2 + x2 - 1.0) / q;
    if eta != 0.0 {
        re -= eta * eta * nu * (1.0 - n2 + 3.0 * x2) / ((x2 + n2) * q);
    }
    Ok(re)
}

/// Grid estimate of the spectral gap of the weighted continuous spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandBound {
    /// `b = −sup Re λ`, over the grid and the `|ξ| → ∞` limit.
    pub b: f64,
    pub argmax_xi: f64,
    pub grid_max_re: f64,
    /// `lim_{|ξ|→∞} Re λ(ξ) = −ν(c − k)`.
    pub tail_limit: f64,
}

/// Default symmetric ξ window, `20·max(1, ν₀)`.
pub fn default_xi_max(params: &WaveParams) -> f64 {
    20.0 * params.nu0().max(1.0)
}

pub fn continuous_spectrum_bound(
    params: &WaveParams,
    nu: f64,
    eta: f64,
    xi_max: f64,
    n_xi: usize,
) -> Result<BandBound> {
    let nu0 = params.nu0();
    if !(nu > 0.0 && nu < nu0) {
        return Err(Error::WeightOutOfRange { nu, nu0 });
    }
    if n_xi < 1024 {
        return Err(Error::InvalidArgument(format!(
            "n_xi must be at least 1024, got {n_xi}"
        )));
    }
    if !(xi_max > 0.0 && xi_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "xi_max must be positive, got {xi_max}"
        )));
    }
    let (mut grid_max_re, mut argmax_xi) = (f64::NEG_INFINITY, 0.0);
    for xi in linspace(-xi_max, xi_max, n_xi) {
        let re = symbol_real_part(params, nu, eta, xi)?;
        if re > grid_max_re {
            grid_max_re = re;
            argmax_xi = xi;
        }
    }
    let tail_limit = -nu * (params.c() - params.k());
    Ok(BandBound {
        b: -grid_max_re.max(tail_limit),
        argmax_xi,
        grid_max_re,
        tail_limit,
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 {
        (hi - lo) / (n - 1) as f64
    } else {
        0.0
    };
    (0..n).map(move |i| {
        if i + 1 == n && n > 1 {
            hi
        } else {
            lo + i as f64 * step
        }
    })
}

/// Sampled curve `ξ ↦ λ(ξ)` in the complex plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolCurve {
    pub params: WaveParams,
    pub nu: f64,
    pub eta: f64,
    pub xi: Vec<f64>,
    pub values: Vec<Complex64>,
}

pub fn figure1_curve(
    params: &WaveParams,
    nu: f64,
    eta: f64,
    xi_max: f64,
    n_xi: usize,
) -> Result<SymbolCurve> {
    if n_xi < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_xi must be at least 2, got {n_xi}"
        )));
    }
    let xi: Vec<f64> = linspace(-xi_max, xi_max, n_xi).collect();
    let values = xi
        .iter()
        .map(|&x| symbol_lambda(params, nu, eta, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolCurve {
        params: *params,
        nu,
        eta,
        xi,
        values,
    })
}

impl SymbolCurve {
    pub fn max_re(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max |λ(−ξ) − conj λ(ξ)|` over mirrored sample pairs.
    pub fn conjugate_defect(&self) -> f64 {
        let n = self.values.len();
        (0..n / 2)
            .map(|i| (self.values[n - 1 - i] - self.values[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["xi", "re", "im"]);
        for (x, v) in self.xi.iter().zip(&self.values) {
            t.push_row(vec![fmt_f64(*x), fmt_f64(v.re), fmt_f64(v.im)]);
        }
        t
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        Ok(self.to_csv().write_to(w)?)
    }

    pub fn to_svg(&self) -> String {
        let pts: Vec<(f64, f64)> = self.values.iter().map(|v| (v.re, v.im)).collect();
        let title = format!(
            "λ(ξ), k = {}, c = {}, η = {}, ν = {}",
            self.params.k(),
            self.params.c(),
            self.eta,
            self.nu
        );
        svg_curve(&pts, &title, "Re λ", "Im λ")
    }
}

/// `ρ₀ = 1/sqrt(2k)`, the admissible range of the rescaled weight.
pub fn rho0(k: f64) -> f64 {
    1.0 / (2.0 * k).sqrt()
}

/// Rescaled symbol in KP variables `ξ = εΞ`, `ν = ερ`, `η = ε²Υ`, `λ = ε³Λ`:
///
/// ```text
/// Λ(Ξ) = Z [1 − ε²Z²]⁻¹ [1 − (2k + ε²)Z² + Υ² Z⁻²],   Z = iΞ − ρ.
/// ```
pub fn hf_symbol(k: f64, eps: f64, rho: f64, upsilon: f64, xi: f64) -> Complex64 {
    let z = Complex64::new(-rho, xi);
    let z2 = z * z;
    let e2 = eps * eps;
    let mut bracket = 1.0 - (2.0 * k + e2) * z2;
    if upsilon != 0.0 {
        bracket += upsilon * upsilon / z2;
    }
    z / (1.0 - e2 * z2) * bracket
}

/// `Re Λ(Ξ)` in explicit form,
///
/// ```text
/// −ρ [ 1 + 2k(3Ξ² − ρ² + ε²(Ξ² + ρ²)²)/D + Υ²(1 + 3ε²Ξ² − ε²ρ²)/((Ξ² + ρ²) D) ],
/// D = 1 + 2ε²(Ξ² − ρ²) + ε⁴(Ξ² + ρ²)².
/// ```
pub fn hf_symbol_real(k: f64, eps: f64, rho: f64, upsilon: f64, xi: f64) -> f64 {
    let (e2, r2, x2) = (eps * eps, rho * rho, xi * xi);
    let s = x2 + r2;
    let d = 1.0 + 2.0 * e2 * (x2 - r2) + e2 * e2 * s * s;
    let mut bracket = 1.0 + 2.0 * k * (3.0 * x2 - r2 + e2 * s * s) / d;
    if upsilon != 0.0 {
        bracket += upsilon * upsilon * (1.0 + 3.0 * e2 * x2 - e2 * r2) / (s * d);
    }
    -rho * bracket
}

/// Uniform lower bound on `−Re Λ`, `β₀ = ρ[1 − 2kρ² − 2kε²ρ⁴/(1 − 2ε²ρ²)]`.
pub fn beta0(k: f64, eps: f64, rho: f64) -> f64 {
    let (e2, r2) = (eps * eps, rho * rho);
    rho * (1.0 - 2.0 * k * r2 - 2.0 * k * e2 * r2 * r2 / (1.0 - 2.0 * e2 * r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wave(k: f64, c: f64) -> WaveParams {
        WaveParams::new(k, c).unwrap()
    }

    #[test]
    fn unweighted_value() {
        // iξ(1+ξ²)⁻¹(c − 3k + (c − k)ξ²) at ξ = 1
        let v = symbol_lambda(&wave(1.0, 4.0), 0.0, 0.0, 1.0).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn weighted_value_at_origin() {
        let v = symbol_lambda(&wave(1.0, 4.0), 0.1, 0.0, 0.0).unwrap();
        // −ν(c − 3k − (c − k)ν²)/(1 − ν²)
        assert!((v.re - (-0.1 * 0.97 / 0.99)).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn singular_arguments() {
        let p = wave(1.0, 4.0);
        assert!(matches!(
            symbol_lambda(&p, 0.0, 0.5, 0.0),
            Err(Error::SingularArgument(_))
        ));
        assert!(matches!(
            symbol_real_part(&p, 0.0, 0.5, 0.0),
            Err(Error::SingularArgument(_))
        ));
        assert!(matches!(
            symbol_lambda(&p, 1.0, 0.0, 0.0),
            Err(Error::SingularArgument(_))
        ));
    }

    #[test]
    fn unweighted_symbol_imaginary() {
        let p = wave(1.0, 4.0);
        for i in -50..=50 {
            let xi = 0.37 * i as f64;
            assert_eq!(symbol_real_part(&p, 0.0, 0.0, xi).unwrap(), 0.0);
            assert!(symbol_lambda(&p, 0.0, 0.0, xi).unwrap().re.abs() < 1e-15);
        }
    }

    #[test]
    fn figure1_parameters_left_half_plane() {
        let p = wave(1.0, 4.0);
        let curve = figure1_curve(&p, 0.1, 0.01, 20.0, 4001).unwrap();
        assert!(curve.max_re() < 0.0);
        assert!(curve.conjugate_defect() <= 1e-12);
        let bound = continuous_spectrum_bound(&p, 0.1, 0.01, 20.0, 4001).unwrap();
        assert!(bound.b > 0.0);
        assert!((bound.tail_limit + 0.3).abs() < 1e-15);
    }

    #[test]
    fn eta_zero_curve_finite_at_origin() {
        let curve = figure1_curve(&wave(1.0, 4.0), 0.1, 0.0, 5.0, 101).unwrap();
        assert!(curve
            .values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite()));
    }

    #[test]
    fn bound_degenerates_as_weight_vanishes() {
        let p = wave(1.0, 4.0);
        let mut prev = f64::INFINITY;
        for nu in [1e-1, 1e-2, 1e-3, 1e-4] {
            let b = continuous_spectrum_bound(&p, nu, 0.0, 20.0, 4001)
                .unwrap()
                .b;
            assert!(b > 0.0 && b < prev);
            prev = b;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn bound_near_upper_weight() {
        let p = wave(1.0, 4.0);
        let nu = 0.5;
        assert!(nu < p.nu0());
        // (c−k)ν⁴ − 2(c−2k)ν² + c − 3k > 0 at ν = 0.5
        assert!(3.0 * nu.powi(4) - 4.0 * nu * nu + 1.0 > 0.0);
        assert!(
            continuous_spectrum_bound(&p, nu, 0.0, 20.0, 4001)
                .unwrap()
                .b
                > 0.0
        );
    }

    #[test]
    fn bound_rejects_bad_weight() {
        let p = wave(1.0, 4.0);
        for nu in [0.0, -0.1, p.nu0(), 0.9] {
            assert!(matches!(
                continuous_spectrum_bound(&p, nu, 0.0, 20.0, 4001),
                Err(Error::WeightOutOfRange { .. })
            ));
        }
        assert!(matches!(
            continuous_spectrum_bound(&p, 0.1, 0.0, 20.0, 100),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn hf_value_at_origin() {
        let (k, eps, rho) = (1.0, 0.1, 0.3);
        let (e2, r2) = (eps * eps, rho * rho);
        let expected = -rho
            * (1.0 + 2.0 * k * (-r2 + e2 * r2 * r2) / (1.0 - 2.0 * e2 * r2 + e2 * e2 * r2 * r2));
        assert!((hf_symbol_real(k, eps, rho, 0.0, 0.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn hf_bounded_by_beta0() {
        let (k, eps) = (1.0, 0.1);
        let rho = 0.5 * rho0(k);
        let b0 = beta0(k, eps, rho);
        assert!(b0 > 0.0);
        for i in -200..=200 {
            for j in 0..=40 {
                let xi = 0.1 * i as f64;
                let up = 0.25 * j as f64;
                assert!(-hf_symbol_real(k, eps, rho, up, xi) >= b0);
            }
        }
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(c in 3.01f64..10.0, frac in 0.01f64..0.99, eta in 0.0f64..2.0, xi in 0.01f64..50.0) {
            let p = wave(1.0, c);
            let nu = frac * p.nu0();
            let a = symbol_lambda(&p, nu, eta, xi).unwrap();
            let b = symbol_lambda(&p, nu, eta, -xi).unwrap();
            prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
        }

        #[test]
        fn two_routes_to_real_part(c in 3.01f64..10.0, frac in 0.01f64..0.99, eta in 0.0f64..2.0, xi in -50.0f64..50.0) {
            let p = wave(1.0, c);
            let nu = frac * p.nu0();
            let a = symbol_lambda(&p, nu, eta, xi).unwrap().re;
            let b = symbol_real_part(&p, nu, eta, xi).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn weighted_band_strictly_negative(c in 3.01f64..10.0, frac in 0.01f64..0.99, eta in 0.0f64..2.0, xi in -50.0f64..50.0) {
            let p = wave(1.0, c);
            let nu = frac * p.nu0();
            prop_assert!(symbol_real_part(&p, nu, eta, xi).unwrap() < 0.0);
        }

        #[test]
        fn kp_scaling_is_exact(k in 0.5f64..2.0, eps in 0.01f64..0.5, rfrac in 0.05f64..0.95, up in 0.0f64..3.0, xi in -30.0f64..30.0) {
            let rho = rfrac * rho0(k);
            let p = WaveParams::from_eps(k, eps).unwrap();
            let lam = symbol_real_part(&p, eps * rho, eps * eps * up, eps * xi).unwrap();
            let cap = hf_symbol_real(k, eps, rho, up, xi);
            let cap_c = hf_symbol(k, eps, rho, up, xi);
            prop_assert!((eps.powi(3) * cap - lam).abs() <= 1e-12 * lam.abs().max(1e-3));
            prop_assert!((cap_c.re - cap).abs() <= 1e-12 * cap.abs().max(1.0));
        }
    }
}
