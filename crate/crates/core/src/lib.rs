//! Smooth solitary waves of the Camassa–Holm equation and the transverse
//! spectral stability of the line solitary wave in the two-dimensional
//! (CH-KP) generalization.
//!
//! The crate is organized bottom-up:
//!
//! * [`params`] and [`profile`] build the solitary wave `φ = k + ψ`;
//! * [`functionals`] evaluates mass, energy and `‖ψ‖²` in closed form and by quadrature;
//! * [`symbol`] evaluates the continuous-spectrum symbols in exponentially weighted spaces;
//! * [`puiseux`] assembles the splitting coefficients of the double zero eigenvalue;
//! * [`specdisc`] discretizes the weighted linearized operator by Fourier collocation.

pub mod error;
pub mod functionals;
pub mod output;
pub mod params;
pub mod profile;
pub mod puiseux;
pub mod quadrature;
pub mod specdisc;
pub mod symbol;

pub use error::{Error, Result};
pub use params::WaveParams;
pub use profile::{Profile, ProfileOptions};

pub use num_complex::Complex64;
