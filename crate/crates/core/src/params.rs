use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Background level `k` and wave speed `c` of a solitary wave.
///
/// A smooth solitary wave exists iff `c > 3k`; the constructor enforces it so
/// every downstream computation can rely on `a = c − 3k > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct WaveParams {
    k: f64,
    c: f64,
}

#[derive(Deserialize)]
struct RawParams {
    k: f64,
    c: f64,
}

impl TryFrom<RawParams> for WaveParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        WaveParams::new(raw.k, raw.c)
    }
}

impl WaveParams {
    pub fn new(k: f64, c: f64) -> Result<Self> {
        if !(k.is_finite() && c.is_finite()) || k <= 0.0 || c <= 3.0 * k {
            return Err(Error::Existence { k, c });
        }
        Ok(Self { k, c })
    }

    /// Parameters on the small-amplitude branch `c = 3k + ε²`.
    pub fn from_eps(k: f64, eps: f64) -> Result<Self> {
        Self::new(k, 3.0 * k + eps * eps)
    }

    pub fn with_speed(&self, c: f64) -> Result<Self> {
        Self::new(self.k, c)
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Peak height of ψ, `a = c − 3k`.
    #[inline]
    pub fn amplitude(&self) -> f64 {
        self.c - 3.0 * self.k
    }

    /// Spatial decay rate of ψ, `ν₀ = sqrt((c − 3k)/(c − k))`. Also the upper
    /// end of the admissible weight range.
    #[inline]
    pub fn nu0(&self) -> f64 {
        (self.amplitude() / (self.c - self.k)).sqrt()
    }

    /// `ε = sqrt(c − 3k)`.
    #[inline]
    pub fn eps(&self) -> f64 {
        self.amplitude().sqrt()
    }

    /// `ξ₀ = sqrt((c − 3k)/(2k))`.
    #[inline]
    pub fn xi0(&self) -> f64 {
        (self.amplitude() / (2.0 * self.k)).sqrt()
    }

    /// Centered-difference step in `c`, `1e−5·(c − 3k)`.
    #[inline]
    pub fn dc_step(&self) -> f64 {
        1e-5 * self.amplitude()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_existence_boundary() {
        assert!(matches!(
            WaveParams::new(1.0, 3.0),
            Err(Error::Existence { .. })
        ));
        assert!(matches!(
            WaveParams::new(1.0, 2.0),
            Err(Error::Existence { .. })
        ));
        assert!(matches!(
            WaveParams::new(0.0, 2.0),
            Err(Error::Existence { .. })
        ));
        assert!(matches!(
            WaveParams::new(f64::NAN, 4.0),
            Err(Error::Existence { .. })
        ));
    }

    #[test]
    fn derived_quantities() {
        let p = WaveParams::new(1.0, 4.0).unwrap();
        assert_eq!(p.amplitude(), 1.0);
        assert!((p.nu0() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((p.xi0() - 0.5f64.sqrt()).abs() < 1e-15);
        let q = WaveParams::from_eps(2.0, 0.1).unwrap();
        assert!((q.eps() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn nu0_in_unit_interval() {
        for c in [3.0001, 3.5, 4.0, 10.0, 1e4] {
            let nu0 = WaveParams::new(1.0, c).unwrap().nu0();
            assert!(nu0 > 0.0 && nu0 < 1.0);
        }
    }

    #[test]
    fn json_validates() {
        let p: WaveParams = serde_json::from_str(r#"{"k":1.0,"c":4.0}"#).unwrap();
        assert_eq!(p.c(), 4.0);
        assert!(serde_json::from_str::<WaveParams>(r#"{"k":1.0,"c":3.0}"#).is_err());
    }
}
