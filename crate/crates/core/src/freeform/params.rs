use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Free-particle parameters in units with `ħ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeParams {
    pub mass: f64,
    pub time: f64,
    pub delta: f64,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub separation: Option<f64>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

impl FreeParams {
    pub fn new(mass: f64, time: f64, delta: f64) -> Result<Self> {
        let p = Self { mass, time, delta, sigma: None, separation: None };
        p.validate()?;
        Ok(p)
    }

    /// Adds the slit width `σ` and separation `L`.
    pub fn with_slits(mut self, sigma: f64, separation: f64) -> Result<Self> {
        self.sigma = Some(sigma);
        self.separation = Some(separation);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        positive("time", self.time)?;
        positive("delta", self.delta)?;
        if let Some(s) = self.sigma {
            positive("sigma", s)?;
        }
        if let Some(l) = self.separation {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(Error::InvalidParameter(format!("separation must be non-negative, got {l}")));
            }
        }
        Ok(())
    }

    pub(crate) fn slits(&self) -> Result<(f64, f64)> {
        match (self.sigma, self.separation) {
            (Some(s), Some(l)) => Ok((s, l)),
            _ => Err(Error::InvalidParameter("slit width and separation are required".into())),
        }
    }

    /// `β = 1/(2δ²) + 2m²δ²/t²`.
    pub fn beta(&self) -> f64 {
        let (m, t, d) = (self.mass, self.time, self.delta);
        0.5 / (d * d) + 2.0 * m * m * d * d / (t * t)
    }

    /// `γ = 1/σ² + m²σ²/t²`.
    pub fn gamma(&self) -> Result<f64> {
        let (s, _) = self.slits()?;
        let (m, t) = (self.mass, self.time);
        Ok(1.0 / (s * s) + m * m * s * s / (t * t))
    }

    /// Off-diagonal decay rate `½(m²δ²/t² + 1/(4δ²))` of the two-time effect.
    pub fn envelope_rate(&self) -> f64 {
        let (m, t, d) = (self.mass, self.time, self.delta);
        0.5 * (m * m * d * d / (t * t) + 0.25 / (d * d))
    }
}
