//! Order-of-magnitude error budget for a laboratory two-screen experiment.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Neutron mass in kg.
pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-27;

/// Position-sampling and time-indeterminacy errors with their order-unity
/// prefactors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyBudget {
    pub pos_err: f64,
    pub time_err: f64,
    pub c1: f64,
    pub c2: f64,
}

/// `pos_err = c₁ d/L` and `time_err = c₂ ħL/(m d² v_z)` with `c₁ = c₂ = 1`.
///
/// Inputs are SI: slit half-width `l` and trace width `d` in metres, beam
/// speed `v_z` in m/s, mass in kg.
pub fn uncertainty_budget(l: f64, d: f64, v_z: f64, mass: f64) -> Result<UncertaintyBudget> {
    for (name, v) in [("L", l), ("d", d), ("v_z", v_z), ("mass", mass)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    let (c1, c2) = (1.0, 1.0);
    Ok(UncertaintyBudget {
        pos_err: c1 * d / l,
        time_err: c2 * HBAR * l / (mass * d * d * v_z),
        c1,
        c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neutron_numbers() {
        let b = uncertainty_budget(1e-2, 1e-4, 1e4, NEUTRON_MASS).unwrap();
        assert!((b.pos_err - 1e-2).abs() < 1e-15);
        // ħ/m ≈ 6.296e-8 m²/s
        assert!((b.time_err - 6.296e-6).abs() < 1e-8, "{}", b.time_err);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(uncertainty_budget(0.0, 1.0, 1.0, 1.0).is_err());
    }
}
