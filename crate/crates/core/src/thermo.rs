//! Thermodynamic states generated by a Massieu–Planck potential `φ(v, T)`.
//!
//! Entropy, pressure and energy follow by differentiation:
//!
//! ```text
//! σ = R(φ + Tφ_T),   p = RTφ_v,   e = RT²φ_T
//! ```
//!
//! and a state is applicable where `φ_vv < 0` and `φ_TT + 2φ_T/T > 0`.
//!
//! Two potentials are provided, both with additive entropy constant 0:
//!
//! * ideal gas: `φ = ln v + (n/2) ln T` with gas constant `R`;
//! * reduced van der Waals gas: `φ = ln(3v − 1) + (n/2) ln T + 9/(8Tv)` with
//!   effective constant `R = 8/3`, so that the critical point is
//!   `(e, v, T, p) = (1, 1, 1, 1)`.

use crate::error::{Error, Result};
use crate::math::ln;

/// Effective gas constant of the reduced van der Waals potential.
pub const VDW_GAS_CONSTANT: f64 = 8.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassieuPotential {
    Ideal { n: f64, gas_constant: f64 },
    VdwReduced { n: f64 },
}

/// A point of the thermodynamic state surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePoint {
    pub e: f64,
    pub v: f64,
    pub t: f64,
    pub p: f64,
    pub sigma: f64,
}

impl MassieuPotential {
    pub fn ideal(n: f64, gas_constant: f64) -> Self {
        MassieuPotential::Ideal { n, gas_constant }
    }

    pub fn vdw_reduced(n: f64) -> Self {
        MassieuPotential::VdwReduced { n }
    }

    pub fn gas_constant(&self) -> f64 {
        match *self {
            MassieuPotential::Ideal { gas_constant, .. } => gas_constant,
            MassieuPotential::VdwReduced { .. } => VDW_GAS_CONSTANT,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MassieuPotential::Ideal { .. } => "ideal",
            MassieuPotential::VdwReduced { .. } => "vdw-reduced",
        }
    }

    pub fn degrees_of_freedom(&self) -> f64 {
        match *self {
            MassieuPotential::Ideal { n, .. } | MassieuPotential::VdwReduced { n } => n,
        }
    }

    /// Checks `(v, T)` against the domain of the potential.
    pub fn check_domain(&self, v: f64, t: f64) -> Result<()> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain { what: "temperature must be positive", value: t });
        }
        let v_min = match self {
            MassieuPotential::Ideal { .. } => 0.0,
            MassieuPotential::VdwReduced { .. } => 1.0 / 3.0,
        };
        if !(v > v_min) || !v.is_finite() {
            return Err(Error::Domain { what: "specific volume outside model domain", value: v });
        }
        Ok(())
    }

    pub fn value(&self, v: f64, t: f64) -> Result<f64> {
        self.check_domain(v, t)?;
        Ok(match *self {
            MassieuPotential::Ideal { n, .. } => ln(v) + 0.5 * n * ln(t),
            MassieuPotential::VdwReduced { n } => {
                ln(3.0 * v - 1.0) + 0.5 * n * ln(t) + 9.0 / (8.0 * t * v)
            }
        })
    }

    pub fn d_v(&self, v: f64, t: f64) -> Result<f64> {
        self.check_domain(v, t)?;
        Ok(match *self {
            MassieuPotential::Ideal { .. } => 1.0 / v,
            MassieuPotential::VdwReduced { .. } => {
                3.0 / (3.0 * v - 1.0) - 9.0 / (8.0 * t * v * v)
            }
        })
    }

    pub fn d_t(&self, v: f64, t: f64) -> Result<f64> {
        self.check_domain(v, t)?;
        Ok(match *self {
            MassieuPotential::Ideal { n, .. } => 0.5 * n / t,
            MassieuPotential::VdwReduced { n } => 0.5 * n / t - 9.0 / (8.0 * t * t * v),
        })
    }

    pub fn d_vv(&self, v: f64, t: f64) -> Result<f64> {
        self.check_domain(v, t)?;
        Ok(match *self {
            MassieuPotential::Ideal { .. } => -1.0 / (v * v),
            MassieuPotential::VdwReduced { .. } => {
                let u = 3.0 * v - 1.0;
                -9.0 / (u * u) + 9.0 / (4.0 * t * v * v * v)
            }
        })
    }

    pub fn d_tt(&self, v: f64, t: f64) -> Result<f64> {
        self.check_domain(v, t)?;
        Ok(match *self {
            MassieuPotential::Ideal { n, .. } => -0.5 * n / (t * t),
            MassieuPotential::VdwReduced { n } => {
                -0.5 * n / (t * t) + 9.0 / (4.0 * t * t * t * v)
            }
        })
    }

    pub fn d_vt(&self, v: f64, t: f64) -> Result<f64> {
        self.check_domain(v, t)?;
        Ok(match *self {
            MassieuPotential::Ideal { .. } => 0.0,
            MassieuPotential::VdwReduced { .. } => 9.0 / (8.0 * t * t * v * v),
        })
    }
}

/// Entropy, pressure and energy at `(v, T)`.
pub fn state_from_potential(phi: &MassieuPotential, v: f64, t: f64) -> Result<StatePoint> {
    let r = phi.gas_constant();
    let value = phi.value(v, t)?;
    let phi_v = phi.d_v(v, t)?;
    let phi_t = phi.d_t(v, t)?;
    Ok(StatePoint {
        e: r * t * t * phi_t,
        v,
        t,
        p: r * t * phi_v,
        sigma: r * (value + t * phi_t),
    })
}

/// `true` iff `φ_vv < 0` and `φ_TT + 2φ_T/T > 0`.
pub fn applicability(phi: &MassieuPotential, v: f64, t: f64) -> Result<bool> {
    let vv = phi.d_vv(v, t)?;
    let tt = phi.d_tt(v, t)?;
    let t1 = phi.d_t(v, t)?;
    Ok(vv < 0.0 && tt + 2.0 * t1 / t > 0.0)
}

/// Dimensionless entropy level `σ/R = φ + Tφ_T`.
pub fn entropy_level(phi: &MassieuPotential, v: f64, t: f64) -> Result<f64> {
    Ok(phi.value(v, t)? + t * phi.d_t(v, t)?)
}
