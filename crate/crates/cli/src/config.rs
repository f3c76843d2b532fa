//! Run configuration: a JSON document with a fixed schema.
//!
//! ```json
//! {
//!   "gas": "vdw", "n": 3, "sigma0": -0.693, "intensity": 1,
//!   "calibration": { "rho_inf": 1.587 },
//!   "grid": { "r_start": 0.6, "r_end": 50, "points": 200, "spacing": "log" },
//!   "branch": "higher"
//! }
//! ```
//!
//! Unknown keys are rejected. `R` defaults to 1 and is ignored for the vdW
//! gas. `viscosity` selects the viscous solver, `expansion` the series.

use serde::Deserialize;
use srcflow_core::expansions::{Regime, SeriesCoefficients};
use srcflow_core::{Branch, Calibration, FlowConfig, IsentropeModel};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GasName {
    Ideal,
    Vdw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchName {
    Lower,
    Higher,
}

impl From<BranchName> for Branch {
    fn from(b: BranchName) -> Branch {
        match b {
            BranchName::Lower => Branch::Lower,
            BranchName::Higher => Branch::Higher,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeName {
    Small,
    Large,
    Regular,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSpec {
    pub c0: Option<f64>,
    pub rho_inf: Option<f64>,
    pub r_ref: Option<f64>,
    pub rho_ref: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub r_start: f64,
    pub r_end: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViscositySpec {
    pub eta: f64,
    pub zeta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    #[serde(default = "one")]
    pub c1: f64,
    #[serde(default = "one")]
    pub c2: f64,
    #[serde(default)]
    pub c3: f64,
    #[serde(default)]
    pub c4: f64,
    #[serde(default = "one")]
    pub f0: f64,
    #[serde(default)]
    pub v1: f64,
    #[serde(default)]
    pub alpha1: f64,
    #[serde(default)]
    pub alpha2: f64,
}

impl Default for Constants {
    fn default() -> Self {
        let d = SeriesCoefficients::default();
        Constants {
            c1: d.c1,
            c2: d.c2,
            c3: d.c3,
            c4: d.c4,
            f0: d.f0,
            v1: d.v1,
            alpha1: d.alpha1,
            alpha2: d.alpha2,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionSpec {
    pub regime: RegimeName,
    pub order: u32,
    #[serde(default)]
    pub constants: Constants,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gas: GasName,
    pub n: f64,
    pub sigma0: f64,
    #[serde(rename = "R", default = "one")]
    pub gas_constant: f64,
    pub intensity: f64,
    pub calibration: CalibrationSpec,
    pub grid: Option<GridSpec>,
    pub viscosity: Option<ViscositySpec>,
    #[serde(default = "default_branch")]
    pub branch: BranchName,
    pub expansion: Option<ExpansionSpec>,
}

fn one() -> f64 {
    1.0
}

fn default_branch() -> BranchName {
    BranchName::Higher
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Failure> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Failure::config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Failure> {
        if !(self.n > 0.0) || !self.n.is_finite() {
            return Err(Failure::config("n must be positive"));
        }
        if !self.sigma0.is_finite() {
            return Err(Failure::config("sigma0 must be finite"));
        }
        if !(self.gas_constant > 0.0) || !self.gas_constant.is_finite() {
            return Err(Failure::config("R must be positive"));
        }
        if !(self.intensity > 0.0) || !self.intensity.is_finite() {
            return Err(Failure::config("intensity must be positive"));
        }
        self.calibration()?;
        if let Some(g) = &self.grid {
            if g.points < 2 {
                return Err(Failure::config("grid.points must be at least 2"));
            }
            if !(g.r_start > 0.0) || !(g.r_end > g.r_start) || !g.r_end.is_finite() {
                return Err(Failure::config("grid needs 0 < r_start < r_end"));
            }
        }
        if let Some(v) = &self.viscosity {
            if !(v.eta >= 0.0) || !(v.zeta >= 0.0) || !(v.eta + v.zeta > 0.0) {
                return Err(Failure::config("viscosities must be non-negative and not both zero"));
            }
        }
        Ok(())
    }

    /// The calibration variant; exactly one must be given.
    pub fn calibration(&self) -> Result<Calibration, Failure> {
        let c = &self.calibration;
        match (c.c0, c.rho_inf, c.r_ref, c.rho_ref) {
            (Some(c0), None, None, None) => Ok(Calibration::C0(c0)),
            (None, Some(rho), None, None) => Ok(Calibration::RhoInf(rho)),
            (None, None, Some(r), Some(rho)) => Ok(Calibration::Reference { r, rho }),
            _ => Err(Failure::config(
                "calibration needs exactly one of {c0}, {rho_inf} or {r_ref, rho_ref}",
            )),
        }
    }

    pub fn model(&self) -> Result<IsentropeModel, Failure> {
        let m = match self.gas {
            GasName::Ideal => IsentropeModel::ideal(self.n, self.gas_constant, self.sigma0),
            GasName::Vdw => IsentropeModel::vdw(self.n, self.sigma0),
        };
        m.map_err(Failure::from_core)
    }

    pub fn flow(&self) -> Result<FlowConfig, Failure> {
        FlowConfig::new(self.model()?, self.intensity, self.calibration()?).map_err(Failure::from_core)
    }

    pub fn grid(&self) -> Result<&GridSpec, Failure> {
        self.grid.as_ref().ok_or_else(|| Failure::config("this command needs a grid"))
    }

    pub fn radii(&self) -> Result<Vec<f64>, Failure> {
        let g = self.grid()?;
        let n = g.points;
        let t = |i: usize| i as f64 / (n - 1) as f64;
        let mut out: Vec<f64> = match g.spacing {
            Spacing::Linear => (0..n).map(|i| g.r_start + (g.r_end - g.r_start) * t(i)).collect(),
            Spacing::Log => {
                let (a, b) = (g.r_start.ln(), g.r_end.ln());
                (0..n).map(|i| (a + (b - a) * t(i)).exp()).collect()
            }
        };
        // the end points are taken verbatim, not from the rounded formula
        out[0] = g.r_start;
        out[n - 1] = g.r_end;
        Ok(out)
    }

    pub fn viscosity(&self) -> Result<&ViscositySpec, Failure> {
        self.viscosity.as_ref().ok_or_else(|| Failure::config("this command needs a viscosity block"))
    }

    pub fn expansion(&self) -> Result<&ExpansionSpec, Failure> {
        self.expansion.as_ref().ok_or_else(|| Failure::config("this command needs an expansion block"))
    }

    pub fn coefficients(&self) -> Result<SeriesCoefficients, Failure> {
        let c = &self.expansion()?.constants;
        Ok(SeriesCoefficients {
            c1: c.c1,
            c2: c.c2,
            c3: c.c3,
            c4: c.c4,
            f0: c.f0,
            v1: c.v1,
            alpha1: c.alpha1,
            alpha2: c.alpha2,
        })
    }
}

impl RegimeName {
    pub fn singular(self) -> Option<Regime> {
        match self {
            RegimeName::Small => Some(Regime::SmallI),
            RegimeName::Large => Some(Regime::LargeI),
            RegimeName::Regular => None,
        }
    }
}
