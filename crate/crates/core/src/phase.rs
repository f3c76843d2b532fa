//! Phase labels along van der Waals flows.
//!
//! A state on a sub-critical isotherm is called *intermediate* when it lies
//! between the two spinodal volumes, where `∂p/∂v|_T ≥ 0` and the homogeneous
//! medium is unstable. Denser states are liquid, lighter ones gas, and every
//! state with `T ≥ 1` counts as gas. Maxwell coexistence is not used.
//!
//! The spinodal condition `−24T/(3v−1)² + 6/v³ = 0` reads `q(v) = 4T` with
//! `q(v) = (3v−1)²/v³`. `q` rises from 0 at `v = 1/3` to its maximum 4 at
//! `v = 1` and then decays like `9/v`, so for `T < 1` there is exactly one
//! root on each side of `v = 1`.

use crate::error::{Error, Result};
use crate::euler::{DensityProfile, FlowConfig};
use crate::gas::IsentropeModel;
use crate::roots::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PhaseLabel {
    Gas,
    Intermediate,
    Liquid,
}

impl PhaseLabel {
    /// Numeric encoding used in plots and CSV files: 0, 0.5 or 1.
    pub fn value(self) -> f64 {
        match self {
            PhaseLabel::Gas => 0.0,
            PhaseLabel::Intermediate => 0.5,
            PhaseLabel::Liquid => 1.0,
        }
    }

    pub fn from_value(y: f64) -> Option<Self> {
        if y == 0.0 {
            Some(PhaseLabel::Gas)
        } else if y == 0.5 {
            Some(PhaseLabel::Intermediate)
        } else if y == 1.0 {
            Some(PhaseLabel::Liquid)
        } else {
            None
        }
    }
}

fn spinodal_gap(t: f64, v: f64) -> f64 {
    let u = 3.0 * v - 1.0;
    4.0 * t * v * v * v - u * u
}

/// The two spinodal volumes of the reduced isotherm `T`, or `None` for `T ≥ 1`.
pub fn spinodal(t: f64) -> Option<(f64, f64)> {
    if !(t > 0.0) || t >= 1.0 {
        return None;
    }
    let g = |v: f64| spinodal_gap(t, v);
    // g(1/3) > 0, g(1) = 4T − 4 < 0, and g → +∞ as v → ∞
    let left = bisect(g, 1.0 / 3.0, 1.0)?;
    let mut hi = 2.0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
    }
    let right = bisect(g, 1.0, hi)?;
    Some((left, right))
}

/// Phase of the state with volume `v` on the isentrope of `model`.
pub fn classify(model: &IsentropeModel, v: f64) -> Result<PhaseLabel> {
    if !model.is_vdw() {
        return Err(Error::ModelKind { what: "phases defined only for vdw" });
    }
    let t = model.temperature(v)?;
    Ok(match spinodal(t) {
        None => PhaseLabel::Gas,
        Some((vl, _)) if v < vl => PhaseLabel::Liquid,
        Some((_, vr)) if v > vr => PhaseLabel::Gas,
        Some(_) => PhaseLabel::Intermediate,
    })
}

/// Attaches a phase label to every record of `profile`.
pub fn phase_profile(cfg: &FlowConfig, profile: &DensityProfile) -> Result<DensityProfile> {
    let mut out = profile.clone();
    for rec in &mut out.records {
        rec.phase = Some(classify(&cfg.model, rec.v)?);
    }
    Ok(out)
}

/// Collapses a label sequence into its runs, e.g. `[0.5, 0.5, 1]` → `[0.5, 1]`.
pub fn label_runs(profile: &DensityProfile) -> alloc::vec::Vec<PhaseLabel> {
    let mut runs = alloc::vec::Vec::new();
    for rec in &profile.records {
        if let Some(label) = rec.phase {
            if runs.last() != Some(&label) {
                runs.push(label);
            }
        }
    }
    runs
}
