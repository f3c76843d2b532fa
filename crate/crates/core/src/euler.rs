//! The inviscid source flow.
//!
//! With `v = 1/ρ` the Euler equations integrate to the implicit relation
//!
//! ```text
//! F(r, v) = v²/(2r⁴) + f(v)/I² − C₀ = 0
//! ```
//!
//! and the velocity follows from `U = I v / r³`. For each radius the relation
//! has several roots; the *lower* branch is the lowest-density one (largest
//! `v`, decaying like `1/(√(2C₀) r²)`), and the *higher* branch the densest one
//! (smallest `v`, tending to `ρ₀`).
//!
//! Solving `F = 0` for `r` gives `r⁴ = I² v² / (2(I²C₀ − f(v)))`, so the
//! existence radius is the minimum of that expression over `v`. Its stationary
//! points satisfy `f − v f′/2 = I²C₀` and there `r⁴ = −I² v / f′(v)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gas::{GasKind, IsentropeModel};
use crate::math::{geomspace, powf, sqrt, PI};
use crate::phase::PhaseLabel;
use crate::roots::scan_roots;

/// Number of cells of the logarithmic scan used by the root finders.
pub const SCAN_CELLS: usize = 4096;
/// Offset of the lowest scanned volume above the model's pole.
pub const V_FLOOR_OFFSET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Lowest density (largest `v`); vacuum at infinity.
    Lower,
    /// Highest density (smallest `v`); `ρ → ρ₀` at infinity.
    Higher,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Lower => "lower",
            Branch::Higher => "higher",
        }
    }

    /// Sign of `∂F/∂v` on this branch.
    fn slope_sign(self) -> f64 {
        match self {
            Branch::Lower => 1.0,
            Branch::Higher => -1.0,
        }
    }
}

/// How the constant `C₀` is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Calibration {
    C0(f64),
    /// Density at infinity on the higher branch.
    RhoInf(f64),
    /// A point `(r, ρ)` known to lie on the solution.
    Reference { r: f64, rho: f64 },
}

/// Inviscid problem data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    pub model: IsentropeModel,
    pub intensity: f64,
    pub c0: f64,
    pub rho_inf: Option<f64>,
}

/// Where the inviscid solution starts to exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExistenceRadius {
    /// Roots exist exactly for `r ≥ r_min`.
    Finite(f64),
    /// Roots exist for every `r > 0`.
    Unbounded,
    /// `F = 0` has no root at any finite radius.
    Never,
}

impl ExistenceRadius {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExistenceRadius::Finite(r) => Some(r),
            _ => None,
        }
    }
}

/// One sample of a radial profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRecord {
    pub r: f64,
    pub v: f64,
    pub rho: f64,
    pub t: f64,
    pub p: f64,
    pub u: f64,
    pub phase: Option<PhaseLabel>,
}

/// A sampled solution along one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub branch: Option<Branch>,
    pub model: IsentropeModel,
    pub intensity: f64,
    pub c0: f64,
    pub r_min: Option<f64>,
    pub records: Vec<ProfileRecord>,
}

impl DensityProfile {
    pub fn radii(&self) -> Vec<f64> {
        self.records.iter().map(|p| p.r).collect()
    }

    pub fn volumes(&self) -> Vec<f64> {
        self.records.iter().map(|p| p.v).collect()
    }

    /// Builds records (with `T`, `p`, `U`) from `(r, v)` pairs.
    pub fn from_samples(
        model: IsentropeModel,
        intensity: f64,
        c0: f64,
        branch: Option<Branch>,
        rs: &[f64],
        vs: &[f64],
    ) -> Result<Self> {
        let mut records = Vec::with_capacity(rs.len());
        for (&r, &v) in rs.iter().zip(vs) {
            records.push(ProfileRecord {
                r,
                v,
                rho: 1.0 / v,
                t: model.temperature(v)?,
                p: model.pressure(v)?,
                u: intensity * v / (r * r * r),
                phase: None,
            });
        }
        Ok(DensityProfile { branch, model, intensity, c0, r_min: None, records })
    }
}

/// `C₀ = f(1/ρ₀)/I²`, the value making `ρ → ρ₀` a solution at infinity.
pub fn calibrate(model: &IsentropeModel, intensity: f64, rho_inf: f64) -> Result<f64> {
    check_intensity(intensity)?;
    if !(rho_inf > 0.0) || !rho_inf.is_finite() {
        return Err(Error::Domain {
            what: "density at infinity must be positive (supply C0 directly for the vacuum case)",
            value: rho_inf,
        });
    }
    let v0 = 1.0 / rho_inf;
    model.check(v0)?;
    Ok(model.f(v0)? / (intensity * intensity))
}

/// Closed-form calibrations written directly in terms of `ρ₀`:
/// `C₀ = Rc(n+2)ρ₀^{2/n}/(2I²)` for the ideal gas and, for the vdW gas, the
/// solution of `3C₀ρ₀I²/2 = 2c(3/ρ₀ − 1)^{−(1+2/n)}(3n + 6 − nρ₀) − 9ρ₀²`.
pub fn calibrate_closed_form(model: &IsentropeModel, intensity: f64, rho_inf: f64) -> Result<f64> {
    check_intensity(intensity)?;
    model.check(1.0 / rho_inf)?;
    let (n, c, i2) = (model.n, model.c, intensity * intensity);
    Ok(match model.kind {
        GasKind::Ideal => {
            model.gas_constant * c * (n + 2.0) * powf(rho_inf, 2.0 / n) / (2.0 * i2)
        }
        GasKind::VdwReduced => {
            let rhs = 2.0 * c * powf(3.0 / rho_inf - 1.0, -(1.0 + 2.0 / n))
                * (3.0 * n + 6.0 - n * rho_inf)
                - 9.0 * rho_inf * rho_inf;
            2.0 * rhs / (3.0 * rho_inf * i2)
        }
    })
}

fn check_intensity(intensity: f64) -> Result<()> {
    if intensity > 0.0 && intensity.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "intensity must be positive", value: intensity })
    }
}

impl FlowConfig {
    pub fn new(model: IsentropeModel, intensity: f64, calibration: Calibration) -> Result<Self> {
        check_intensity(intensity)?;
        let (c0, rho_inf) = match calibration {
            Calibration::C0(c0) => {
                if !c0.is_finite() {
                    return Err(Error::Domain { what: "C0 must be finite", value: c0 });
                }
                (c0, None)
            }
            Calibration::RhoInf(rho) => (calibrate(&model, intensity, rho)?, Some(rho)),
            Calibration::Reference { r, rho } => {
                if !(r > 0.0) {
                    return Err(Error::Domain { what: "reference radius must be positive", value: r });
                }
                if !(rho > 0.0) {
                    return Err(Error::Domain { what: "reference density must be positive", value: rho });
                }
                let v = 1.0 / rho;
                let c0 = v * v / (2.0 * r * r * r * r) + model.f(v)? / (intensity * intensity);
                (c0, None)
            }
        };
        Ok(FlowConfig { model, intensity, c0, rho_inf })
    }

    fn i2(&self) -> f64 {
        self.intensity * self.intensity
    }

    /// Acceptance bound for `|F|` on emitted records.
    pub fn residual_tolerance(&self) -> f64 {
        1e-9 * self.c0.abs().max(1.0)
    }

    /// `F(r, v) = v²/(2r⁴) + f(v)/I² − C₀`.
    pub fn residual(&self, r: f64, v: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain { what: "radius must be positive", value: r });
        }
        let r4 = r * r * r * r;
        Ok(v * v / (2.0 * r4) + self.model.f(v)? / self.i2() - self.c0)
    }

    /// `∂F/∂v = v/r⁴ + f′(v)/I²`.
    pub fn residual_dv(&self, r: f64, v: f64) -> Result<f64> {
        let r4 = r * r * r * r;
        Ok(v / r4 + self.model.f_prime(v)? / self.i2())
    }

    fn v_window(&self, r: f64) -> (f64, f64) {
        let pole = self.model.pole();
        let bound = -self.model.f_lower_bound();
        let reach = self.c0 + bound / self.i2();
        let mut hi: f64 = 1e6;
        if reach > 0.0 {
            hi = hi.max(1.01 * r * r * sqrt(2.0 * reach));
        }
        (pole + V_FLOOR_OFFSET, pole + hi)
    }

    fn scan_grid(&self, r: f64) -> Vec<f64> {
        let pole = self.model.pole();
        let (lo, hi) = self.v_window(r);
        geomspace(lo - pole, hi - pole, SCAN_CELLS + 1)
            .into_iter()
            .map(|w| pole + w)
            .collect()
    }

    /// All roots of `F(r, ·)` in the model domain, ascending.
    pub fn solve_branches(&self, r: f64) -> Vec<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Vec::new();
        }
        let grid = self.scan_grid(r);
        scan_roots(|v| self.residual(r, v).unwrap_or(f64::NAN), &grid, 0.0)
    }

    /// Closed form for the ideal gas, numerical fold solve otherwise.
    pub fn existence_radius(&self) -> ExistenceRadius {
        match self.model.kind {
            GasKind::Ideal => self.existence_radius_ideal(),
            GasKind::VdwReduced => self.existence_radius_fold(),
        }
    }

    /// `ρ* = (2I²nC₀/(Rc(n+1)(n+2)))^{n/2}`,
    /// `r_min = (2ρ*²(C₀ − R I⁻² c (n/2+1) ρ*^{2/n}))^{−1/4}`.
    fn existence_radius_ideal(&self) -> ExistenceRadius {
        let m = &self.model;
        let (n, rc, c0) = (m.n, m.gas_constant * m.c, self.c0);
        if !(c0 > 0.0) {
            return ExistenceRadius::Never;
        }
        let rho_star = powf(2.0 * self.i2() * n * c0 / (rc * (n + 1.0) * (n + 2.0)), 0.5 * n);
        let arg = 2.0
            * rho_star
            * rho_star
            * (c0 - rc / self.i2() * (0.5 * n + 1.0) * powf(rho_star, 2.0 / n));
        if !(arg > 0.0) {
            return ExistenceRadius::Never;
        }
        ExistenceRadius::Finite(powf(arg, -0.25))
    }

    /// Minimum over `v` of `r(v)`, found among the roots of
    /// `h(v) = f − v f′/2 − I²C₀` where `f′ < 0`. Works for every model.
    pub fn existence_radius_fold(&self) -> ExistenceRadius {
        let m = &self.model;
        let level = self.i2() * self.c0;
        let h = |v: f64| -> f64 {
            match (m.f(v), m.f_prime(v)) {
                (Ok(f), Ok(fp)) => f - 0.5 * v * fp - level,
                _ => f64::NAN,
            }
        };
        let pole = m.pole();
        let mut hi: f64 = 1e6;
        if level > 0.0 {
            // for large v the stationary point approaches the far root of f = level
            if let Some(&v_far) = m.f_level_roots(level).last() {
                hi = hi.max(10.0 * v_far);
            }
        }
        let grid: Vec<f64> = geomspace(V_FLOOR_OFFSET, hi, SCAN_CELLS + 1)
            .into_iter()
            .map(|w| pole + w)
            .collect();
        let mut best: Option<f64> = None;
        for v in scan_roots(h, &grid, 0.0) {
            let fp = match m.f_prime(v) {
                Ok(fp) if fp < 0.0 => fp,
                _ => continue,
            };
            let r = powf(-self.i2() * v / fp, 0.25);
            if r.is_finite() && best.is_none_or(|b| r < b) {
                best = Some(r);
            }
        }
        match best {
            Some(r) => ExistenceRadius::Finite(r),
            None => {
                // r(v) has no interior minimum: either no admissible v at
                // all, or r(v) → 0 somewhere
                let any_admissible = grid.iter().any(|&v| m.f(v).is_ok_and(|f| f < level));
                if any_admissible {
                    ExistenceRadius::Unbounded
                } else {
                    ExistenceRadius::Never
                }
            }
        }
    }

    /// `U = I v / r³`.
    pub fn velocity(&self, r: f64, v: f64) -> f64 {
        self.intensity * v / (r * r * r)
    }

    /// `J = 4π r³ U / v`, which is `4πI` for every `(r, v)`.
    pub fn mass_flux(&self, r: f64, v: f64) -> f64 {
        4.0 * PI * r * r * r * self.velocity(r, v) / v
    }

    /// Volume at infinity on the higher branch: `1/ρ₀` if given, otherwise
    /// the unique solution of `f(v) = I²C₀`.
    pub fn far_field_volume(&self) -> Result<f64> {
        if let Some(rho) = self.rho_inf {
            return Ok(1.0 / rho);
        }
        let level = self.i2() * self.c0;
        if let GasKind::Ideal = self.model.kind {
            let m = &self.model;
            let k = m.gas_constant * m.c * (0.5 * m.n + 1.0);
            if !(level > 0.0) {
                return Err(Error::Regime { what: "no finite density at infinity for C0 <= 0" });
            }
            return Ok(powf(level / k, -0.5 * m.n));
        }
        let roots = self.model.f_level_roots(level);
        match roots.len() {
            0 => Err(Error::Regime { what: "no finite density at infinity for this C0" }),
            1 => Ok(roots[0]),
            _ => Err(Error::NotInvertible { roots }),
        }
    }

    /// `β₁ = I²/(2 f′(v₀))`, the coefficient of `r⁻⁴` in the higher-branch
    /// expansion `ρ = ρ₀ + β₁/r⁴ + …`.
    pub fn beta1(&self) -> Result<f64> {
        let v0 = self.far_field_volume()?;
        let fp = self.model.f_prime(v0)?;
        if fp == 0.0 {
            return Err(Error::Singular { what: "f'(v0) = 0 in the far-field expansion" });
        }
        Ok(self.i2() / (2.0 * fp))
    }

    /// Far-field density: `1/(√(2C₀) r²)` on the lower branch, `ρ₀` (order
    /// 0) or `ρ₀ + β₁/r⁴` (order 1) on the higher branch.
    pub fn asymptotic_density(&self, branch: Branch, r: f64, order: u32) -> Result<f64> {
        match branch {
            Branch::Lower => {
                if !(self.c0 > 0.0) {
                    return Err(Error::Regime { what: "vacuum branch needs C0 > 0" });
                }
                Ok(1.0 / (sqrt(2.0 * self.c0) * r * r))
            }
            Branch::Higher => {
                let rho0 = 1.0 / self.far_field_volume()?;
                if order == 0 {
                    Ok(rho0)
                } else {
                    Ok(rho0 + self.beta1()? / (r * r * r * r))
                }
            }
        }
    }

    /// Continues one branch over an increasing grid.
    ///
    /// The first point picks the largest (`Lower`) or smallest (`Higher`)
    /// root. Each later point is first tried with Newton from the previous
    /// value. If that fails, or lands on a root with the wrong sign of
    /// `∂F/∂v`, the full root set is scanned and the nearest root with the
    /// right sign is taken, halving the radial step whenever the relative
    /// change in `v` exceeds 25%. A branch that ends at a fold yields
    /// `BranchLost`.
    pub fn density_profile(&self, grid: &[f64], branch: Branch) -> Result<DensityProfile> {
        if grid.is_empty() {
            return Err(Error::Domain { what: "empty radial grid", value: 0.0 });
        }
        for w in grid.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain { what: "radial grid must be increasing", value: w[1] });
            }
        }
        let r_min = self.existence_radius().finite();
        let first = self.solve_branches(grid[0]);
        let v_first = match branch {
            Branch::Lower => first.last(),
            Branch::Higher => first.first(),
        };
        let mut v = *v_first.ok_or(Error::NoSolution { r: grid[0] })?;
        let mut vs = Vec::with_capacity(grid.len());
        vs.push(v);
        let tol = 1e-3 * self.residual_tolerance();
        for w in grid.windows(2) {
            let local = self.newton_root(w[1], v).filter(|&v1| {
                (v1 - v).abs() <= 0.25 * v
                    && self.residual(w[1], v1).is_ok_and(|f| f.abs() <= tol)
                    && self.residual_dv(w[1], v1).is_ok_and(|d| d * branch.slope_sign() > 0.0)
            });
            v = match local {
                Some(v1) => v1,
                None => self.advance(branch, w[0], v, w[1], 0)?,
            };
            vs.push(v);
        }
        let mut profile =
            DensityProfile::from_samples(self.model, self.intensity, self.c0, Some(branch), grid, &vs)?;
        profile.r_min = r_min;
        Ok(profile)
    }

    fn advance(&self, branch: Branch, r0: f64, v0: f64, r1: f64, depth: u32) -> Result<f64> {
        let sign = branch.slope_sign();
        let mut best: Option<f64> = None;
        for root in self.solve_branches(r1) {
            let slope = self.residual_dv(r1, root).unwrap_or(0.0);
            // a root at a fold has zero slope and belongs to both branches
            let tiny = 1e-6 * (root / (r1 * r1 * r1 * r1)).abs().max(1e-300);
            if slope * sign < -tiny {
                continue;
            }
            if best.is_none_or(|b| (root - v0).abs() < (b - v0).abs()) {
                best = Some(root);
            }
        }
        if let Some(v1) = best {
            if (v1 - v0).abs() <= 0.25 * v0 {
                return Ok(v1);
            }
        }
        if depth >= 48 {
            return Err(Error::BranchLost { r: r0, v: v0 });
        }
        let mid = 0.5 * (r0 + r1);
        let vm = self.advance(branch, r0, v0, mid, depth + 1)?;
        self.advance(branch, mid, vm, r1, depth + 1)
    }

    /// Newton iteration on `F(r, ·)` from `guess`, kept inside the domain.
    /// Returns `None` when it does not settle within 60 steps.
    pub fn newton_root(&self, r: f64, guess: f64) -> Option<f64> {
        let floor = self.model.pole() + V_FLOOR_OFFSET;
        let mut v = guess;
        for _ in 0..60 {
            let f = self.residual(r, v).ok()?;
            let d = self.residual_dv(r, v).ok()?;
            if d == 0.0 || !d.is_finite() {
                return None;
            }
            let mut next = v - f / d;
            if !(next > floor) {
                next = 0.5 * (v + floor);
            }
            if (next - v).abs() <= 4.0 * f64::EPSILON * v.abs() {
                return Some(next);
            }
            v = next;
        }
        None
    }
}
