//! Isentrope closed forms for ideal and reduced van der Waals gases.
//!
//! At a fixed entropy level every thermodynamic quantity becomes a function of
//! the specific volume `v`. With `a = 2/n`:
//!
//! | | ideal | van der Waals (`u = 3v − 1`) |
//! |---|---|---|
//! | `T(v)` | `c v^{-a}` | `c u^{-a}` |
//! | `p(v)` | `R c v^{-(1+a)}` | `8c u^{-(1+a)} − 3/v²` |
//! | `f(v)` | `R c (n/2 + 1) v^{-a}` | `8c/(3u^{1+a}) + 4c(n+2)/(3u^a) − 6/v` |
//!
//! `f` is the antiderivative of `v p′(v)` with no additional constant, which
//! fixes the convention for every calibration constant downstream.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{exp, geomspace, ln, powf};
use crate::roots::bisect;
use crate::thermo::MassieuPotential;

/// Default margin kept away from the van der Waals pole at `v = 1/3`.
pub const DEFAULT_POLE_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GasKind {
    Ideal,
    VdwReduced,
}

/// A gas model restricted to one entropy level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsentropeModel {
    pub kind: GasKind,
    /// Degrees of freedom.
    pub n: f64,
    /// Entropy constant: `exp(2σ₀/n)` (ideal) or `exp(3σ₀/(4n))` (vdW).
    pub c: f64,
    /// Gas constant; fixed to 1 for the reduced vdW model, which carries its
    /// own units.
    pub gas_constant: f64,
    /// Evaluations reject `v ≤ 1/3 + pole_margin` for the vdW model.
    pub pole_margin: f64,
}

/// Result of the monotonicity analysis of `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum Invertibility {
    GloballyInvertible,
    /// Stationary points of `f` (roots of `f′`), ascending.
    NonMonotone(Vec<f64>),
}

fn check_params(n: f64, c: f64) -> Result<()> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain { what: "degrees of freedom must be positive", value: n });
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain { what: "entropy constant c must be positive", value: c });
    }
    Ok(())
}

impl IsentropeModel {
    /// Ideal gas at entropy level `σ₀`, `c = exp(2σ₀/n)`.
    pub fn ideal(n: f64, gas_constant: f64, sigma0: f64) -> Result<Self> {
        Self::ideal_with_c(n, gas_constant, exp(2.0 * sigma0 / n))
    }

    pub fn ideal_with_c(n: f64, gas_constant: f64, c: f64) -> Result<Self> {
        check_params(n, c)?;
        if !(gas_constant > 0.0) {
            return Err(Error::Domain { what: "gas constant must be positive", value: gas_constant });
        }
        Ok(IsentropeModel { kind: GasKind::Ideal, n, c, gas_constant, pole_margin: 0.0 })
    }

    /// Reduced van der Waals gas at entropy level `σ₀`, `c = exp(3σ₀/(4n))`.
    pub fn vdw(n: f64, sigma0: f64) -> Result<Self> {
        Self::vdw_with_c(n, exp(3.0 * sigma0 / (4.0 * n)))
    }

    pub fn vdw_with_c(n: f64, c: f64) -> Result<Self> {
        check_params(n, c)?;
        Ok(IsentropeModel {
            kind: GasKind::VdwReduced,
            n,
            c,
            gas_constant: 1.0,
            pole_margin: DEFAULT_POLE_MARGIN,
        })
    }

    pub fn with_pole_margin(mut self, margin: f64) -> Self {
        self.pole_margin = margin;
        self
    }

    pub fn is_vdw(&self) -> bool {
        self.kind == GasKind::VdwReduced
    }

    /// Entropy level in the convention of the `c` formulas.
    pub fn sigma0(&self) -> f64 {
        match self.kind {
            GasKind::Ideal => 0.5 * self.n * ln(self.c),
            GasKind::VdwReduced => 4.0 * self.n * ln(self.c) / 3.0,
        }
    }

    /// The generating potential of this gas.
    pub fn potential(&self) -> MassieuPotential {
        match self.kind {
            GasKind::Ideal => MassieuPotential::ideal(self.n, self.gas_constant),
            GasKind::VdwReduced => MassieuPotential::vdw_reduced(self.n),
        }
    }

    /// `φ + Tφ_T` along this isentrope, i.e. the level in the potential's own
    /// convention (additive constant 0): `σ₀ + n/2` for the ideal gas and
    /// `3σ₀/8 + n/2` for the van der Waals gas.
    pub fn potential_entropy_level(&self) -> f64 {
        match self.kind {
            GasKind::Ideal => self.sigma0() + 0.5 * self.n,
            GasKind::VdwReduced => 3.0 * self.sigma0() / 8.0 + 0.5 * self.n,
        }
    }

    /// Smallest admissible specific volume (exclusive).
    pub fn v_floor(&self) -> f64 {
        match self.kind {
            GasKind::Ideal => 0.0,
            GasKind::VdwReduced => 1.0 / 3.0 + self.pole_margin,
        }
    }

    /// Location of the singularity of `f` (0 or 1/3).
    pub fn pole(&self) -> f64 {
        match self.kind {
            GasKind::Ideal => 0.0,
            GasKind::VdwReduced => 1.0 / 3.0,
        }
    }

    pub fn check(&self, v: f64) -> Result<()> {
        if v > self.v_floor() && v.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain { what: "specific volume outside model domain", value: v })
        }
    }

    fn a(&self) -> f64 {
        2.0 / self.n
    }

    pub fn temperature(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        Ok(match self.kind {
            GasKind::Ideal => self.c * powf(v, -self.a()),
            GasKind::VdwReduced => self.c * powf(3.0 * v - 1.0, -self.a()),
        })
    }

    pub fn pressure(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        let a = self.a();
        Ok(match self.kind {
            GasKind::Ideal => self.gas_constant * self.c * powf(v, -(1.0 + a)),
            GasKind::VdwReduced => {
                8.0 * self.c * powf(3.0 * v - 1.0, -(1.0 + a)) - 3.0 / (v * v)
            }
        })
    }

    /// `dp/dv` along the isentrope.
    pub fn pressure_derivative(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        let a = self.a();
        Ok(match self.kind {
            GasKind::Ideal => -self.gas_constant * self.c * (1.0 + a) * powf(v, -(2.0 + a)),
            GasKind::VdwReduced => {
                -24.0 * self.c * (1.0 + a) * powf(3.0 * v - 1.0, -(2.0 + a)) + 6.0 / (v * v * v)
            }
        })
    }

    pub fn f(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        let a = self.a();
        let c = self.c;
        Ok(match self.kind {
            GasKind::Ideal => self.gas_constant * c * (0.5 * self.n + 1.0) * powf(v, -a),
            GasKind::VdwReduced => {
                let u = 3.0 * v - 1.0;
                8.0 * c / (3.0 * powf(u, a + 1.0)) + 4.0 * c * (self.n + 2.0) / (3.0 * powf(u, a))
                    - 6.0 / v
            }
        })
    }

    /// `f′(v) = v p′(v)`.
    pub fn f_prime(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        let a = self.a();
        let c = self.c;
        Ok(match self.kind {
            GasKind::Ideal => -self.gas_constant * c * (1.0 + a) * powf(v, -(1.0 + a)),
            GasKind::VdwReduced => {
                let u = 3.0 * v - 1.0;
                -8.0 * c * (1.0 + a) * powf(u, -(2.0 + a))
                    - 4.0 * c * (self.n + 2.0) * a * powf(u, -(1.0 + a))
                    + 6.0 / (v * v)
            }
        })
    }

    pub fn f_second(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        let a = self.a();
        let c = self.c;
        Ok(match self.kind {
            GasKind::Ideal => {
                self.gas_constant * c * (1.0 + a) * (1.0 + a) * powf(v, -(2.0 + a))
            }
            GasKind::VdwReduced => {
                let u = 3.0 * v - 1.0;
                24.0 * c * (1.0 + a) * (2.0 + a) * powf(u, -(3.0 + a))
                    + 12.0 * c * (self.n + 2.0) * a * (1.0 + a) * powf(u, -(2.0 + a))
                    - 12.0 / (v * v * v)
            }
        })
    }

    /// Lower bound of `f` over the whole domain (0 for the ideal gas, `−18`
    /// for the vdW gas, from `f > −6/v` and `v > 1/3`).
    pub fn f_lower_bound(&self) -> f64 {
        match self.kind {
            GasKind::Ideal => 0.0,
            GasKind::VdwReduced => -18.0,
        }
    }

    /// Every solution of `f(v) = level` in the model domain, ascending.
    ///
    /// Uses the same logarithmic scan in `v − pole` as the Euler root finder,
    /// with an upper end large enough to reach the far root when `level`
    /// is small and positive.
    pub fn f_level_roots(&self, level: f64) -> Vec<f64> {
        let pole = self.pole();
        let mut hi: f64 = 1e6;
        if level > 0.0 {
            // f ≳ K v^{-2/n} for large v; the root sits near (K/level)^{n/2}
            let k = match self.kind {
                GasKind::Ideal => self.gas_constant * self.c * (0.5 * self.n + 1.0),
                GasKind::VdwReduced => {
                    4.0 * self.c * (self.n + 2.0) / (3.0 * powf(3.0, 2.0 / self.n))
                }
            };
            hi = hi.max(10.0 * powf(k / level, 0.5 * self.n));
        }
        if !hi.is_finite() {
            return Vec::new();
        }
        let lo = (self.v_floor() - pole).max(1e-9);
        let grid: Vec<f64> = geomspace(lo, hi, 4097).into_iter().map(|w| pole + w).collect();
        crate::roots::scan_roots(
            |v| self.f(v).map(|f| f - level).unwrap_or(f64::NAN),
            &grid,
            0.0,
        )
    }

    /// Threshold of the vdW monotonicity condition
    /// `c > (1+α)^{1+α}(2−α)^{2−α}/(4α)`, `α = 1 + 2/n`; defined for `n > 2`.
    pub fn vdw_critical_c(n: f64) -> Option<f64> {
        let alpha = 1.0 + 2.0 / n;
        if !(alpha < 2.0) {
            return None;
        }
        Some(powf(1.0 + alpha, 1.0 + alpha) * powf(2.0 - alpha, 2.0 - alpha) / (4.0 * alpha))
    }

    /// Monotonicity of `f` over the physical domain.
    pub fn invertibility(&self) -> Invertibility {
        match self.kind {
            GasKind::Ideal => Invertibility::GloballyInvertible,
            GasKind::VdwReduced => {
                if let Some(c_crit) = Self::vdw_critical_c(self.n) {
                    if self.c > c_crit {
                        return Invertibility::GloballyInvertible;
                    }
                }
                let points = self.vdw_stationary_points();
                if points.is_empty() && Self::vdw_critical_c(self.n).is_none() {
                    Invertibility::GloballyInvertible
                } else {
                    Invertibility::NonMonotone(points)
                }
            }
        }
    }

    /// Roots of `f′` for the vdW model: sign changes of
    /// `(3v−1)^{α+1} − 4cαv³` (same sign as `f′`) on a logarithmic grid of
    /// `10⁴` points in `v − 1/3`, refined by bisection.
    fn vdw_stationary_points(&self) -> Vec<f64> {
        let alpha = 1.0 + 2.0 / self.n;
        let c = self.c;
        let g = |v: f64| powf(3.0 * v - 1.0, alpha + 1.0) - 4.0 * c * alpha * v * v * v;
        // the outer stationary point grows like (3^{α+1}/(4cα))^{1/(2−α)}
        let mut v_max: f64 = 1e3;
        if alpha < 2.0 {
            let est = powf(powf(3.0, alpha + 1.0) / (4.0 * c * alpha), 1.0 / (2.0 - alpha));
            v_max = v_max.max(10.0 * est);
        }
        let lo = self.pole_margin.max(1e-12);
        let grid = geomspace(lo, v_max, 10_000);
        let mut out = Vec::new();
        let mut prev_v = 1.0 / 3.0 + grid[0];
        let mut prev_g = g(prev_v);
        for &w in &grid[1..] {
            let v = 1.0 / 3.0 + w;
            let gv = g(v);
            if gv == 0.0 {
                out.push(v);
            } else if prev_g != 0.0 && gv.signum() != prev_g.signum() {
                if let Some(root) = bisect(g, prev_v, v) {
                    out.push(root);
                }
            }
            prev_v = v;
            prev_g = gv;
        }
        out
    }
}
