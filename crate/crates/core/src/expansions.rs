//! Series solutions of the viscous equation in the source intensity `I`.
//!
//! **Singular series.** With `r = I^α x`, `v = I^β w` the viscous equation
//! becomes
//!
//! ```text
//! (w/x³)(x w″ − 2w′) = k⁻¹ d/dx ( I^{1−α} w²/(2x⁴) + I^{3α−2β−1} f(I^β w) )
//! ```
//!
//! and an exponent pair making the right-hand side small yields
//! `w = w₀ + ε w₁ + …` with `ε = I^{1−α}` and `w₀ = C₁x³ + C₂`.
//!
//! **Regular series.** For small `I`, `v = v₀ + I v₁ + I² v₂ + I³ v₃ + …` with
//! `f(v₀) = f₀`, constant `v₁`, and
//!
//! ```text
//! v₂ = −v₀²/(2f′(v₀) r⁴) + α₁
//! v₃ = 2v₀/(r⁴ f′(v₀)²) · (k v₀²/r³ + (v₁/4)(v₀ f″(v₀) − 2f′(v₀))) + α₂
//! ```
//!
//! where `f` is the antiderivative of `v p′(v)` used throughout the crate and
//! `k = ζ + 4η/3`. The constants `C₁…C₄`, `f₀`, `v₁`, `α₁`, `α₂` are inputs.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gas::{GasKind, Invertibility, IsentropeModel};
use crate::math::{loglog_slope, powf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    SmallI,
    LargeI,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::SmallI => "small",
            Regime::LargeI => "large",
        }
    }
}

/// Exponents of the scaling `r = I^α x`, `v = I^β w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingChoice {
    pub regime: Regime,
    pub alpha: f64,
    pub beta: f64,
    /// Growth exponent `A` of the bound `|f(v)| ≤ C v^A`.
    pub growth: f64,
}

impl ScalingChoice {
    /// `3α − 2β − 1 + Aβ` and `1 − α`: both positive for small `I`, both
    /// negative for large `I`.
    pub fn inequalities(&self) -> (f64, f64) {
        (3.0 * self.alpha - 2.0 * self.beta - 1.0 + self.growth * self.beta, 1.0 - self.alpha)
    }

    pub fn is_feasible(&self) -> bool {
        let (a, b) = self.inequalities();
        match self.regime {
            Regime::SmallI => a > 0.0 && b > 0.0,
            Regime::LargeI => a < 0.0 && b < 0.0,
        }
    }

    /// `ε = I^{1−α}`.
    pub fn epsilon(&self, intensity: f64) -> f64 {
        powf(intensity, 1.0 - self.alpha)
    }

    /// Inverse of [`epsilon`](Self::epsilon).
    pub fn intensity(&self, epsilon: f64) -> f64 {
        powf(epsilon, 1.0 / (1.0 - self.alpha))
    }
}

/// Integration constants of both series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub f0: f64,
    pub v1: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl Default for SeriesCoefficients {
    fn default() -> Self {
        SeriesCoefficients { c1: 1.0, c2: 1.0, c3: 0.0, c4: 0.0, f0: 1.0, v1: 0.0, alpha1: 0.0, alpha2: 0.0 }
    }
}

/// Outcome of a residual-order fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderReport {
    pub regime: &'static str,
    pub alpha: f64,
    pub beta: f64,
    pub fitted_order: f64,
    pub expected_order: f64,
    pub pass: bool,
}

/// Accepted fraction of the theoretical order.
pub const ORDER_SLACK: f64 = 0.9;

pub fn scaling_exponents(model: &IsentropeModel, regime: Regime) -> Result<ScalingChoice> {
    let n = model.n;
    let growth = -2.0 / n;
    let choice = match (model.kind, regime) {
        (GasKind::Ideal, _) => {
            let alpha = if regime == Regime::SmallI { 0.5 } else { 2.0 };
            ScalingChoice { regime, alpha, beta: n * (2.0 * alpha - 1.0) / (n + 1.0), growth }
        }
        (GasKind::VdwReduced, Regime::LargeI) => {
            if n != 3.0 {
                return Err(Error::Unsupported { what: "large-intensity vdw scaling is given for n = 3 only" });
            }
            ScalingChoice { regime, alpha: 2.0, beta: 6.0, growth }
        }
        (GasKind::VdwReduced, Regime::SmallI) => smallest_feasible(regime, growth)?,
    };
    if !choice.is_feasible() {
        return Err(Error::Unsupported { what: "scaling exponents violate the regime inequalities" });
    }
    Ok(choice)
}

/// Lexicographically smallest `(α, β)` on the grid `α ∈ [0, 1)`, `β ∈ [0, 4]`
/// with step 1/4 that satisfies the small-intensity inequalities.
fn smallest_feasible(regime: Regime, growth: f64) -> Result<ScalingChoice> {
    for i in 0..4 {
        for j in 0..=16 {
            let c = ScalingChoice { regime, alpha: 0.25 * i as f64, beta: 0.25 * j as f64, growth };
            if c.is_feasible() {
                return Ok(c);
            }
        }
    }
    Err(Error::Unsupported { what: "no feasible small-intensity exponents in the search box" })
}

/// `w` and its first two derivatives.
type Jet = (f64, f64, f64);

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "x must be positive", value: x })
    }
}

/// `C₃x³/3 − C₁x²/(2k) + C₄ − C₂/(2kx)`, the part of `w₁` shared by both gases.
fn polynomial_part(x: f64, c: &SeriesCoefficients, k: f64) -> Jet {
    let p = c.c3 * x * x * x / 3.0 - c.c1 * x * x / (2.0 * k) + c.c4 - c.c2 / (2.0 * k * x);
    let dp = c.c3 * x * x - c.c1 * x / k + c.c2 / (2.0 * k * x * x);
    let d2p = 2.0 * c.c3 * x - c.c1 / k - c.c2 / (k * x * x * x);
    (p, dp, d2p)
}

fn w0_jet(x: f64, c: &SeriesCoefficients) -> Jet {
    (c.c1 * x * x * x + c.c2, 3.0 * c.c1 * x * x, 6.0 * c.c1 * x)
}

fn ideal_jet(x: f64, c: &SeriesCoefficients, eps: f64, model: &IsentropeModel, k: f64) -> Result<Jet> {
    check_x(x)?;
    if c.c1 == 0.0 {
        return Err(Error::Singular { what: "C1 = 0 in the first-order ideal-gas term" });
    }
    if k == 0.0 {
        return Err(Error::Singular { what: "k = 0 in the first-order term" });
    }
    let n = model.n;
    let rc = model.gas_constant * model.c;
    let (w0, d1w0, d2w0) = w0_jet(x, c);
    if !(w0 > 0.0) {
        return Err(Error::Domain { what: "C1 x^3 + C2 must be positive", value: w0 });
    }
    let a = -2.0 / n;
    let coef = -rc * n / (6.0 * c.c1 * k);
    let g = powf(w0, a);
    let dg = a * powf(w0, a - 1.0) * d1w0;
    let d2g = a * (a - 1.0) * powf(w0, a - 2.0) * d1w0 * d1w0 + a * powf(w0, a - 1.0) * d2w0;
    let (p, dp, d2p) = polynomial_part(x, c, k);
    Ok((
        w0 + eps * (coef * g + p),
        d1w0 + eps * (coef * dg + dp),
        d2w0 + eps * (coef * d2g + d2p),
    ))
}

fn vdw3_jet(x: f64, c: &SeriesCoefficients, eps: f64, k: f64) -> Result<Jet> {
    check_x(x)?;
    if k == 0.0 {
        return Err(Error::Singular { what: "k = 0 in the first-order term" });
    }
    let (w0, d1w0, d2w0) = w0_jet(x, c);
    let (p, dp, d2p) = polynomial_part(x, c, k);
    Ok((w0 + eps * p, d1w0 + eps * dp, d2w0 + eps * d2p))
}

/// `w₀ + ε w₁` for the ideal gas, with
/// `w₁ = −Rcn/(6C₁k)(C₁x³+C₂)^{−2/n} + (2x⁴C₃k − 3C₁x³ + 6kxC₄ − 3C₂)/(6xk)`.
pub fn singular_series_ideal(
    x: f64,
    coeffs: &SeriesCoefficients,
    eps: f64,
    model: &IsentropeModel,
    k: f64,
) -> Result<f64> {
    if model.kind != GasKind::Ideal {
        return Err(Error::ModelKind { what: "ideal-gas series requested for a vdw model" });
    }
    Ok(ideal_jet(x, coeffs, eps, model, k)?.0)
}

/// `w₀ + ε w₁` for the monatomic vdW gas at large intensity, with
/// `w₁ = (2x⁴C₃k − 3C₁x³ + 6C₄kx − 3C₂)/(6xk)`.
pub fn singular_series_vdw3(x: f64, coeffs: &SeriesCoefficients, eps: f64, k: f64) -> Result<f64> {
    Ok(vdw3_jet(x, coeffs, eps, k)?.0)
}

/// Residual of the scaled equation at `x` for a given jet of `w`.
pub fn scaled_residual(
    model: &IsentropeModel,
    choice: &ScalingChoice,
    intensity: f64,
    k: f64,
    x: f64,
    jet: Jet,
) -> Result<f64> {
    let (w, dw, d2w) = jet;
    let (alpha, beta) = (choice.alpha, choice.beta);
    let lhs = w / (x * x * x) * (x * d2w - 2.0 * dw);
    let kinetic = powf(intensity, 1.0 - alpha) * (w * dw / powf(x, 4.0) - 2.0 * w * w / powf(x, 5.0));
    let v = powf(intensity, beta) * w;
    let thermal = powf(intensity, 3.0 * alpha - beta - 1.0) * model.f_prime(v)? * dw;
    Ok(lhs - (kinetic + thermal) / k)
}

/// Fits the order in `ε` of the max scaled residual of the first-order
/// singular series over `xs`. The expected order is 2.
pub fn singular_residual_order(
    model: &IsentropeModel,
    regime: Regime,
    coeffs: &SeriesCoefficients,
    k: f64,
    epsilons: &[f64],
    xs: &[f64],
) -> Result<OrderReport> {
    let choice = scaling_exponents(model, regime)?;
    let mut norms = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let intensity = choice.intensity(eps);
        let mut worst: f64 = 0.0;
        for &x in xs {
            let jet = match model.kind {
                GasKind::Ideal => ideal_jet(x, coeffs, eps, model, k)?,
                GasKind::VdwReduced => vdw3_jet(x, coeffs, eps, k)?,
            };
            worst = worst.max(scaled_residual(model, &choice, intensity, k, x, jet)?.abs());
        }
        norms.push(worst);
    }
    let fitted = loglog_slope(epsilons, &norms);
    Ok(OrderReport {
        regime: regime.name(),
        alpha: choice.alpha,
        beta: choice.beta,
        fitted_order: fitted,
        expected_order: 2.0,
        pass: fitted >= ORDER_SLACK * 2.0,
    })
}

/// Solves `f(v₀) = f₀`.
///
/// The ideal gas uses `v₀ = (2f₀/(Rc(n+2)))^{−n/2}`. For the vdW gas a
/// non-monotone `f` yields `NotInvertible` with every root listed.
pub fn invert_f(model: &IsentropeModel, f0: f64) -> Result<f64> {
    match model.kind {
        GasKind::Ideal => {
            if !(f0 > 0.0) || !f0.is_finite() {
                return Err(Error::Range { what: "ideal-gas f takes only positive values", value: f0 });
            }
            let rc = model.gas_constant * model.c;
            Ok(powf(2.0 * f0 / (rc * (model.n + 2.0)), -0.5 * model.n))
        }
        GasKind::VdwReduced => {
            let roots = model.f_level_roots(f0);
            if roots.is_empty() {
                return Err(Error::Range { what: "f0 outside the range of f", value: f0 });
            }
            match model.invertibility() {
                Invertibility::GloballyInvertible => Ok(roots[0]),
                Invertibility::NonMonotone(_) => Err(Error::NotInvertible { roots }),
            }
        }
    }
}

/// The regular series truncated after the `I^order` term (`order ≤ 3`).
pub fn regular_series(
    model: &IsentropeModel,
    coeffs: &SeriesCoefficients,
    k: f64,
    intensity: f64,
    r: f64,
    order: u32,
) -> Result<f64> {
    if order > 3 {
        return Err(Error::Unsupported { what: "regular series is available up to third order" });
    }
    if !(r > 0.0) {
        return Err(Error::Domain { what: "radius must be positive", value: r });
    }
    let v0 = invert_f(model, coeffs.f0)?;
    let terms = regular_terms(model, coeffs, k, v0, r)?;
    let mut v = 0.0;
    let mut power = 1.0;
    for term in terms.iter().take(order as usize + 1) {
        v += power * term;
        power *= intensity;
    }
    Ok(v)
}

/// `[v₀, v₁, v₂(r), v₃(r)]`.
pub fn regular_terms(model: &IsentropeModel, c: &SeriesCoefficients, k: f64, v0: f64, r: f64) -> Result<[f64; 4]> {
    let fp = model.f_prime(v0)?;
    if fp == 0.0 {
        return Err(Error::Singular { what: "f'(v0) = 0 in the regular series" });
    }
    let fpp = model.f_second(v0)?;
    let r4 = r * r * r * r;
    let v2 = -v0 * v0 / (2.0 * fp * r4) + c.alpha1;
    let v3 = 2.0 * v0 / (r4 * fp * fp) * (k * v0 * v0 / (r * r * r) + 0.25 * c.v1 * (v0 * fpp - 2.0 * fp))
        + c.alpha2;
    Ok([v0, c.v1, v2, v3])
}

/// Fits the order in `I` of `max_r |I²v²/(2r⁴) + f(v) − f₀|` for the
/// second-order regular series, i.e. the Euler residual `F` scaled by `I²`
/// with `C₀ = f₀/I²`. With `v₁ = α₁ = 0` the expected order is 4.
pub fn regular_euler_order(
    model: &IsentropeModel,
    coeffs: &SeriesCoefficients,
    k: f64,
    intensities: &[f64],
    radii: &[f64],
) -> Result<OrderReport> {
    let mut norms = Vec::with_capacity(intensities.len());
    for &i in intensities {
        let mut worst: f64 = 0.0;
        for &r in radii {
            let v = regular_series(model, coeffs, k, i, r, 2)?;
            let scaled = i * i * v * v / (2.0 * r * r * r * r) + model.f(v)? - coeffs.f0;
            worst = worst.max(scaled.abs());
        }
        norms.push(worst);
    }
    let fitted = loglog_slope(intensities, &norms);
    Ok(OrderReport {
        regime: "regular",
        alpha: 0.0,
        beta: 0.0,
        fitted_order: fitted,
        expected_order: 4.0,
        pass: fitted >= 2.5,
    })
}
