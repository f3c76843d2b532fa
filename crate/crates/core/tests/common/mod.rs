//! Reference computations used by the integration tests.
//!
//! Everything here is written from the state equations alone and shares no
//! code with the library: `f` comes from `f = v p + ∫_v^∞ p`, roots from
//! dense sign scans plus plain bisection, derivatives from Richardson
//! extrapolated central differences.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srcflow_core::{GasKind, IsentropeModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

pub fn pole(m: &IsentropeModel) -> f64 {
    match m.kind {
        GasKind::Ideal => 0.0,
        GasKind::VdwReduced => 1.0 / 3.0,
    }
}

pub fn pressure(m: &IsentropeModel, v: f64) -> f64 {
    let a = 2.0 / m.n;
    match m.kind {
        GasKind::Ideal => m.gas_constant * m.c / v.powf(1.0 + a),
        GasKind::VdwReduced => 8.0 * m.c / (3.0 * v - 1.0).powf(1.0 + a) - 3.0 / (v * v),
    }
}

pub fn pressure_slope(m: &IsentropeModel, v: f64) -> f64 {
    let a = 2.0 / m.n;
    match m.kind {
        GasKind::Ideal => -(1.0 + a) * m.gas_constant * m.c / v.powf(2.0 + a),
        GasKind::VdwReduced => -24.0 * (1.0 + a) * m.c / (3.0 * v - 1.0).powf(2.0 + a) + 6.0 / (v * v * v),
    }
}

/// `f(v) = v p(v) + ∫_v^∞ p(w) dw`, so that `f′ = v p′` and `f → 0` at infinity.
pub fn f(m: &IsentropeModel, v: f64) -> f64 {
    let a = 2.0 / m.n;
    let tail = match m.kind {
        GasKind::Ideal => m.gas_constant * m.c / (a * v.powf(a)),
        GasKind::VdwReduced => 8.0 * m.c / (3.0 * a * (3.0 * v - 1.0).powf(a)) - 3.0 / v,
    };
    v * pressure(m, v) + tail
}

pub fn f_slope(m: &IsentropeModel, v: f64) -> f64 {
    v * pressure_slope(m, v)
}

pub fn temperature(m: &IsentropeModel, v: f64) -> f64 {
    let a = 2.0 / m.n;
    match m.kind {
        GasKind::Ideal => m.c / v.powf(a),
        GasKind::VdwReduced => m.c / (3.0 * v - 1.0).powf(a),
    }
}

/// `F(r, v) = v²/(2r⁴) + f(v)/I² − C₀`.
pub fn euler_residual(m: &IsentropeModel, intensity: f64, c0: f64, r: f64, v: f64) -> f64 {
    v * v / (2.0 * r.powi(4)) + f(m, v) / (intensity * intensity) - c0
}

pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Plain bisection; `g(a)` and `g(b)` must differ in sign.
pub fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    assert!(ga * g(b) <= 0.0, "bisect: no sign change on [{a}, {b}]");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Every sign change of `g` on the grid `xs`, refined by bisection.
pub fn roots_on_grid(g: impl Fn(f64) -> f64, xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut prev = g(xs[0]);
    for w in xs.windows(2) {
        let next = g(w[1]);
        if prev == 0.0 {
            out.push(w[0]);
        } else if prev * next < 0.0 {
            out.push(bisect(&g, w[0], w[1]));
        }
        prev = next;
    }
    out
}

/// All roots of `F(r, ·)` found by a sign scan over `points` values of
/// `v − pole`, logarithmically spaced in `[1e-9, v_max]`.
pub fn brute_force_roots(m: &IsentropeModel, intensity: f64, c0: f64, r: f64, points: usize, v_max: f64) -> Vec<f64> {
    let p = pole(m);
    let grid: Vec<f64> = geomspace(1e-9, v_max, points).into_iter().map(|w| p + w).collect();
    roots_on_grid(|v| euler_residual(m, intensity, c0, r, v), &grid)
}

fn golden(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let k = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - k * (b - a);
    let mut x2 = a + k * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if g1 < g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - k * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + k * (b - a);
            g2 = g(x2);
        }
        if b - a <= 1e-15 * (a.abs() + b.abs()) {
            break;
        }
    }
    g1.min(g2)
}

/// Global minimum over `v` of `F(r, v)`: dense log scan, then golden-section
/// refinement of every discrete local minimum.
pub fn min_residual(m: &IsentropeModel, intensity: f64, c0: f64, r: f64) -> f64 {
    let p = pole(m);
    let grid: Vec<f64> = geomspace(1e-9, 1e9, 20_000).into_iter().map(|w| p + w).collect();
    let g = |v: f64| euler_residual(m, intensity, c0, r, v);
    let vals: Vec<f64> = grid.iter().map(|&v| g(v)).collect();
    let mut best = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    for i in 1..grid.len() - 1 {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] {
            best = best.min(golden(g, grid[i - 1], grid[i + 1]));
        }
    }
    best
}

/// Smallest radius at which `F(r, ·)` has a root, by bisection on `r` of the
/// predicate `min_v F(r, v) ≤ 0`. `None` if no radius up to `1e6` works.
pub fn existence_radius_by_bisection(m: &IsentropeModel, intensity: f64, c0: f64) -> Option<f64> {
    let ok = |r: f64| min_residual(m, intensity, c0, r) <= 0.0;
    let mut hi = 1.0;
    while !ok(hi) {
        hi *= 2.0;
        if hi > 1e6 {
            return None;
        }
    }
    let mut lo = hi;
    while ok(lo) {
        lo *= 0.5;
        if lo < 1e-12 {
            return Some(0.0);
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// First derivative by Richardson-extrapolated central differences.
pub fn diff1(g: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (g(x + h) - g(x - h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Second derivative by Richardson-extrapolated central differences.
pub fn diff2(g: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let gx = g(x);
    let d = |h: f64| (g(x + h) - 2.0 * gx + g(x - h)) / (h * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Sign changes of `f′` (computed by differencing `f`) on `points` log
/// spaced values of `v − pole` up to `v_max`.
pub fn slope_sign_changes(m: &IsentropeModel, points: usize, v_max: f64) -> usize {
    let p = pole(m);
    let mut count = 0;
    let mut prev = 0.0f64;
    for w in geomspace(1e-6, v_max, points) {
        let v = p + w;
        let s = diff1(|x| f(m, x), v, 1e-4 * w);
        if prev != 0.0 && s != 0.0 && s.signum() != prev.signum() {
            count += 1;
        }
        if s != 0.0 {
            prev = s;
        }
    }
    count
}

/// Phase by the sign of the isothermal slope `∂p/∂v|_T` at the state's own
/// temperature: non-negative means intermediate; otherwise liquid below the
/// critical volume and gas above it. Supercritical states are gas.
pub fn phase_by_isotherm(m: &IsentropeModel, v: f64) -> f64 {
    let t = temperature(m, v);
    if t >= 1.0 {
        return 0.0;
    }
    let slope = -24.0 * t / (3.0 * v - 1.0).powi(2) + 6.0 / (v * v * v);
    if slope >= 0.0 {
        0.5
    } else if v < 1.0 {
        1.0
    } else {
        0.0
    }
}
