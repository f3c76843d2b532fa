//! Scalar root finding: Brent's bracketing method, grid scans for sign
//! changes and a golden-section search used to split tangential brackets.

use alloc::vec::Vec;

/// Brent's method on a bracket `[a, b]` with `f(a)·f(b) ≤ 0`.
///
/// Stops when `|f| ≤ ftol` or when the bracket has shrunk to a few ulps.
/// Returns `None` if the endpoints do not bracket a root.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, ftol: f64) -> Option<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    if fa.abs() < fb.abs() {
        core::mem::swap(&mut a, &mut b);
        core::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..300 {
        if fb.abs() <= ftol {
            return Some(b);
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + f64::MIN_POSITIVE;
        if (b - a).abs() <= tol {
            break;
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let between = if lo < b { s > lo && s < b } else { s > b && s < lo };
        let bisect = !between
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= (c - d).abs() / 2.0)
            || (mflag && (b - c).abs() < tol)
            || (!mflag && (c - d).abs() < tol)
            || !s.is_finite();
        if bisect {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fs == 0.0 {
            return Some(s);
        }
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            core::mem::swap(&mut a, &mut b);
            core::mem::swap(&mut fa, &mut fb);
        }
    }
    Some(b)
}

/// Plain bisection down to adjacent floats; used where robustness matters
/// more than speed (oracles, spinodal roots near the pole).
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..2000 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Golden-section search for the minimiser of a unimodal `f` on `[a, b]`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    const G: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - G * (b - a);
    let mut x2 = a + G * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - G * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + G * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// All roots of `f` on the sampled points `xs` (increasing).
///
/// Sign changes between consecutive samples are polished with Brent. Local
/// extrema of the samples that do not change sign are searched with a
/// golden-section step, and split into two brackets when the extremum
/// crosses zero, so pairs of close roots inside one cell are not lost.
pub fn scan_roots<F: FnMut(f64) -> f64>(mut f: F, xs: &[f64], ftol: f64) -> Vec<f64> {
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    let mut exact: Vec<f64> = Vec::new();
    for k in 0..xs.len() {
        if ys[k] == 0.0 {
            exact.push(xs[k]);
            continue;
        }
        if k + 1 < xs.len() && ys[k + 1] != 0.0 && ys[k].signum() != ys[k + 1].signum() {
            brackets.push((xs[k], xs[k + 1]));
        }
        if k > 0 && k + 1 < xs.len() {
            let (l, m, r) = (ys[k - 1], ys[k], ys[k + 1]);
            if l.signum() != m.signum() || r.signum() != m.signum() {
                continue;
            }
            let is_min = m > 0.0 && m <= l && m <= r;
            let is_max = m < 0.0 && m >= l && m >= r;
            if !(is_min || is_max) {
                continue;
            }
            let sgn = if is_min { 1.0 } else { -1.0 };
            let (xm, gm) = golden_min(|x| sgn * f(x), xs[k - 1], xs[k + 1]);
            if gm < 0.0 {
                brackets.push((xs[k - 1], xm));
                brackets.push((xm, xs[k + 1]));
            } else if gm == 0.0 {
                exact.push(xm);
            }
        }
    }
    let mut out: Vec<f64> = brackets
        .into_iter()
        .filter_map(|(a, b)| brent(&mut f, a, b, ftol))
        .chain(exact)
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * f64::EPSILON * b.abs());
    out
}
