//! Thin wrappers over `libm` so the rest of the crate reads like ordinary
//! float code in a `no_std` build.

pub use core::f64::consts::PI;

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

/// `n` points spaced geometrically from `lo` to `hi` (both included).
pub fn geomspace(lo: f64, hi: f64, n: usize) -> alloc::vec::Vec<f64> {
    debug_assert!(lo > 0.0 && hi > lo && n >= 2);
    let a = ln(lo);
    let b = ln(hi);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                exp(a + (b - a) * i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let lx: alloc::vec::Vec<f64> = xs.iter().map(|&x| ln(x)).collect();
    let ly: alloc::vec::Vec<f64> = ys.iter().map(|&y| ln(y.abs())).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Solves a tridiagonal system by Gaussian elimination with partial pivoting.
///
/// `dl[i] = A[i+1][i]`, `d[i] = A[i][i]`, `du[i] = A[i][i+1]`. The right-hand
/// side `b` is overwritten by the solution. Returns `false` on a zero pivot.
pub fn solve_tridiagonal(dl: &mut [f64], d: &mut [f64], du: &mut [f64], b: &mut [f64]) -> bool {
    let n = d.len();
    if n == 0 {
        return true;
    }
    // second superdiagonal created by row interchanges is stored in dl
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                return false;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if d[n - 1] == 0.0 {
        return false;
    }
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
    }
    true
}
