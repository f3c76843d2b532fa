//! The viscous radial equation
//!
//! ```text
//! −(v/r³)(r v″ − 2v′) μ + d/dr (v²/(2r⁴) + f(v)/I²) = 0,   μ = (ζ + 4η/3)/I
//! ```
//!
//! on `[r_a, r_b]` with Dirichlet data taken from the Euler branches. For
//! small `μ` the solution follows one branch, then jumps to the other across
//! a thin layer. The problem is discretised with second-order central
//! differences on a possibly non-uniform mesh and solved by damped Newton
//! iteration, continuing in `μ` when a direct solve fails.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::euler::{Branch, DensityProfile, ExistenceRadius, FlowConfig};
use crate::math::{solve_tridiagonal, tanh};

/// Number of `μ` halvings allowed in one continuation.
pub const MAX_CONTINUATION_STAGES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ViscousConfig {
    pub flow: FlowConfig,
    pub eta: f64,
    pub zeta: f64,
    pub r_a: f64,
    pub r_b: f64,
    pub v_a: f64,
    pub v_b: f64,
    /// Euler branch the left boundary value belongs to.
    pub branch_a: Branch,
    /// Euler branch the right boundary value belongs to.
    pub branch_b: Branch,
    /// Number of mesh intervals.
    pub intervals: usize,
    /// Residual target, multiplied by `max(1, |C₀|)`.
    pub tolerance: f64,
    pub max_newton: usize,
    /// Run one equidistributing re-mesh pass after the first solve.
    pub remesh: bool,
}

/// Converged mesh solution and solver statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpSolution {
    pub profile: DensityProfile,
    pub mu: f64,
    /// Max-norm of the discrete residual over interior nodes.
    pub residual_norm: f64,
    /// Newton iterations summed over all continuation stages.
    pub newton_iters: usize,
    pub continuation_stages: usize,
}

impl BvpSolution {
    pub fn mesh(&self) -> Vec<f64> {
        self.profile.radii()
    }

    pub fn values(&self) -> Vec<f64> {
        self.profile.volumes()
    }
}

/// The JSON-facing summary of one viscous run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSummary {
    pub mu: f64,
    pub r_step: f64,
    pub step_width: f64,
    pub residual_norm: f64,
    pub newton_iters: usize,
}

fn branch_root(flow: &FlowConfig, r: f64, branch: Branch) -> Result<f64> {
    let roots = flow.solve_branches(r);
    let v = match branch {
        Branch::Lower => roots.last(),
        Branch::Higher => roots.first(),
    };
    v.copied().ok_or(Error::NoSolution { r })
}

impl ViscousConfig {
    /// Lower-branch data at `r_a`, higher-branch data at `r_b`.
    pub fn new(
        flow: FlowConfig,
        eta: f64,
        zeta: f64,
        r_a: f64,
        r_b: f64,
        intervals: usize,
    ) -> Result<Self> {
        if !(eta >= 0.0) || !(zeta >= 0.0) {
            return Err(Error::Domain { what: "viscosities must be non-negative", value: eta.min(zeta) });
        }
        if !(r_a > 0.0) || !(r_b > r_a) {
            return Err(Error::Domain { what: "need 0 < r_a < r_b", value: r_a });
        }
        if intervals < 4 {
            return Err(Error::Domain { what: "mesh needs at least 4 intervals", value: intervals as f64 });
        }
        match flow.existence_radius() {
            ExistenceRadius::Finite(r_min) if r_a <= r_min => {
                return Err(Error::NoSolution { r: r_a });
            }
            ExistenceRadius::Never => return Err(Error::NoSolution { r: r_a }),
            _ => {}
        }
        let mut cfg = ViscousConfig {
            flow,
            eta,
            zeta,
            r_a,
            r_b,
            v_a: 0.0,
            v_b: 0.0,
            branch_a: Branch::Lower,
            branch_b: Branch::Higher,
            intervals,
            tolerance: 1e-8,
            max_newton: 100,
            remesh: false,
        };
        cfg = cfg.with_branches(Branch::Lower, Branch::Higher)?;
        Ok(cfg)
    }

    /// Takes the boundary values from the given Euler branches.
    pub fn with_branches(mut self, branch_a: Branch, branch_b: Branch) -> Result<Self> {
        self.v_a = branch_root(&self.flow, self.r_a, branch_a)?;
        self.v_b = branch_root(&self.flow, self.r_b, branch_b)?;
        self.branch_a = branch_a;
        self.branch_b = branch_b;
        Ok(self)
    }

    /// Overrides the boundary values (the branch labels are kept for the
    /// initial guess and the step width).
    pub fn with_boundary_values(mut self, v_a: f64, v_b: f64) -> Result<Self> {
        self.flow.model.check(v_a)?;
        self.flow.model.check(v_b)?;
        self.v_a = v_a;
        self.v_b = v_b;
        Ok(self)
    }

    /// Sets `μ` directly (as a bulk viscosity `ζ = μI`, `η = 0`).
    pub fn with_mu(mut self, mu: f64) -> Self {
        self.eta = 0.0;
        self.zeta = mu * self.flow.intensity;
        self
    }

    pub fn with_intervals(mut self, intervals: usize) -> Self {
        self.intervals = intervals;
        self
    }

    /// `k = ζ + 4η/3`.
    pub fn k(&self) -> f64 {
        self.zeta + 4.0 * self.eta / 3.0
    }

    /// `μ = k / I`.
    pub fn mu(&self) -> f64 {
        self.k() / self.flow.intensity
    }

    fn residual_scale(&self) -> f64 {
        self.flow.c0.abs().max(1.0)
    }

    /// Residual and its partial derivatives with respect to `v`, `v′`, `v″`.
    fn residual_parts(&self, mu: f64, r: f64, v: f64, dv: f64, d2v: f64) -> Result<[f64; 4]> {
        let i2 = self.flow.intensity * self.flow.intensity;
        let m = &self.flow.model;
        let fp = m.f_prime(v)?;
        let fpp = m.f_second(v)?;
        let r3 = r * r * r;
        let r4 = r3 * r;
        let r5 = r4 * r;
        let res = -(v / r3) * (r * d2v - 2.0 * dv) * mu + (v * dv / r4 - 2.0 * v * v / r5) + fp * dv / i2;
        let d_v = -(r * d2v - 2.0 * dv) * mu / r3 + dv / r4 - 4.0 * v / r5 + fpp * dv / i2;
        let d_dv = 2.0 * mu * v / r3 + v / r4 + fp / i2;
        let d_d2v = -mu * v / (r * r);
        Ok([res, d_v, d_dv, d_d2v])
    }
}

/// `−(v/r³)(r v″ − 2v′)μ + (v v′/r⁴ − 2v²/r⁵) + f′(v) v′/I²`.
pub fn ns_residual(cfg: &ViscousConfig, r: f64, v: f64, dv: f64, d2v: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain { what: "radius must be positive", value: r });
    }
    Ok(cfg.residual_parts(cfg.mu(), r, v, dv, d2v)?[0])
}

pub fn uniform_mesh(a: f64, b: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|i| if i == intervals { b } else { a + (b - a) * i as f64 / intervals as f64 })
        .collect()
}

/// Weights of the three-point first and second derivatives at an interior
/// node with left spacing `hl` and right spacing `hr`.
fn stencil(hl: f64, hr: f64) -> ([f64; 3], [f64; 3]) {
    let s = hl + hr;
    let d1 = [-hr / (hl * s), (hr - hl) / (hl * hr), hl / (hr * s)];
    let d2 = [2.0 / (hl * s), -2.0 / (hl * hr), 2.0 / (hr * s)];
    (d1, d2)
}

/// Discrete residual at every interior node.
pub fn discrete_residual(cfg: &ViscousConfig, mu: f64, mesh: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let n = mesh.len();
    let mut out = Vec::with_capacity(n.saturating_sub(2));
    for i in 1..n - 1 {
        let (d1, d2) = stencil(mesh[i] - mesh[i - 1], mesh[i + 1] - mesh[i]);
        let dv = d1[0] * v[i - 1] + d1[1] * v[i] + d1[2] * v[i + 1];
        let d2v = d2[0] * v[i - 1] + d2[1] * v[i] + d2[2] * v[i + 1];
        out.push(cfg.residual_parts(mu, mesh[i], v[i], dv, d2v)?[0]);
    }
    Ok(out)
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn norm2(xs: &[f64]) -> f64 {
    crate::math::sqrt(xs.iter().map(|x| x * x).sum())
}

/// Size of the discrete residual that rounding alone can produce: a small
/// multiple of machine epsilon times the sum of the magnitudes of its terms.
fn rounding_floor(cfg: &ViscousConfig, mu: f64, mesh: &[f64], v: &[f64]) -> Result<f64> {
    let i2 = cfg.flow.intensity * cfg.flow.intensity;
    let mut worst: f64 = 0.0;
    for i in 1..mesh.len() - 1 {
        let (d1, d2) = stencil(mesh[i] - mesh[i - 1], mesh[i + 1] - mesh[i]);
        let s1: f64 = (0..3).map(|j| (d1[j] * v[i - 1 + j]).abs()).sum();
        let s2: f64 = (0..3).map(|j| (d2[j] * v[i - 1 + j]).abs()).sum();
        let (r, vi) = (mesh[i], v[i].abs());
        let r4 = r * r * r * r;
        let viscous = mu * vi / (r * r * r) * (r * s2 + 2.0 * s1);
        let kinetic = vi * s1 / r4 + 2.0 * vi * vi / (r4 * r);
        let thermal = cfg.flow.model.f_prime(v[i])?.abs() * s1 / i2;
        worst = worst.max(viscous + kinetic + thermal);
    }
    Ok(16.0 * f64::EPSILON * worst)
}

/// Largest max-norm residual the solver accepts for `v` on `mesh`:
/// `tolerance·max(1, |C₀|)`, or the rounding floor where that is larger.
pub fn acceptance_level(cfg: &ViscousConfig, mu: f64, mesh: &[f64], v: &[f64]) -> Result<f64> {
    Ok((cfg.tolerance * cfg.residual_scale()).max(rounding_floor(cfg, mu, mesh, v)?))
}

struct NewtonOutcome {
    iterations: usize,
    residual: f64,
}

/// Damped Newton on the interior values; `v` is updated in place.
fn newton(cfg: &ViscousConfig, mu: f64, mesh: &[f64], v: &mut [f64]) -> Result<NewtonOutcome> {
    let n = mesh.len();
    let m = n - 2;
    let floor = cfg.flow.model.v_floor();
    let target = 1e-2 * cfg.tolerance * cfg.residual_scale();
    let accept = cfg.tolerance * cfg.residual_scale();
    let mut res = discrete_residual(cfg, mu, mesh, v)?;
    let mut iterations = 0;
    loop {
        let rn = max_abs(&res);
        if rn <= target {
            return Ok(NewtonOutcome { iterations, residual: rn });
        }
        if iterations >= cfg.max_newton {
            return Err(Error::NonConvergence { residual: rn, iterations, last: v.to_vec() });
        }
        iterations += 1;
        let mut dl = vec![0.0; m.saturating_sub(1)];
        let mut d = vec![0.0; m];
        let mut du = vec![0.0; m.saturating_sub(1)];
        let mut rhs = vec![0.0; m];
        for i in 1..n - 1 {
            let (d1, d2) = stencil(mesh[i] - mesh[i - 1], mesh[i + 1] - mesh[i]);
            let dv = d1[0] * v[i - 1] + d1[1] * v[i] + d1[2] * v[i + 1];
            let d2v = d2[0] * v[i - 1] + d2[1] * v[i] + d2[2] * v[i + 1];
            let [r, pv, pd1, pd2] = cfg.residual_parts(mu, mesh[i], v[i], dv, d2v)?;
            let k = i - 1;
            rhs[k] = -r;
            d[k] = pv + pd1 * d1[1] + pd2 * d2[1];
            if k > 0 {
                dl[k - 1] = pd1 * d1[0] + pd2 * d2[0];
            }
            if k + 1 < m {
                du[k] = pd1 * d1[2] + pd2 * d2[2];
            }
        }
        if !solve_tridiagonal(&mut dl, &mut d, &mut du, &mut rhs) {
            return Err(Error::Singular { what: "newton jacobian" });
        }
        let step = max_abs(&rhs);
        let scale = max_abs(v);
        let accept = accept.max(rounding_floor(cfg, mu, mesh, v)?);
        let base = norm2(&res);
        let mut lambda = 1.0;
        let mut trial = v.to_vec();
        let mut accepted = None;
        for _ in 0..40 {
            let mut inside = true;
            for k in 0..m {
                trial[k + 1] = v[k + 1] + lambda * rhs[k];
                if !(trial[k + 1] > floor) {
                    inside = false;
                }
            }
            if inside {
                if let Ok(r_new) = discrete_residual(cfg, mu, mesh, &trial) {
                    let nn = norm2(&r_new);
                    if nn.is_finite() && nn <= (1.0 - 1e-4 * lambda) * base {
                        accepted = Some(r_new);
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some(r_new) => {
                v.copy_from_slice(&trial);
                res = r_new;
            }
            None => {
                // at the rounding floor no step can decrease the residual
                if rn <= accept && step <= 1e-10 * scale {
                    return Ok(NewtonOutcome { iterations, residual: rn });
                }
                return Err(Error::NonConvergence { residual: rn, iterations, last: v.to_vec() });
            }
        }
        let rn_new = max_abs(&res);
        if lambda == 1.0 && step <= 1e-12 * scale && rn_new <= accept {
            return Ok(NewtonOutcome { iterations, residual: rn_new });
        }
    }
}

/// Euler branch values at every mesh node.
pub fn euler_branch_values(flow: &FlowConfig, mesh: &[f64], branch: Branch) -> Result<Vec<f64>> {
    Ok(flow.density_profile(mesh, branch)?.volumes())
}

/// Momentum-flux mismatch between the two branch states,
/// `(v_a − v_b)/r⁴ + (p(v_a) − p(v_b))/I²`. Its sign tells on which side a
/// layer joining the branches can sit.
fn layer_condition(flow: &FlowConfig, r: f64, va: f64, vb: f64) -> Result<f64> {
    let i2 = flow.intensity * flow.intensity;
    let m = &flow.model;
    Ok((va - vb) / (r * r * r * r) + (m.pressure(va)? - m.pressure(vb)?) / i2)
}

/// Smooth blend of the two branches through a tanh front of width `width`.
fn initial_guess(
    cfg: &ViscousConfig,
    mesh: &[f64],
    left: &[f64],
    right: &[f64],
    width: f64,
) -> Result<Vec<f64>> {
    let n = mesh.len();
    let mut centre = None;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..n {
        let g = layer_condition(&cfg.flow, mesh[i], left[i], right[i])?;
        if let Some((r0, g0)) = prev {
            if g0.signum() != g.signum() {
                centre = Some(r0 - g0 * (mesh[i] - r0) / (g - g0));
                break;
            }
        }
        prev = Some((mesh[i], g));
    }
    let g_a = layer_condition(&cfg.flow, mesh[0], left[0], right[0])?;
    let centre = centre.unwrap_or(if g_a < 0.0 {
        (mesh[0] + 3.0 * width).min(0.5 * (mesh[0] + mesh[n - 1]))
    } else {
        (mesh[n - 1] - 3.0 * width).max(0.5 * (mesh[0] + mesh[n - 1]))
    });
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let s = 0.5 * (1.0 + tanh((mesh[i] - centre) / width));
            (1.0 - s) * left[i] + s * right[i]
        })
        .collect();
    v[0] = cfg.v_a;
    v[n - 1] = cfg.v_b;
    Ok(v)
}

/// Mesh equidistributing `√(1 + (L v′/Δv)²)` for the given solution, with
/// `L` the interval length and `Δv` the range of `v`.
pub fn equidistributed_mesh(mesh: &[f64], v: &[f64]) -> Vec<f64> {
    let n = mesh.len();
    let length = mesh[n - 1] - mesh[0];
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let range = (hi - lo).max(f64::MIN_POSITIVE);
    let mut cum = vec![0.0; n];
    for i in 1..n {
        let h = mesh[i] - mesh[i - 1];
        let slope = (v[i] - v[i - 1]) / h * length / range;
        cum[i] = cum[i - 1] + h * crate::math::sqrt(1.0 + slope * slope);
    }
    let total = cum[n - 1];
    let mut out = Vec::with_capacity(n);
    let mut j = 0;
    for k in 0..n {
        if k == n - 1 {
            out.push(mesh[n - 1]);
            break;
        }
        let target = total * k as f64 / (n - 1) as f64;
        while j + 1 < n - 1 && cum[j + 1] < target {
            j += 1;
        }
        let t = if cum[j + 1] > cum[j] { (target - cum[j]) / (cum[j + 1] - cum[j]) } else { 0.0 };
        out.push(mesh[j] + t * (mesh[j + 1] - mesh[j]));
    }
    out
}

fn interpolate(mesh: &[f64], v: &[f64], at: &[f64]) -> Vec<f64> {
    let mut j = 0;
    at.iter()
        .map(|&r| {
            while j + 2 < mesh.len() && mesh[j + 1] < r {
                j += 1;
            }
            let t = (r - mesh[j]) / (mesh[j + 1] - mesh[j]);
            v[j] + t * (v[j + 1] - v[j])
        })
        .collect()
}

/// Solves on a uniform mesh of `cfg.intervals` intervals.
pub fn solve_bvp(cfg: &ViscousConfig) -> Result<BvpSolution> {
    let mesh = uniform_mesh(cfg.r_a, cfg.r_b, cfg.intervals);
    solve_bvp_on_mesh(cfg, &mesh)
}

/// Solves on a caller-supplied mesh (first and last nodes must be `r_a`, `r_b`).
pub fn solve_bvp_on_mesh(cfg: &ViscousConfig, mesh: &[f64]) -> Result<BvpSolution> {
    check_mesh(cfg, mesh)?;
    let left = euler_branch_values(&cfg.flow, mesh, cfg.branch_a)?;
    let right = euler_branch_values(&cfg.flow, mesh, cfg.branch_b)?;
    let h_max = mesh.windows(2).fold(0.0f64, |m, w| m.max(w[1] - w[0]));
    let guess_for = |mu: f64| initial_guess(cfg, mesh, &left, &right, (4.0 * mu).max(4.0 * h_max));
    solve_with(cfg, mesh, &guess_for)
}

/// Solves starting from a caller-supplied mesh function; the boundary
/// entries are replaced by `v_a` and `v_b`.
pub fn solve_bvp_from_guess(cfg: &ViscousConfig, mesh: &[f64], guess: &[f64]) -> Result<BvpSolution> {
    check_mesh(cfg, mesh)?;
    if guess.len() != mesh.len() {
        return Err(Error::Domain { what: "guess length differs from mesh length", value: guess.len() as f64 });
    }
    let guess_for = |_mu: f64| {
        let mut v = guess.to_vec();
        v[0] = cfg.v_a;
        v[guess.len() - 1] = cfg.v_b;
        Ok(v)
    };
    solve_with(cfg, mesh, &guess_for)
}

fn check_mesh(cfg: &ViscousConfig, mesh: &[f64]) -> Result<()> {
    if !(cfg.mu() > 0.0) {
        return Err(Error::Domain { what: "viscous solve needs mu > 0", value: cfg.mu() });
    }
    if mesh.len() < 5 || mesh[0] != cfg.r_a || mesh[mesh.len() - 1] != cfg.r_b {
        return Err(Error::Domain {
            what: "mesh must span [r_a, r_b] with at least 4 intervals",
            value: mesh.len() as f64,
        });
    }
    if !mesh.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::Domain { what: "mesh must be increasing", value: 0.0 });
    }
    Ok(())
}

fn solve_with(
    cfg: &ViscousConfig,
    mesh: &[f64],
    guess_for: &dyn Fn(f64) -> Result<Vec<f64>>,
) -> Result<BvpSolution> {
    let mu = cfg.mu();
    let mut total_iters = 0;
    let mut v = guess_for(mu)?;
    let mut stages = 0;
    let mut outcome = newton(cfg, mu, mesh, &mut v);
    if let Err(Error::NonConvergence { iterations, .. }) = &outcome {
        total_iters += *iterations;
    }
    if outcome.is_err() {
        // find a viscosity large enough for a direct solve, then halve back
        let mut start = None;
        for m in 1..=MAX_CONTINUATION_STAGES {
            let mu_m = mu * (1u64 << m) as f64;
            let mut trial = guess_for(mu_m)?;
            match newton(cfg, mu_m, mesh, &mut trial) {
                Ok(o) => {
                    total_iters += o.iterations;
                    start = Some((m, trial));
                    break;
                }
                Err(Error::NonConvergence { iterations, .. }) => total_iters += iterations,
                Err(e) => return Err(e),
            }
        }
        let (m, mut current) = match start {
            Some(s) => s,
            None => return outcome.map(|_| unreachable!()),
        };
        stages = m;
        let mut last = None;
        for j in (0..m).rev() {
            let mu_j = mu * (1u64 << j) as f64;
            let o = newton(cfg, mu_j, mesh, &mut current)?;
            total_iters += o.iterations;
            last = Some(o);
        }
        v = current;
        outcome = Ok(last.expect("at least one stage"));
    }
    let mut outcome = outcome?;
    total_iters += outcome.iterations;
    let mut mesh_out = mesh.to_vec();
    if cfg.remesh {
        let graded = equidistributed_mesh(mesh, &v);
        let mut w = interpolate(mesh, &v, &graded);
        w[0] = cfg.v_a;
        let last = w.len() - 1;
        w[last] = cfg.v_b;
        outcome = newton(cfg, mu, &graded, &mut w)?;
        total_iters += outcome.iterations;
        v = w;
        mesh_out = graded;
    }
    let mut profile = DensityProfile::from_samples(
        cfg.flow.model,
        cfg.flow.intensity,
        cfg.flow.c0,
        None,
        &mesh_out,
        &v,
    )?;
    profile.r_min = cfg.flow.existence_radius().finite();
    Ok(BvpSolution {
        profile,
        mu,
        residual_norm: outcome.residual,
        newton_iters: total_iters,
        continuation_stages: stages,
    })
}

/// Weighted median of `(value, weight)` pairs: the smallest value at which the
/// cumulative weight reaches half the total.
fn weighted_median(mut pairs: Vec<(f64, f64)>) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let mut acc = 0.0;
    for &(x, w) in &pairs {
        acc += w;
        if acc >= 0.5 * total {
            return x;
        }
    }
    pairs[pairs.len() - 1].0
}

/// Radius of steepest ascent or descent of `v`.
///
/// The discrete slopes `|Δv/Δr|` live at interval midpoints; the maximum is
/// refined by the vertex of the parabola through it and its two neighbours.
/// Fails with `NoStep` when the maximum sits on the first or last interval
/// (the profile is steepest at a boundary, as on a single Euler branch) or
/// is below three times the background slope. The background slope is the
/// larger of the length-weighted median slopes over the first and last
/// tenth of the radial span, so graded meshes do not bias it.
pub fn step_location(profile: &DensityProfile) -> Result<f64> {
    let rs = profile.radii();
    let vs = profile.volumes();
    let n = rs.len();
    if n < 3 {
        return Err(Error::NoStep { max_slope: 0.0, background_slope: 0.0 });
    }
    let mids: Vec<f64> = rs.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let slopes: Vec<f64> = (0..n - 1).map(|i| ((vs[i + 1] - vs[i]) / (rs[i + 1] - rs[i])).abs()).collect();
    let (k, &max_slope) = slopes
        .iter()
        .enumerate()
        .fold((0, &slopes[0]), |best, (i, s)| if *s > *best.1 { (i, s) } else { best });
    let span = rs[n - 1] - rs[0];
    let region = |keep: &dyn Fn(f64) -> bool| -> Vec<(f64, f64)> {
        (0..n - 1).filter(|&i| keep(mids[i])).map(|i| (slopes[i], rs[i + 1] - rs[i])).collect()
    };
    let head = region(&|m| m <= rs[0] + 0.1 * span);
    let tail = region(&|m| m >= rs[n - 1] - 0.1 * span);
    let background = weighted_median(head).max(weighted_median(tail));
    let at_boundary = k == 0 || k + 1 == slopes.len();
    if at_boundary || !(max_slope >= 3.0 * background) || max_slope == 0.0 {
        return Err(Error::NoStep { max_slope, background_slope: background });
    }
    let (x0, x1, x2) = (mids[k - 1], mids[k], mids[k + 1]);
    let (y0, y1, y2) = (slopes[k - 1], slopes[k], slopes[k + 1]);
    let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if !(a < 0.0) {
        return Ok(x1);
    }
    Ok((-b / (2.0 * a)).clamp(x0, x2))
}

/// Distance between the radii where the profile crosses 10% and 90% of the
/// jump between the two Euler branch values at `r_step`.
pub fn step_width(cfg: &ViscousConfig, profile: &DensityProfile, r_step: f64) -> Result<f64> {
    let va = branch_root(&cfg.flow, r_step, cfg.branch_a)?;
    let vb = branch_root(&cfg.flow, r_step, cfg.branch_b)?;
    if va == vb {
        return Err(Error::Singular { what: "branches coincide at the step" });
    }
    let rs = profile.radii();
    let vs = profile.volumes();
    let n = rs.len();
    let frac: Vec<f64> = vs.iter().map(|v| (v - va) / (vb - va)).collect();
    let k = (0..n)
        .min_by(|&i, &j| (rs[i] - r_step).abs().partial_cmp(&(rs[j] - r_step).abs()).unwrap())
        .unwrap();
    let crossing = |i: usize, level: f64| {
        let (f0, f1) = (frac[i], frac[i + 1]);
        if f1 == f0 {
            rs[i]
        } else {
            rs[i] + (level - f0) * (rs[i + 1] - rs[i]) / (f1 - f0)
        }
    };
    let r10 = match (0..=k.min(n - 2)).rev().find(|&i| frac[i] <= 0.1) {
        Some(i) => crossing(i, 0.1).clamp(rs[i], rs[i + 1]),
        None => rs[0],
    };
    let r90 = match (k.max(1)..n).find(|&j| frac[j] >= 0.9) {
        Some(j) => crossing(j - 1, 0.9).clamp(rs[j - 1], rs[j]),
        None => rs[n - 1],
    };
    Ok((r90 - r10).abs())
}

/// Step location and width of a solution, packaged with solver statistics.
pub fn summarize(cfg: &ViscousConfig, sol: &BvpSolution) -> Result<StepSummary> {
    let r_step = step_location(&sol.profile)?;
    let step_width = step_width(cfg, &sol.profile, r_step)?;
    Ok(StepSummary {
        mu: sol.mu,
        r_step,
        step_width,
        residual_norm: sol.residual_norm,
        newton_iters: sol.newton_iters,
    })
}

/// Largest distance from the nearer Euler branch over nodes with
/// `|r − r_step| > half_window`.
pub fn off_step_deviation(cfg: &ViscousConfig, sol: &BvpSolution, r_step: f64, half_window: f64) -> Result<f64> {
    let mesh = sol.mesh();
    let vs = sol.values();
    let lower = euler_branch_values(&cfg.flow, &mesh, Branch::Lower)?;
    let higher = euler_branch_values(&cfg.flow, &mesh, Branch::Higher)?;
    let mut worst: f64 = 0.0;
    for i in 0..mesh.len() {
        if (mesh[i] - r_step).abs() <= half_window {
            continue;
        }
        let d = (vs[i] - lower[i]).abs().min((vs[i] - higher[i]).abs());
        worst = worst.max(d);
    }
    Ok(worst)
}
