//! Subcommand implementations. Every command is a pure function of the
//! configuration and options, so repeated runs produce identical bytes.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use srcflow_core::euler::{calibrate, calibrate_closed_form};
use srcflow_core::expansions::{
    regular_euler_order, regular_series, scaling_exponents, singular_residual_order, singular_series_ideal,
    singular_series_vdw3, OrderReport,
};
use srcflow_core::phase::{classify, label_runs, phase_profile};
use srcflow_core::viscous::{
    acceptance_level, discrete_residual, solve_bvp, solve_bvp_on_mesh, summarize, BvpSolution,
};
use srcflow_core::{
    Branch, Calibration, DensityProfile, Error, ExistenceRadius, FlowConfig, GasKind, ViscousConfig,
};

use crate::config::{BranchName, RegimeName, RunConfig, Spacing};
use crate::table::{self, fmt_f64, Row};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    EulerProfile,
    NsProfile,
    Phases,
    Calibrate,
    Expand,
    Validate,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub out: PathBuf,
    pub branch: Option<BranchName>,
    pub mu_sweep: Option<Vec<f64>>,
    pub input: Option<PathBuf>,
}

/// Intensities and `ε` values of the order fits.
const REGULAR_FIT_INTENSITIES: [f64; 4] = [4e-2, 2e-2, 1e-2, 5e-3];
const SINGULAR_FIT_EPSILONS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

pub fn run(cmd: Command, cfg: &RunConfig, opts: &Options, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Calibrate => calibrate_cmd(cfg, out),
        Command::EulerProfile => euler_profile(cfg, opts, out),
        Command::Phases => phases(cfg, opts, out),
        Command::NsProfile => ns_profile(cfg, opts, out),
        Command::Expand => expand(cfg, opts, out),
        Command::Validate => match &opts.input {
            Some(path) => validate_input(cfg, opts, path, out),
            None => validate_config(cfg, out),
        },
    }
}

fn say(out: &mut dyn Write, line: &str) -> Result<(), Failure> {
    writeln!(out, "{line}").map_err(|e| Failure::config(format!("cannot write output: {e}")))
}

fn emit(opts: &Options, name: &str, bytes: &[u8], out: &mut dyn Write) -> Result<(), Failure> {
    let path = table::write_file(&opts.out, name, bytes).map_err(Failure::io)?;
    say(out, &path.display().to_string())
}

fn csv_bytes(profile: &DensityProfile) -> Result<Vec<u8>, Failure> {
    table::profile_csv(profile).map_err(Failure::io)
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    table::to_json(value).map_err(Failure::io)
}

fn calibrate_cmd(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let flow = cfg.flow()?;
    say(out, &fmt_f64(flow.c0))
}

fn branch_of(cfg: &RunConfig, opts: &Options) -> Branch {
    opts.branch.unwrap_or(cfg.branch).into()
}

fn euler_profile(cfg: &RunConfig, opts: &Options, out: &mut dyn Write) -> Result<(), Failure> {
    let flow = cfg.flow()?;
    let branch = branch_of(cfg, opts);
    let profile = flow.density_profile(&cfg.radii()?, branch)?;
    emit(opts, &format!("euler_{}.csv", branch.name()), &csv_bytes(&profile)?, out)
}

fn phases(cfg: &RunConfig, opts: &Options, out: &mut dyn Write) -> Result<(), Failure> {
    let flow = cfg.flow()?;
    if !flow.model.is_vdw() {
        return Err(Failure::config("phases defined only for vdw"));
    }
    let branch = branch_of(cfg, opts);
    let profile = phase_profile(&flow, &flow.density_profile(&cfg.radii()?, branch)?)?;
    emit(opts, &format!("phases_{}.csv", branch.name()), &csv_bytes(&profile)?, out)
}

/// Step summary; `r_step` and `step_width` are null when no step exists.
#[derive(Debug, Serialize)]
struct NsSummary {
    mu: f64,
    r_step: Option<f64>,
    step_width: Option<f64>,
    residual_norm: f64,
    newton_iters: usize,
}

fn viscous_config(cfg: &RunConfig) -> Result<ViscousConfig, Failure> {
    let flow = cfg.flow()?;
    let visc = cfg.viscosity()?;
    let grid = cfg.grid()?;
    Ok(ViscousConfig::new(flow, visc.eta, visc.zeta, grid.r_start, grid.r_end, grid.points - 1)?)
}

fn solve_viscous(cfg: &RunConfig, vcfg: &ViscousConfig) -> Result<BvpSolution, Failure> {
    let sol = match cfg.grid()?.spacing {
        Spacing::Linear => solve_bvp(vcfg)?,
        Spacing::Log => solve_bvp_on_mesh(vcfg, &cfg.radii()?)?,
    };
    Ok(sol)
}

fn ns_summary(vcfg: &ViscousConfig, sol: &BvpSolution) -> Result<NsSummary, Failure> {
    match summarize(vcfg, sol) {
        Ok(s) => Ok(NsSummary {
            mu: s.mu,
            r_step: Some(s.r_step),
            step_width: Some(s.step_width),
            residual_norm: s.residual_norm,
            newton_iters: s.newton_iters,
        }),
        Err(Error::NoStep { .. }) => Ok(NsSummary {
            mu: sol.mu,
            r_step: None,
            step_width: None,
            residual_norm: sol.residual_norm,
            newton_iters: sol.newton_iters,
        }),
        Err(e) => Err(e.into()),
    }
}

fn ns_profile(cfg: &RunConfig, opts: &Options, out: &mut dyn Write) -> Result<(), Failure> {
    let base = viscous_config(cfg)?;
    match &opts.mu_sweep {
        None => {
            let sol = solve_viscous(cfg, &base)?;
            emit(opts, "ns_profile.csv", &csv_bytes(&sol.profile)?, out)?;
            emit(opts, "ns_summary.json", &json_bytes(&ns_summary(&base, &sol)?)?, out)
        }
        Some(mus) => {
            if mus.is_empty() || mus.iter().any(|m| !(*m > 0.0)) {
                return Err(Failure::config("--mu-sweep needs positive values"));
            }
            let mut summaries = Vec::new();
            for (i, &mu) in mus.iter().enumerate() {
                let vcfg = base.clone().with_mu(mu);
                let sol = solve_viscous(cfg, &vcfg)?;
                emit(opts, &format!("ns_profile_{i}.csv"), &csv_bytes(&sol.profile)?, out)?;
                summaries.push(ns_summary(&vcfg, &sol)?);
            }
            emit(opts, "ns_summary.json", &json_bytes(&summaries)?, out)
        }
    }
}

#[derive(Debug, Serialize)]
struct OrderJson {
    regime: String,
    alpha: f64,
    beta: f64,
    fitted_order: f64,
    pass: bool,
}

impl From<OrderReport> for OrderJson {
    fn from(r: OrderReport) -> Self {
        OrderJson {
            regime: r.regime.to_string(),
            alpha: r.alpha,
            beta: r.beta,
            fitted_order: r.fitted_order,
            pass: r.pass,
        }
    }
}

/// Series values on the grid plus the residual-order fit.
fn expansion_run(cfg: &RunConfig) -> Result<(Vec<f64>, Vec<f64>, OrderJson), Failure> {
    let wanted = cfg.expansion()?;
    let model = cfg.model()?;
    let coeffs = cfg.coefficients()?;
    let visc = cfg.viscosity()?;
    let k = visc.zeta + 4.0 * visc.eta / 3.0;
    let intensity = cfg.intensity;
    let radii = cfg.radii()?;
    match wanted.regime.singular() {
        None => {
            let vs = radii
                .iter()
                .map(|&r| regular_series(&model, &coeffs, k, intensity, r, wanted.order))
                .collect::<Result<Vec<_>, _>>()?;
            let report = regular_euler_order(&model, &coeffs, k, &REGULAR_FIT_INTENSITIES, &radii)?;
            Ok((radii, vs, report.into()))
        }
        Some(regime) => {
            if wanted.order > 1 {
                return Err(Failure::config("singular series are available up to first order"));
            }
            if model.kind == GasKind::VdwReduced && wanted.regime != RegimeName::Large {
                return Err(Failure::config("the vdw singular series is given for the large regime only"));
            }
            let choice = scaling_exponents(&model, regime)?;
            let eps = if wanted.order == 1 { choice.epsilon(intensity) } else { 0.0 };
            let scale_r = intensity.powf(choice.alpha);
            let scale_v = intensity.powf(choice.beta);
            let xs: Vec<f64> = radii.iter().map(|r| r / scale_r).collect();
            let mut vs = Vec::with_capacity(xs.len());
            for &x in &xs {
                let w = match model.kind {
                    GasKind::Ideal => singular_series_ideal(x, &coeffs, eps, &model, k)?,
                    GasKind::VdwReduced => singular_series_vdw3(x, &coeffs, eps, k)?,
                };
                vs.push(scale_v * w);
            }
            // the fit varies ε on its own, so it samples the scaled coordinate at the grid radii
            let report = singular_residual_order(&model, regime, &coeffs, k, &SINGULAR_FIT_EPSILONS, &radii)?;
            Ok((radii, vs, report.into()))
        }
    }
}

fn expand(cfg: &RunConfig, opts: &Options, out: &mut dyn Write) -> Result<(), Failure> {
    let (rs, vs, report) = expansion_run(cfg)?;
    emit(opts, "expansion.csv", &table::series_csv(&rs, &vs).map_err(Failure::io)?, out)?;
    emit(opts, "expansion.json", &json_bytes(&report)?, out)
}

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.to_string(), pass, detail }
}

fn report(checks: &[Check], out: &mut dyn Write) -> Result<(), Failure> {
    for c in checks {
        say(out, &format!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail))?;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        say(out, &format!("all {} checks passed", checks.len()))
    } else {
        Err(Failure::validation(format!("{failed} of {} checks failed", checks.len())))
    }
}

fn euler_checks(flow: &FlowConfig, profile: &DensityProfile, label: &str) -> Vec<Check> {
    let tol = flow.residual_tolerance();
    let target = 4.0 * PI * flow.intensity;
    let mut worst_res: f64 = 0.0;
    let mut worst_flux: f64 = 0.0;
    for rec in &profile.records {
        let res = flow.residual(rec.r, rec.v).map(f64::abs).unwrap_or(f64::INFINITY);
        worst_res = worst_res.max(res);
        worst_flux = worst_flux.max((flow.mass_flux(rec.r, rec.v) - target).abs() / (target * f64::EPSILON));
    }
    vec![
        check(
            &format!("euler residual ({label})"),
            worst_res <= tol,
            format!("max |F| {} (bound {})", fmt_f64(worst_res), fmt_f64(tol)),
        ),
        check(&format!("mass flux ({label})"), worst_flux <= 4.0, format!("max deviation {worst_flux:.1} ulp")),
    ]
}

fn validate_config(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let flow = cfg.flow()?;
    let model = flow.model;
    let mut checks = Vec::new();

    if let Calibration::RhoInf(rho) = cfg.calibration()? {
        let direct = calibrate(&model, flow.intensity, rho)?;
        let closed = calibrate_closed_form(&model, flow.intensity, rho)?;
        let diff = (direct - closed).abs() / direct.abs().max(1.0);
        checks.push(check("calibration", diff <= 1e-10, format!("closed form vs f(1/rho_inf)/I^2: {diff:.2e}")));
    }

    let radius = flow.existence_radius();
    match (model.kind, radius) {
        (GasKind::Ideal, ExistenceRadius::Finite(r)) => {
            let fold = flow.existence_radius_fold().finite().unwrap_or(f64::NAN);
            let rel = (r - fold).abs() / r;
            checks.push(check("existence radius", rel <= 1e-6, format!("closed form {} vs fold {}", fmt_f64(r), fmt_f64(fold))));
        }
        (_, ExistenceRadius::Finite(r)) => {
            let inside = flow.solve_branches(r * (1.0 - 1e-6)).is_empty();
            let outside = !flow.solve_branches(r * (1.0 + 1e-6)).is_empty();
            checks.push(check("existence radius", inside && outside, format!("r_min {}", fmt_f64(r))));
        }
        (_, other) => checks.push(check("existence radius", true, format!("{other:?}"))),
    }

    if cfg.grid.is_some() {
        let radii = cfg.radii()?;
        for branch in [Branch::Lower, Branch::Higher] {
            match flow.density_profile(&radii, branch) {
                Ok(profile) => {
                    checks.extend(euler_checks(&flow, &profile, branch.name()));
                    if model.is_vdw() {
                        let labelled = phase_profile(&flow, &profile)?;
                        let runs = label_runs(&labelled);
                        let mut sorted = runs.clone();
                        sorted.sort();
                        sorted.dedup();
                        checks.push(check(
                            &format!("phase pattern ({})", branch.name()),
                            sorted.len() == runs.len(),
                            format!("runs {:?}", runs.iter().map(|l| l.value()).collect::<Vec<_>>()),
                        ));
                    }
                }
                Err(e) => checks.push(check(&format!("euler profile ({})", branch.name()), false, e.to_string())),
            }
        }
        if cfg.viscosity.is_some() {
            match viscous_config(cfg).and_then(|vcfg| Ok((solve_viscous(cfg, &vcfg)?, vcfg))) {
                Ok((sol, vcfg)) => {
                    let mesh = sol.mesh();
                    let vs = sol.values();
                    let accept = acceptance_level(&vcfg, sol.mu, &mesh, &vs)?;
                    let res = discrete_residual(&vcfg, sol.mu, &mesh, &vs)?.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    let ends = vs[0] == vcfg.v_a && vs[vs.len() - 1] == vcfg.v_b;
                    checks.push(check(
                        "viscous residual",
                        res <= accept && ends,
                        format!("max residual {} (bound {})", fmt_f64(res), fmt_f64(accept)),
                    ));
                }
                Err(f) => checks.push(check("viscous solve", false, f.message)),
            }
        }
        if cfg.expansion.is_some() {
            let (_, _, fit) = expansion_run(cfg)?;
            checks.push(check("series order", fit.pass, format!("{} regime, fitted order {:.3}", fit.regime, fit.fitted_order)));
        }
    }
    report(&checks, out)
}

/// Re-checks a profile CSV written by one of the profile commands: the
/// derived columns, phase labels if present, and the Euler residual of every
/// row. Rows that are not Euler solutions are checked against the discrete
/// viscous equation instead, using the configured viscosity (or the single
/// value of `--mu-sweep`).
fn validate_input(cfg: &RunConfig, opts: &Options, path: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let rows = table::read_profile(path).map_err(Failure::io)?;
    if rows.len() < 2 {
        return Err(Failure::config("input profile needs at least two rows"));
    }
    let flow = cfg.flow()?;
    let model = flow.model;
    let mut checks = Vec::new();

    let mut worst_col: f64 = 0.0;
    let mut phase_mismatch = 0usize;
    for row in &rows {
        let expect = [1.0 / row.v, model.temperature(row.v)?, model.pressure(row.v)?, flow.velocity(row.r, row.v)];
        let got = [row.rho, row.t, row.p, row.u];
        for (e, g) in expect.iter().zip(got) {
            worst_col = worst_col.max((e - g).abs() / e.abs().max(f64::MIN_POSITIVE));
        }
        if let Some(label) = row.phase {
            if classify(&model, row.v)?.value() != label {
                phase_mismatch += 1;
            }
        }
    }
    checks.push(check("derived columns", worst_col <= 1e-12, format!("max relative difference {worst_col:.2e}")));
    if rows.iter().any(|r| r.phase.is_some()) {
        checks.push(check("phase labels", phase_mismatch == 0, format!("{phase_mismatch} mismatching rows")));
    }

    let tol = flow.residual_tolerance();
    let worst_euler = rows.iter().map(|r| flow.residual(r.r, r.v).map(f64::abs).unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    if worst_euler <= tol {
        checks.push(check("euler residual", true, format!("{} rows, max |F| {}", rows.len(), fmt_f64(worst_euler))));
    } else if cfg.viscosity.is_some() {
        checks.push(viscous_row_check(cfg, opts, &rows)?);
    } else {
        checks.push(check("euler residual", false, format!("max |F| {} (bound {})", fmt_f64(worst_euler), fmt_f64(tol))));
    }
    report(&checks, out)
}

fn viscous_row_check(cfg: &RunConfig, opts: &Options, rows: &[Row]) -> Result<Check, Failure> {
    let flow = cfg.flow()?;
    let visc = cfg.viscosity()?;
    let mesh: Vec<f64> = rows.iter().map(|r| r.r).collect();
    let vs: Vec<f64> = rows.iter().map(|r| r.v).collect();
    let mut vcfg = ViscousConfig::new(flow, visc.eta, visc.zeta, mesh[0], mesh[mesh.len() - 1], mesh.len() - 1)?
        .with_boundary_values(vs[0], vs[vs.len() - 1])?;
    match opts.mu_sweep.as_deref() {
        None => {}
        Some([mu]) => vcfg = vcfg.with_mu(*mu),
        Some(_) => return Err(Failure::config("validate takes at most one --mu-sweep value")),
    }
    let mu = vcfg.mu();
    let accept = acceptance_level(&vcfg, mu, &mesh, &vs)?;
    let res = discrete_residual(&vcfg, mu, &mesh, &vs)?.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(check(
        "viscous residual",
        res <= accept,
        format!("mu {}, max residual {} (bound {})", fmt_f64(mu), fmt_f64(res), fmt_f64(accept)),
    ))
}
