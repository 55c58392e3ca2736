//! The four subcommands. Each returns its tables and summary in memory so
//! that parallel runs can be printed in order.

use cohomsol_core::flow::{self, soliton_residual, ClosedForm, Outcome, Trajectory};
use cohomsol_core::geometry::validate_geometry;
use cohomsol_core::indeterminacy::{indeterminacy_total, kernel_scan, IndeterminacyReport};
use cohomsol_core::ivp::{
    check_initial_conditions, contact_orders, solve_series, solve_series_exact, SeriesSolution,
};
use cohomsol_core::series::{Coeff, Rational};
use cohomsol_core::GeometrySpec;

use crate::config::{Run, RunConfig};
use crate::error::{CliError, Result};
use crate::output;

pub const CONSISTENCY_TOL: f64 = 1e-8;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const CONTACT_TOL: f64 = 1e-9;
pub const PLOT_POINTS: usize = 201;
/// Residual certificates only cover samples whose metric coefficients are
/// all at least this large.
pub const RESOLVED_METRIC: f64 = 0.1;

/// What a command produced: named CSV tables, human-readable lines, and the
/// failure that decides the exit code, if any.
#[derive(Debug, Default)]
pub struct CommandOutput {
    pub tables: Vec<(String, Vec<u8>)>,
    pub summary: Vec<String>,
    pub failure: Option<CliError>,
}

impl CommandOutput {
    fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }
}

fn table(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

pub fn series(cfg: &RunConfig, exact: bool) -> Result<CommandOutput> {
    let run = cfg.resolve()?;
    let mut out = CommandOutput::default();
    let sol = solve_series(&run.geometry, &run.data)?;
    out.tables.push((
        "jet.csv".into(),
        table(|b| output::write_jet(b, &run.geometry, &sol))?,
    ));
    let worst = sol.max_consistency_residual();
    out.line(format!("geometry: {}", run.name));
    out.line(format!("series order: {}", sol.order));
    out.line(format!("max consistency residual: {worst:.3e}"));
    for p in &sol.free_params {
        out.line(format!("free parameter: {p:?}"));
    }
    if exact {
        if !run.data.kernel_params().is_empty() {
            return Err(CliError::Config(
                "exact mode does not take kernel parameters".into(),
            ));
        }
        let l1: Vec<Rational> = run
            .data
            .l1()
            .values()
            .iter()
            .map(|&v| Rational::from_f64(v))
            .collect();
        let jet = solve_series_exact(
            &run.geometry,
            Rational::from_f64(run.data.epsilon()),
            &l1,
            Rational::from_f64(run.data.u2()),
            run.data.order(),
        )?;
        out.tables.push((
            "jet_exact.csv".into(),
            table(|b| output::write_exact_jet(b, &run.geometry, &jet))?,
        ));
        out.line("exact jet: computed");
    }
    if !(worst <= CONSISTENCY_TOL) {
        out.failure = Some(CliError::Certificate(format!(
            "consistency residual {worst:.3e} exceeds {CONSISTENCY_TOL:e}"
        )));
    }
    Ok(out)
}

fn run_flow(cfg: &RunConfig, run: &Run) -> Result<(SeriesSolution, Trajectory)> {
    let sol = solve_series(&run.geometry, &run.data)?;
    let traj = flow::integrate(
        &run.geometry,
        &run.data,
        &sol,
        run.t0,
        run.t_end,
        &cfg.flow_options(),
    )?;
    Ok((sol, traj))
}

/// Largest gap between the integrated metric and potential slope and the
/// closed form, over the sampled points.
pub fn closed_form_deviation(geom: &GeometrySpec, cf: ClosedForm, traj: &Trajectory) -> f64 {
    traj.samples
        .iter()
        .map(|s| {
            let (exact, _) = cf.state(geom, s.state.t);
            s.state
                .x
                .sub(&exact.x)
                .max_abs()
                .max((s.state.udot - exact.udot).abs())
        })
        .fold(0.0, f64::max)
}

fn describe_outcome(geom: &GeometrySpec, o: &Outcome) -> String {
    match *o {
        Outcome::Completed => "completed".into(),
        Outcome::MetricDegenerate {
            t,
            detected_at,
            summand,
        } => format!(
            "metric degenerates on summand {} at t = {t:.9} (detected at t = {detected_at:.9})",
            geom.summand(summand).label
        ),
    }
}

pub fn integrate(cfg: &RunConfig, plot: bool) -> Result<CommandOutput> {
    let run = cfg.resolve()?;
    let mut out = CommandOutput::default();
    let (_, traj) = run_flow(cfg, &run)?;
    let g = &run.geometry;
    out.tables.push((
        "trajectory.csv".into(),
        table(|b| output::write_trajectory(b, g, &traj))?,
    ));
    if let Some(h) = &traj.handoff {
        out.tables.push((
            "handoff.csv".into(),
            table(|b| output::write_handoff(b, h))?,
        ));
    }
    if plot {
        out.tables.push((
            "plot.csv".into(),
            table(|b| output::write_plot_data(b, g, &traj, PLOT_POINTS))?,
        ));
    }
    out.line(format!("geometry: {}", run.name));
    out.line(format!(
        "interval: [{}, {}]",
        traj.t_start(),
        traj.t_final()
    ));
    out.line(format!("outcome: {}", describe_outcome(g, &traj.outcome)));
    out.line(format!(
        "steps: {} accepted, {} rejected",
        traj.stats.accepted, traj.stats.rejected
    ));
    out.line(format!(
        "max first-integral residual: {:.3e}",
        traj.max_first_integral()
    ));
    out.line(format!(
        "max soliton residual: {:.3e}",
        traj.max_soliton_residual()
    ));
    let (fi, sr) = traj.resolved_residuals(g, RESOLVED_METRIC);
    out.line(format!("resolved region (metric >= {RESOLVED_METRIC}): first integral {fi:.3e}, soliton residual {sr:.3e}"));
    if let Some(cf) = run.closed_form {
        out.line(format!(
            "max closed-form deviation: {:.3e}",
            closed_form_deviation(g, cf, &traj)
        ));
    }
    Ok(out)
}

pub fn indeterminacy(cfg: &RunConfig) -> Result<CommandOutput> {
    let g = cfg.load_geometry()?;
    let report = kernel_scan(&g.geometry, cfg.scan_limit)?;
    let mut out = CommandOutput::default();
    out.tables.push((
        "indeterminacy.csv".into(),
        table(|b| output::write_indeterminacy(b, &g.geometry, &report))?,
    ));
    summarize_kernels(&mut out, &g.name, &g.geometry, &report);
    let total = indeterminacy_total(&report)?;
    out.line(format!("total: {total}"));
    Ok(out)
}

fn summarize_kernels(
    out: &mut CommandOutput,
    name: &str,
    geom: &GeometrySpec,
    r: &IndeterminacyReport,
) {
    out.line(format!("geometry: {name}"));
    out.line(format!("scan limit: {}", r.scan_limit));
    for k in r.nonzero() {
        let trig: Vec<&str> = k
            .triggering
            .iter()
            .map(|&s| geom.summand(s).label.as_str())
            .collect();
        out.line(format!(
            "order {}: plus {}, minus {} ({})",
            k.m,
            k.plus_dim,
            k.minus_dim,
            trig.join(", ")
        ));
    }
    out.line(format!("plus total: {}", r.plus_total()));
    out.line(format!("minus total: {}", r.minus_total()));
    out.line(format!("m0 = {}, m1 = {}", r.m0, r.m1));
    if r.multiplicity_warning {
        out.line("warning: two summands share a Casimir eigenvalue and dimension; kernel ranks may undercount");
    }
}

/// One line of a certificate report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tol,
            passed: value <= tol,
        }
    }
}

/// Residuals of the closed form under the configured soliton constant on
/// a grid inside `[t0, t_end]`, stopping short of any collapse.
fn closed_form_residual(
    geom: &GeometrySpec,
    cf: ClosedForm,
    epsilon: f64,
    t0: f64,
    t1: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..=64 {
        let t = t0 + (t1 - t0) * i as f64 / 64.0;
        let (state, deriv) = cf.state(geom, t);
        worst = worst.max(soliton_residual(geom, epsilon, &state, &deriv)?.max_abs());
    }
    Ok(worst)
}

pub fn verify_checks(cfg: &RunConfig) -> Result<(Vec<Check>, Vec<String>)> {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let g = cfg.load_geometry()?;
    for c in validate_geometry(&g.geometry).checks {
        checks.push(Check {
            name: format!("geometry/{}", c.name),
            value: c.max_deviation,
            tol: f64::NAN,
            passed: c.passed,
        });
    }
    let run = cfg.resolve()?;
    let geom = &run.geometry;
    let ic = check_initial_conditions(geom, &run.data)?;
    checks.push(Check::new("initial conditions", ic.max(), CONSISTENCY_TOL));
    let (sol, traj) = run_flow(cfg, &run)?;
    checks.push(Check::new(
        "consistency",
        sol.max_consistency_residual(),
        CONSISTENCY_TOL,
    ));
    let odd = sol
        .u_jet
        .iter()
        .skip(1)
        .step_by(2)
        .fold(0.0f64, |m, u| m.max(u.abs()));
    checks.push(Check::new("parity of the potential", odd, CONSISTENCY_TOL));
    let contact = contact_orders(geom, &run.data, &sol, CONTACT_TOL)?;
    let need = sol.order as i32 - 1;
    for (name, c) in [("x", contact.x), ("u", contact.u), ("tt", contact.tt)] {
        if let Some(c) = c {
            checks.push(Check::new(
                format!("contact order deficit ({name})"),
                (need - c).max(0) as f64,
                0.0,
            ));
        }
    }
    let (fi, sr) = traj.resolved_residuals(geom, RESOLVED_METRIC);
    checks.push(Check::new("first integral", fi, RESIDUAL_TOL));
    checks.push(Check::new("soliton residual", sr, RESIDUAL_TOL));
    notes.push(format!(
        "outcome: {}",
        describe_outcome(geom, &traj.outcome)
    ));
    if let Some(cf) = run.closed_form {
        let t1 = traj.t_final().min(run.t_end);
        let eps = run.data.epsilon();
        checks.push(Check::new(
            "closed-form residual",
            closed_form_residual(geom, cf, eps, run.t0, t1)?,
            RESIDUAL_TOL,
        ));
        checks.push(Check::new(
            "closed-form deviation",
            closed_form_deviation(geom, cf, &traj),
            RESIDUAL_TOL,
        ));
    }
    Ok((checks, notes))
}

pub fn verify(cfg: &RunConfig) -> Result<CommandOutput> {
    let (checks, notes) = verify_checks(cfg)?;
    let mut out = CommandOutput::default();
    out.line(format!(
        "geometry: {}",
        cfg.geometry.as_deref().unwrap_or("")
    ));
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        if c.tol.is_nan() {
            out.line(format!("{tag} {}: {:.3e}", c.name, c.value));
        } else {
            out.line(format!(
                "{tag} {}: {:.3e} (tolerance {:.1e})",
                c.name, c.value, c.tol
            ));
        }
    }
    out.summary.extend(notes);
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        out.line("verdict: PASS");
    } else {
        out.line("verdict: FAIL");
        out.failure = Some(CliError::Certificate(format!(
            "failed checks: {}",
            failed.join(", ")
        )));
    }
    Ok(out)
}
