//! CSV tables.

use std::io::Write;

use cohomsol_core::flow::{HandoffLog, Trajectory};
use cohomsol_core::indeterminacy::IndeterminacyReport;
use cohomsol_core::ivp::SeriesSolution;
use cohomsol_core::GeometrySpec;

use crate::error::Result;

fn label(geom: &GeometrySpec, s: usize) -> &str {
    &geom.summand(s).label
}

/// One row per Taylor coefficient of `t^m`; the consistency residual of the
/// order that produced it is attached to `x` rows.
pub fn write_jet<W: Write>(w: W, geom: &GeometrySpec, sol: &SeriesSolution) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "kind",
        "summand",
        "m",
        "coefficient",
        "consistency_residual",
    ])?;
    let residual_for = |m: usize| {
        m.checked_sub(2)
            .and_then(|j| sol.consistency_residuals.iter().find(|r| r.m == j))
    };
    for m in 0..sol.x_jet.len() {
        let res = residual_for(m)
            .map(|r| format!("{:e}", r.x))
            .unwrap_or_default();
        for (s, v) in sol.x_coeff(m).values().iter().enumerate() {
            out.write_record(["x", label(geom, s), &m.to_string(), &format!("{v:e}"), &res])?;
        }
    }
    for m in 0..sol.u_jet.len() {
        let res = m
            .checked_sub(3)
            .and_then(|j| sol.consistency_residuals.iter().find(|r| r.m == j))
            .map(|r| format!("{:e}", r.u))
            .unwrap_or_default();
        out.write_record([
            "u",
            "",
            &m.to_string(),
            &format!("{:e}", sol.u_coeff(m)),
            &res,
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_exact_jet<W: Write>(
    w: W,
    geom: &GeometrySpec,
    jet: &cohomsol_core::ivp::ExactJet,
) -> Result<()> {
    use cohomsol_core::series::Coeff;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["kind", "summand", "m", "coefficient", "exact"])?;
    for (m, xm) in jet.x.iter().enumerate() {
        for (s, v) in xm.iter().enumerate() {
            out.write_record([
                "x",
                label(geom, s),
                &m.to_string(),
                &format!("{:e}", v.to_f64()),
                &v.to_string(),
            ])?;
        }
    }
    for (m, v) in jet.u.iter().enumerate() {
        out.write_record([
            "u",
            "",
            &m.to_string(),
            &format!("{:e}", v.to_f64()),
            &v.to_string(),
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_trajectory<W: Write>(w: W, geom: &GeometrySpec, traj: &Trajectory) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let n = geom.n_summands();
    let mut header = vec!["t".to_string()];
    header.extend((0..n).map(|s| format!("x_{}", label(geom, s))));
    header.extend((0..n).map(|s| format!("y_{}", label(geom, s))));
    header.extend(["udot", "uddot", "first_integral", "soliton_residual"].map(String::from));
    out.write_record(&header)?;
    for sample in &traj.samples {
        let st = &sample.state;
        let mut row = vec![format!("{:e}", st.t)];
        row.extend(st.x.values().iter().map(|v| format!("{v:e}")));
        row.extend(st.y.values().iter().map(|v| format!("{v:e}")));
        row.push(format!("{:e}", st.udot));
        row.push(format!("{:e}", st.uddot));
        row.push(format!("{:e}", sample.first_integral));
        row.push(format!("{:e}", sample.soliton.max_abs()));
        out.write_record(&row)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_handoff<W: Write>(w: W, log: &HandoffLog) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t0", "order", "tail_estimate"])?;
    out.write_record([
        format!("{:e}", log.t0),
        log.order.to_string(),
        format!("{:e}", log.tail),
    ])?;
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Warped-product radii: `t·sqrt(x)` on sphere summands, `sqrt(x)` on the
/// others, sampled on `points` evenly spaced times.
pub fn write_plot_data<W: Write>(
    w: W,
    geom: &GeometrySpec,
    traj: &Trajectory,
    points: usize,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let n = geom.n_summands();
    let mut header = vec!["t".to_string()];
    header.extend((0..n).map(|s| format!("f_{}", label(geom, s))));
    out.write_record(&header)?;
    let (a, b) = (traj.t_start(), traj.t_final());
    for i in 0..points {
        let t = a + (b - a) * i as f64 / (points - 1).max(1) as f64;
        let Some(st) = traj.state_at(t) else { continue };
        let g = st.metric(geom);
        let mut row = vec![format!("{t:e}")];
        row.extend(
            g.values()
                .iter()
                .map(|v| format!("{:e}", v.max(0.0).sqrt())),
        );
        out.write_record(&row)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_indeterminacy<W: Write>(
    w: W,
    geom: &GeometrySpec,
    report: &IndeterminacyReport,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["m", "plus_kernel_dim", "minus_kernel_dim", "triggering"])?;
    for k in &report.per_order {
        let trig: Vec<&str> = k.triggering.iter().map(|&s| label(geom, s)).collect();
        out.write_record([
            k.m.to_string(),
            k.plus_dim.to_string(),
            k.minus_dim.to_string(),
            trig.join(";"),
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}
