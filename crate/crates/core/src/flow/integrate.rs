use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{DiagonalTensor, GeometrySpec};
use crate::ivp::{InitialData, SeriesSolution};

use super::dopri::{self, DenseSegment, Stats, StepControl};
use super::system::{
    first_integral_residual, rhs, soliton_residual, SolitonResidual, SolitonState, StateDerivative,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Largest admissible tail of the jet at the starting time.
    pub handoff_tol: f64,
    /// Integration stops once some `x_i` drops below this.
    pub degeneracy: f64,
    /// Integration also stops once a principal curvature drops below
    /// `-collapse_curvature`, i.e. a summand is about to shrink to a point.
    pub collapse_curvature: f64,
    pub h_min: f64,
    pub max_steps: usize,
    /// Constant step size; disables error control.
    pub fixed_step: Option<f64>,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            handoff_tol: 1e-10,
            degeneracy: 1e-8,
            collapse_curvature: 50.0,
            h_min: 1e-14,
            max_steps: 2_000_000,
            fixed_step: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandoffLog {
    pub t0: f64,
    pub order: usize,
    pub tail: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Completed,
    /// The metric of `summand` collapses at `t`. The integration ended at
    /// `detected_at`; when this is earlier than `t` the collapse time is
    /// extrapolated from the shape operator.
    MetricDegenerate {
        t: f64,
        detected_at: f64,
        summand: usize,
    },
}

/// Certificates at one interior point of an accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub state: SolitonState,
    pub first_integral: f64,
    pub soliton: SolitonResidual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub epsilon: f64,
    pub segments: Vec<DenseSegment>,
    pub samples: Vec<TrajectorySample>,
    pub handoff: Option<HandoffLog>,
    pub outcome: Outcome,
    pub stats: Stats,
}

impl Trajectory {
    pub fn t_start(&self) -> f64 {
        self.segments.first().map_or(f64::NAN, |s| s.t0)
    }

    pub fn t_final(&self) -> f64 {
        match self.outcome {
            Outcome::MetricDegenerate { detected_at, .. } => detected_at,
            Outcome::Completed => self.segments.last().map_or(f64::NAN, |s| s.t1()),
        }
    }

    /// Interpolated state; `None` outside the covered interval.
    pub fn state_at(&self, t: f64) -> Option<SolitonState> {
        if !(t >= self.t_start() && t <= self.t_final()) {
            return None;
        }
        let seg = dopri::find_segment(&self.segments, t)?;
        Some(SolitonState::from_slice(t, &seg.eval(t)))
    }

    /// Derivative of the interpolant.
    pub fn derivative_at(&self, t: f64) -> Option<StateDerivative> {
        if !(t >= self.t_start() && t <= self.t_final()) {
            return None;
        }
        let seg = dopri::find_segment(&self.segments, t)?;
        Some(StateDerivative::from_slice(&seg.derivative(t)))
    }

    pub fn max_first_integral(&self) -> f64 {
        self.samples
            .iter()
            .fold(0.0, |m, s| m.max(s.first_integral.abs()))
    }

    pub fn max_soliton_residual(&self) -> f64 {
        self.samples
            .iter()
            .fold(0.0, |m, s| m.max(s.soliton.max_abs()))
    }

    /// First-integral and soliton residual maxima over the samples where
    /// every metric coefficient is at least `min_metric`. Near a collapse
    /// the residuals amplify state errors by inverse powers of the metric.
    pub fn resolved_residuals(&self, geom: &GeometrySpec, min_metric: f64) -> (f64, f64) {
        self.samples
            .iter()
            .filter(|s| {
                s.state
                    .metric(geom)
                    .values()
                    .iter()
                    .all(|&g| g >= min_metric)
            })
            .fold((0.0, 0.0), |(fi, sr), s| {
                (
                    f64::max(fi, s.first_integral.abs()),
                    f64::max(sr, s.soliton.max_abs()),
                )
            })
    }

    /// Largest `|u̇|` over the samples.
    pub fn max_abs_udot(&self) -> f64 {
        self.samples
            .iter()
            .fold(0.0, |m, s| m.max(s.state.udot.abs()))
    }
}

/// Values of the jet and of its derivatives at `t`.
pub fn jet_state(jet: &SeriesSolution, t: f64) -> SolitonState {
    let n = jet.x_jet[0].len();
    let mut x = alloc::vec![0.0; n];
    let mut xd = alloc::vec![0.0; n];
    for m in 0..jet.x_jet.len() {
        let c = jet.x_coeff(m);
        for s in 0..n {
            x[s] += c.get(s) * libm::pow(t, m as f64);
            if m >= 1 {
                xd[s] += m as f64 * c.get(s) * libm::pow(t, (m - 1) as f64);
            }
        }
    }
    let (mut ud, mut udd) = (0.0, 0.0);
    for m in 1..jet.u_jet.len() {
        let c = jet.u_coeff(m);
        ud += m as f64 * c * libm::pow(t, (m - 1) as f64);
        if m >= 2 {
            udd += (m * (m - 1)) as f64 * c * libm::pow(t, (m - 2) as f64);
        }
    }
    SolitonState {
        t,
        x: DiagonalTensor::new(x),
        y: DiagonalTensor::new(xd).scale(0.5),
        udot: ud,
        uddot: udd,
    }
}

/// Continues the jet from `t0` to `t_end`.
pub fn integrate(
    geom: &GeometrySpec,
    data: &InitialData,
    jet: &SeriesSolution,
    t0: f64,
    t_end: f64,
    opts: &FlowOptions,
) -> Result<Trajectory> {
    if !(t0 > 0.0) {
        return Err(Error::SingularTime { t: t0 });
    }
    let tail = jet.tail_estimate(t0);
    if !(tail < opts.handoff_tol) {
        return Err(Error::InvalidData(format!(
            "jet tail {tail:e} at t0 = {t0} exceeds the handoff tolerance {:e}",
            opts.handoff_tol
        )));
    }
    let mut traj = integrate_from(geom, data.epsilon(), &jet_state(jet, t0), t_end, opts)?;
    traj.handoff = Some(HandoffLog {
        t0,
        order: jet.order,
        tail,
    });
    Ok(traj)
}

/// Integrates from an arbitrary regular state.
pub fn integrate_from(
    geom: &GeometrySpec,
    epsilon: f64,
    start: &SolitonState,
    t_end: f64,
    opts: &FlowOptions,
) -> Result<Trajectory> {
    if !(t_end > start.t) {
        return Err(Error::InvalidData(format!(
            "t_end = {t_end} must exceed the start time {}",
            start.t
        )));
    }
    let ctl = StepControl {
        rtol: opts.rtol,
        atol: opts.atol,
        h_min: opts.h_min,
        max_steps: opts.max_steps,
        fixed_step: opts.fixed_step,
    };
    let n = start.x.len();
    let threshold = opts.degeneracy;
    let curvature = |t: f64, v: &[f64], i: usize| {
        let pole = if geom.is_plus(i) { 1.0 / t } else { 0.0 };
        pole + v[n + i] / v[i]
    };
    let sol = dopri::solve(
        |t, v| Ok(rhs(geom, epsilon, &SolitonState::from_slice(t, v))?.to_vec()),
        start.t,
        &start.to_vec(),
        t_end,
        &ctl,
        |seg| {
            (0..n)
                .filter_map(|i| dopri::first_crossing_below(seg, i, threshold))
                .chain(dopri::first_root(seg, |t, v| {
                    (0..n)
                        .map(|i| curvature(t, v, i))
                        .fold(f64::INFINITY, f64::min)
                        + opts.collapse_curvature
                }))
                .reduce(f64::min)
        },
    )?;
    let outcome = match sol.stopped_at {
        Some(ts) => {
            let v = sol.segments.last().expect("stopped inside a step").eval(ts);
            let smallest = (0..n)
                .min_by(|&a, &b| v[a].total_cmp(&v[b]))
                .expect("nonempty state");
            if v[smallest] < threshold {
                Outcome::MetricDegenerate {
                    t: ts,
                    detected_at: ts,
                    summand: smallest,
                }
            } else {
                let (summand, l) = (0..n)
                    .map(|i| (i, curvature(ts, &v, i)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("nonempty state");
                Outcome::MetricDegenerate {
                    t: ts - 1.0 / l,
                    detected_at: ts,
                    summand,
                }
            }
        }
        None => Outcome::Completed,
    };
    finish(geom, epsilon, sol, outcome)
}

fn finish(
    geom: &GeometrySpec,
    epsilon: f64,
    sol: dopri::Solution,
    outcome: Outcome,
) -> Result<Trajectory> {
    let mut samples = Vec::with_capacity(sol.segments.len());
    for seg in &sol.segments {
        let end = match outcome {
            Outcome::MetricDegenerate { detected_at, .. } => seg.t1().min(detected_at),
            Outcome::Completed => seg.t1(),
        };
        let tm = 0.5 * (seg.t0 + end);
        let state = SolitonState::from_slice(tm, &seg.eval(tm));
        let deriv = StateDerivative::from_slice(&seg.derivative(tm));
        let first_integral = first_integral_residual(geom, epsilon, &state, &deriv)?;
        let soliton = soliton_residual(geom, epsilon, &state, &deriv)?;
        samples.push(TrajectorySample {
            state,
            first_integral,
            soliton,
        });
    }
    Ok(Trajectory {
        epsilon,
        segments: sol.segments,
        samples,
        handoff: None,
        outcome,
        stats: sol.stats,
    })
}
