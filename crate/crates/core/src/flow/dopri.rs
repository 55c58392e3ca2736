//! Dormand–Prince 5(4) with PI step control and Hairer's dense output.

use alloc::vec::Vec;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Quartic interpolant over one accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    coeffs: [Vec<f64>; 5],
}

impl DenseSegment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t0 && t <= self.t1()
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let [c1, c2, c3, c4, c5] = &self.coeffs;
        (0..c1.len())
            .map(|i| c1[i] + th * (c2[i] + th1 * (c3[i] + th * (c4[i] + th1 * c5[i]))))
            .collect()
    }

    pub fn derivative(&self, t: f64) -> Vec<f64> {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let [_, c2, c3, c4, c5] = &self.coeffs;
        (0..c2.len())
            .map(|i| {
                let q = c4[i] + th1 * c5[i];
                let r = c3[i] + th * q;
                let s = c2[i] + th1 * r;
                let ds = -r + th1 * (q - th * c5[i]);
                (s + th * ds) / self.h
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub max_steps: usize,
    /// Constant step size with no error control.
    pub fixed_step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Result of [`solve`]: dense output and, if the stop function crossed
/// zero, the crossing time.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub segments: Vec<DenseSegment>,
    pub stopped_at: Option<f64>,
    pub stats: Stats,
}

fn axpy(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (a, k) in terms {
        if *a != 0.0 {
            for (o, ki) in out.iter_mut().zip(k.iter()) {
                *o += h * a * ki;
            }
        }
    }
    out
}

/// Integrates `ẏ = f(t, y)` from `t0` to `t_end`. A [`Error::SingularMetric`]
/// from `f` inside a trial step shrinks the step. After each accepted step
/// `stop` inspects the interpolant; if it returns a time the integration
/// ends there.
pub fn solve(
    mut f: impl FnMut(f64, &[f64]) -> Result<Vec<f64>>,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    ctl: &StepControl,
    stop: impl Fn(&DenseSegment) -> Option<f64>,
) -> Result<Solution> {
    let mut stats = Stats::default();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = f(t, &y)?;
    stats.evaluations += 1;
    let mut h = match ctl.fixed_step {
        Some(h) => h,
        None => initial_step(&y, &k1, ctl, t_end - t0),
    };
    let mut fac_old: f64 = 1e-4;
    let mut segments = Vec::new();

    while t < t_end {
        if stats.accepted + stats.rejected >= ctl.max_steps {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let last = t + h * (1.0 + 1e-9) >= t_end;
        if last {
            h = t_end - t;
        }
        if h < ctl.h_min {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let trial = (|| -> Result<_> {
            let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
            let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(
                t + C4 * h,
                &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            )?;
            let k5 = f(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = f(
                t + h,
                &axpy(
                    &y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            )?;
            let y1 = axpy(
                &y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f(t + h, &y1)?;
            Ok((k2, k3, k4, k5, k6, k7, y1))
        })();
        stats.evaluations += 6;
        let (_k2, k3, k4, k5, k6, k7, y1) = match trial {
            Ok(v) => v,
            Err(Error::SingularMetric { .. }) | Err(Error::SingularTime { .. })
                if ctl.fixed_step.is_none() =>
            {
                stats.rejected += 1;
                h *= 0.25;
                continue;
            }
            Err(e) => return Err(e),
        };

        let err = if ctl.fixed_step.is_some() {
            0.0
        } else {
            let mut sum = 0.0;
            for i in 0..y.len() {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = ctl.atol + ctl.rtol * y[i].abs().max(y1[i].abs());
                sum += (e / sc) * (e / sc);
            }
            libm::sqrt(sum / y.len().max(1) as f64)
        };
        if !err.is_finite() {
            stats.rejected += 1;
            h *= 0.25;
            continue;
        }

        let fac11 = libm::pow(err, 0.2 - BETA * 0.75);
        if err <= 1.0 {
            let ydiff: Vec<f64> = y1.iter().zip(&y).map(|(a, b)| a - b).collect();
            let bspl: Vec<f64> = (0..y.len()).map(|i| h * k1[i] - ydiff[i]).collect();
            let c4: Vec<f64> = (0..y.len())
                .map(|i| ydiff[i] - h * k7[i] - bspl[i])
                .collect();
            let c5: Vec<f64> = (0..y.len())
                .map(|i| {
                    h * (D1 * k1[i]
                        + D3 * k3[i]
                        + D4 * k4[i]
                        + D5 * k5[i]
                        + D6 * k6[i]
                        + D7 * k7[i])
                })
                .collect();
            let seg = DenseSegment {
                t0: t,
                h,
                coeffs: [y.clone(), ydiff, bspl, c4, c5],
            };
            stats.accepted += 1;

            if let Some(ts) = stop(&seg) {
                segments.push(seg);
                return Ok(Solution {
                    segments,
                    stopped_at: Some(ts),
                    stats,
                });
            }
            segments.push(seg);
            t += h;
            y = y1;
            k1 = k7;
            if ctl.fixed_step.is_none() {
                let fac =
                    (fac11 / libm::pow(fac_old, BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                fac_old = err.max(1e-4);
                h /= fac;
            }
            if last {
                break;
            }
        } else {
            stats.rejected += 1;
            h /= (fac11 / SAFE).min(1.0 / FAC_MIN);
        }
    }
    Ok(Solution {
        segments,
        stopped_at: None,
        stats,
    })
}

fn initial_step(y: &[f64], f0: &[f64], ctl: &StepControl, span: f64) -> f64 {
    let sc: Vec<f64> = y.iter().map(|v| ctl.atol + ctl.rtol * v.abs()).collect();
    let d0 = libm::sqrt(
        y.iter()
            .zip(&sc)
            .map(|(v, s)| (v / s) * (v / s))
            .sum::<f64>()
            / y.len() as f64,
    );
    let d1 = libm::sqrt(
        f0.iter()
            .zip(&sc)
            .map(|(v, s)| (v / s) * (v / s))
            .sum::<f64>()
            / y.len() as f64,
    );
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.min(span).min(1e-2).max(ctl.h_min * 10.0)
}

/// First time in the segment where component `i` falls below `level`, found
/// by scanning the interpolant and its derivative and then bisecting.
pub fn first_crossing_below(seg: &DenseSegment, i: usize, level: f64) -> Option<f64> {
    const SCAN: usize = 16;
    let value = |t: f64| seg.eval(t)[i];
    let slope = |t: f64| seg.derivative(t)[i];
    let at = |j: usize| seg.t0 + seg.h * j as f64 / SCAN as f64;
    let bisect = |mut lo: f64, mut hi: f64, f: &dyn Fn(f64) -> bool| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * hi.abs().max(1.0) {
                break;
            }
        }
        hi
    };
    for j in 1..=SCAN {
        let (a, b) = (at(j - 1), at(j));
        let below = |t: f64| value(t) < level;
        let hit = if below(b) {
            Some(b)
        } else if slope(a) < 0.0 && slope(b) > 0.0 {
            let tmin = bisect(a, b, &|t| slope(t) > 0.0);
            below(tmin).then_some(tmin)
        } else {
            None
        };
        if let Some(hi) = hit {
            return Some(bisect(a, hi, &below));
        }
    }
    None
}

/// First time in the segment where `g` becomes negative, found by sampling
/// and bisection. `g` receives the time and the interpolated state.
pub fn first_root(seg: &DenseSegment, g: impl Fn(f64, &[f64]) -> f64) -> Option<f64> {
    const SCAN: usize = 16;
    let neg = |t: f64| g(t, &seg.eval(t)) < 0.0;
    let mut lo = seg.t0;
    for j in 1..=SCAN {
        let mut hi = seg.t0 + seg.h * j as f64 / SCAN as f64;
        if neg(hi) {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if neg(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-15 * hi.abs().max(1.0) {
                    break;
                }
            }
            return Some(hi);
        }
        lo = hi;
    }
    None
}

/// Locates the segment containing `t` (clamped to the covered range).
pub fn find_segment(segments: &[DenseSegment], t: f64) -> Option<&DenseSegment> {
    if segments.is_empty() {
        return None;
    }
    let idx = segments.partition_point(|s| s.t1() < t);
    Some(&segments[idx.min(segments.len() - 1)])
}
