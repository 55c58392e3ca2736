use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{ricci_endomorphism, DiagonalTensor, GeometrySpec};

/// A point of the soliton phase space at `t > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonState {
    pub t: f64,
    pub x: DiagonalTensor,
    pub y: DiagonalTensor,
    pub udot: f64,
    pub uddot: f64,
}

/// `d/dt` of a [`SolitonState`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub x_dot: DiagonalTensor,
    pub y_dot: DiagonalTensor,
    pub uddot: f64,
    pub u3: f64,
}

impl SolitonState {
    /// Layout `[x, y, u̇, ü]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.x.len() + 2);
        v.extend_from_slice(self.x.values());
        v.extend_from_slice(self.y.values());
        v.push(self.udot);
        v.push(self.uddot);
        v
    }

    pub fn from_slice(t: f64, v: &[f64]) -> Self {
        let n = (v.len() - 2) / 2;
        Self {
            t,
            x: DiagonalTensor::new(v[..n].to_vec()),
            y: DiagonalTensor::new(v[n..2 * n].to_vec()),
            udot: v[2 * n],
            uddot: v[2 * n + 1],
        }
    }

    /// `g_t = t² x₊ ⊕ x₋`.
    pub fn metric(&self, geom: &GeometrySpec) -> DiagonalTensor {
        let t2 = self.t * self.t;
        DiagonalTensor::new(
            (0..self.x.len())
                .map(|s| {
                    if geom.is_plus(s) {
                        t2 * self.x.get(s)
                    } else {
                        self.x.get(s)
                    }
                })
                .collect(),
        )
    }

    /// `L = 𝕀₊/t + x⁻¹y`.
    pub fn shape(&self, geom: &GeometrySpec) -> Result<DiagonalTensor> {
        Ok(DiagonalTensor::plus_identity(geom)
            .scale(1.0 / self.t)
            .add(&self.x.invert()?.mul(&self.y)))
    }
}

impl StateDerivative {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.x_dot.len() + 2);
        v.extend_from_slice(self.x_dot.values());
        v.extend_from_slice(self.y_dot.values());
        v.push(self.uddot);
        v.push(self.u3);
        v
    }

    pub fn from_slice(v: &[f64]) -> Self {
        let n = (v.len() - 2) / 2;
        Self {
            x_dot: DiagonalTensor::new(v[..n].to_vec()),
            y_dot: DiagonalTensor::new(v[n..2 * n].to_vec()),
            uddot: v[2 * n],
            u3: v[2 * n + 1],
        }
    }
}

fn check_regular(state: &SolitonState) -> Result<()> {
    if !(state.t > 0.0) {
        return Err(Error::SingularTime { t: state.t });
    }
    for (s, &v) in state.x.values().iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::SingularMetric {
                summand: s,
                value: v,
            });
        }
    }
    Ok(())
}

/// Right side of the soliton system in the regular region.
pub fn rhs(geom: &GeometrySpec, epsilon: f64, state: &SolitonState) -> Result<StateDerivative> {
    check_regular(state)?;
    let t = state.t;
    let k = geom.k() as f64;
    let (x, y, udot, uddot) = (&state.x, &state.y, state.udot, state.uddot);
    let r = ricci_endomorphism(geom, &state.metric(geom))?;
    let x_inv = x.invert()?;
    let eta = x_inv.mul(y);
    let tr_eta = eta.trace(geom);
    let x_plus = x.plus(geom);

    let y_dot = x_plus
        .scale((1.0 - k) / (t * t) + (udot - tr_eta) / t)
        .add(&y.scale(-k / t - tr_eta + udot))
        .add(&y.mul(&eta).scale(2.0))
        .add(&x.mul(&r))
        .add(&x.scale(0.5 * epsilon));

    let tr_l = k / t + tr_eta;
    let tr_ldot = -k / (t * t) - 2.0 * eta.mul(&eta).trace(geom) + x_inv.mul(&y_dot).trace(geom);
    let u3 = -tr_l * uddot - tr_ldot * udot + 2.0 * uddot * udot + epsilon * udot;
    Ok(StateDerivative {
        x_dot: y.scale(2.0),
        y_dot,
        uddot,
        u3,
    })
}

/// `L̇ = -𝕀₊/t² + x⁻¹ẏ - 2 η²`, using the actual `ẏ` rather than the one
/// the equations predict.
fn shape_derivative(
    geom: &GeometrySpec,
    state: &SolitonState,
    y_dot: &DiagonalTensor,
) -> Result<DiagonalTensor> {
    let x_inv = state.x.invert()?;
    let eta = x_inv.mul(&state.y);
    Ok(DiagonalTensor::plus_identity(geom)
        .scale(-1.0 / (state.t * state.t))
        .add(&x_inv.mul(y_dot))
        .sub(&eta.mul(&eta).scale(2.0)))
}

/// `u⃛ + tr(L) ü + tr(L̇) u̇ - 2 ü u̇ - ε u̇` at a state with measured
/// derivatives.
pub fn first_integral_residual(
    geom: &GeometrySpec,
    epsilon: f64,
    state: &SolitonState,
    deriv: &StateDerivative,
) -> Result<f64> {
    check_regular(state)?;
    let tr_l = state.shape(geom)?.trace(geom);
    let tr_ldot = shape_derivative(geom, state, &deriv.y_dot)?.trace(geom);
    let (ud, udd) = (state.udot, state.uddot);
    Ok(deriv.u3 + tr_l * udd + tr_ldot * ud - 2.0 * udd * ud - epsilon * ud)
}

/// Orbit and normal components of `Ric + Hess u + (ε/2) g`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonResidual {
    /// `r - tr(L) L - L̇ + u̇ L + ε/2`, one entry per summand.
    pub orbit: DiagonalTensor,
    /// `-tr(L̇) - tr(L²) + ü + ε/2`.
    pub normal: f64,
}

impl SolitonResidual {
    pub fn max_abs(&self) -> f64 {
        self.orbit.max_abs().max(self.normal.abs())
    }
}

pub fn soliton_residual(
    geom: &GeometrySpec,
    epsilon: f64,
    state: &SolitonState,
    deriv: &StateDerivative,
) -> Result<SolitonResidual> {
    check_regular(state)?;
    let r = ricci_endomorphism(geom, &state.metric(geom))?;
    let l = state.shape(geom)?;
    let l_dot = shape_derivative(geom, state, &deriv.y_dot)?;
    let tr_l = l.trace(geom);
    let orbit = r
        .sub(&l.scale(tr_l - state.udot))
        .sub(&l_dot)
        .add(&DiagonalTensor::constant(l.len(), 0.5 * epsilon));
    let normal = -l_dot.trace(geom) - l.mul(&l).trace(geom) + deriv.uddot + 0.5 * epsilon;
    Ok(SolitonResidual { orbit, normal })
}
