//! The soliton system near `t = 0` written entirely in series arithmetic.
//!
//! With `g_t = t² x₊ ⊕ x₋`, `y = ẋ/2` and `η = x⁻¹y`, so that the shape
//! operator is `L = 𝕀₊/t + η`:
//!
//! ```text
//! ẏ = (1-k) x₊/t² - k y/t - tr(η) x₊/t + u̇ x₊/t
//!     + 2 y x⁻¹ y + x r - tr(η) y + u̇ y + (ε/2) x
//! u⃛ = -(k/t + tr η) ü - tr(L̇) u̇ + 2 ü u̇ + ε u̇,   tr L̇ = -k/t² - 2 tr(η²) + tr(x⁻¹ẏ)
//! ```
//!
//! Each function returns the difference of the two sides as a Laurent
//! series, valid as far as its inputs allow.

use super::super::geometry::{GeometrySpec, RicciTables};
use crate::error::Result;
use crate::series::{ricci_series_with, Coeff, ScalarSeries, TensorSeries};

/// Shared pieces of both equations.
struct Kinematics<T: Coeff> {
    y: TensorSeries<T>,
    y_dot: TensorSeries<T>,
    x_inv: TensorSeries<T>,
    eta: TensorSeries<T>,
    tr_eta: ScalarSeries<T>,
}

fn kinematics<T: Coeff>(geom: &GeometrySpec, x: &TensorSeries<T>) -> Result<Kinematics<T>> {
    let half = T::one().div(&T::from_i64(2));
    let y = x.derivative().scale(&half);
    let y_dot = y.derivative();
    let x_inv = x.invert()?;
    let eta = x_inv.mul(&y);
    let tr_eta = eta.trace(geom);
    Ok(Kinematics {
        y,
        y_dot,
        x_inv,
        eta,
        tr_eta,
    })
}

fn k_coeff<T: Coeff>(geom: &GeometrySpec) -> T {
    T::from_i64(geom.k() as i64)
}

/// `tr L̇ = -k/t² - 2 tr(η²) + tr(x⁻¹ ẏ)`.
fn trace_shape_derivative<T: Coeff>(geom: &GeometrySpec, kin: &Kinematics<T>) -> ScalarSeries<T> {
    let order = kin.y_dot.order();
    let pole = ScalarSeries::monomial(k_coeff::<T>(geom).neg(), -2, order);
    pole.sub(&kin.eta.mul(&kin.eta).trace(geom).scale(&T::from_i64(2)))
        .add(&kin.x_inv.mul(&kin.y_dot).trace(geom))
}

/// Residual `ẏ - (right side)` of the metric equation.
pub fn x_equation<T: Coeff>(
    geom: &GeometrySpec,
    tables: &RicciTables<T>,
    epsilon: &T,
    x: &TensorSeries<T>,
    u: &ScalarSeries<T>,
) -> Result<TensorSeries<T>> {
    let kin = kinematics(geom, x)?;
    let k = k_coeff::<T>(geom);
    let two = T::from_i64(2);
    let udot = u.derivative();
    let x_plus = x.plus(geom);
    let r = ricci_series_with(geom, tables, x)?;

    let pole = x_plus.scale(&T::one().sub(&k)).shift(-2);
    let simple = kin
        .y
        .scale(&k.neg())
        .sub(&x_plus.scale_series(&kin.tr_eta))
        .add(&x_plus.scale_series(&udot))
        .shift(-1);
    let regular = kin
        .y
        .mul(&kin.x_inv)
        .mul(&kin.y)
        .scale(&two)
        .add(&x.mul(&r))
        .sub(&kin.y.scale_series(&kin.tr_eta))
        .add(&kin.y.scale_series(&udot))
        .add(&x.scale(&epsilon.div(&two)));
    Ok(kin.y_dot.sub(&pole.add(&simple).add(&regular)))
}

/// Residual of the first integral
/// `u⃛ + tr(L) ü + tr(L̇) u̇ - 2 ü u̇ - ε u̇`.
pub fn u_equation<T: Coeff>(
    geom: &GeometrySpec,
    epsilon: &T,
    x: &TensorSeries<T>,
    u: &ScalarSeries<T>,
) -> Result<ScalarSeries<T>> {
    let kin = kinematics(geom, x)?;
    let udot = u.derivative();
    let uddot = udot.derivative();
    let u3 = uddot.derivative();
    let tr_l = kin.tr_eta.add(&ScalarSeries::monomial(
        k_coeff(geom),
        -1,
        kin.tr_eta.order() + 1,
    ));
    let tr_ldot = trace_shape_derivative(geom, &kin);
    Ok(u3
        .add(&tr_l.mul(&uddot))
        .add(&tr_ldot.mul(&udot))
        .sub(&uddot.mul(&udot).scale(&T::from_i64(2)))
        .sub(&udot.scale(epsilon)))
}

/// Residual of the normal-normal component
/// `-tr(L̇) - tr(L²) + ü + ε/2`.
pub fn tt_equation<T: Coeff>(
    geom: &GeometrySpec,
    epsilon: &T,
    x: &TensorSeries<T>,
    u: &ScalarSeries<T>,
) -> Result<ScalarSeries<T>> {
    let kin = kinematics(geom, x)?;
    let uddot = u.derivative().derivative();
    // tr(L²) = k/t² + 2 tr(η₊)/t + tr(η²); the poles cancel against tr L̇.
    let order = kin.y_dot.order();
    let tr_l2 = ScalarSeries::monomial(k_coeff(geom), -2, order)
        .add(
            &kin.eta
                .plus(geom)
                .trace(geom)
                .scale(&T::from_i64(2))
                .shift(-1),
        )
        .add(&kin.eta.mul(&kin.eta).trace(geom));
    let tr_ldot = trace_shape_derivative(geom, &kin);
    Ok(tr_ldot
        .add(&tr_l2)
        .neg()
        .add(&uddot)
        .add(&ScalarSeries::constant(epsilon.div(&T::from_i64(2)), order)))
}
