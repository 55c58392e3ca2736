use alloc::vec::Vec;

use super::coeff::Coeff;
use super::scalar::ScalarSeries;
use super::tensor::TensorSeries;
use crate::error::{Error, Result};
use crate::geometry::{DiagonalTensor, GeometrySpec, RicciTables};

const ODD_TOL: f64 = 1e-10;

/// Laurent expansion of the Ricci endomorphism of `t² x₊(t) ⊕ x₋(t)`.
pub fn ricci_series(geom: &GeometrySpec, x: &TensorSeries<f64>) -> Result<TensorSeries<f64>> {
    ricci_series_with(geom, &RicciTables::new(geom)?, x)
}

/// [`ricci_series`] with precomputed tables, over any coefficient field.
pub fn ricci_series_with<T: Coeff>(
    geom: &GeometrySpec,
    tables: &RicciTables<T>,
    x: &TensorSeries<T>,
) -> Result<TensorSeries<T>> {
    let g: Vec<ScalarSeries<T>> = x
        .parts()
        .iter()
        .enumerate()
        .map(|(s, p)| {
            if geom.is_plus(s) {
                p.shift(2)
            } else {
                p.clone()
            }
        })
        .collect();
    let g_inv = g
        .iter()
        .enumerate()
        .map(|(s, p)| {
            p.invert().map_err(|_| Error::SingularMetric {
                summand: s,
                value: p.coeffs().first().map_or(0.0, T::to_f64),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = ScalarSeries::one(x.order());
    let r = TensorSeries::new(tables.eval(&g, &g_inv, &unit));

    let scale = [-2, 0]
        .iter()
        .filter_map(|&e| r.coeff(e).ok())
        .flatten()
        .fold(1.0f64, |m, c| m.max(c.to_f64().abs()));
    // With a linear term in x the t⁻¹ coefficient is the first variation of
    // the pole along it, so parity can only be asserted for x₁ = 0.
    let linear_free = x.coeff(1).map_or(true, |c| c.iter().all(T::is_zero));
    if let (true, Ok(odd)) = (linear_free, r.coeff(-1)) {
        let size = odd.iter().fold(0.0f64, |m, c| m.max(c.to_f64().abs())) / scale;
        if size > ODD_TOL {
            return Err(Error::OddRicciTerm { size });
        }
    }
    Ok(r)
}

/// Splits a Laurent series with `lead ≥ -2` into its `t⁻²` and `t⁻¹`
/// coefficients and the Taylor remainder.
pub fn laurent_split<T: Coeff>(s: &TensorSeries<T>) -> Result<(Vec<T>, Vec<T>, TensorSeries<T>)> {
    if s.lead() < -2 {
        return Err(Error::LeadTooSingular { lead: s.lead() });
    }
    let a = s
        .parts()
        .iter()
        .map(|p| p.coeff(-2))
        .collect::<Result<Vec<_>>>()?;
    let b = s
        .parts()
        .iter()
        .map(|p| p.coeff(-1))
        .collect::<Result<Vec<_>>>()?;
    let regular = s.map(|p| {
        let order = p.order();
        ScalarSeries::taylor(
            (0..=order)
                .map(|e| p.coeff(e).expect("within order"))
                .collect(),
            order,
        )
    });
    Ok((a, b, regular))
}

/// `r_sing(x)`: the `t⁻²` coefficient of the Ricci endomorphism of
/// `t² x₊ ⊕ x₋` for constant `x`.
pub fn singular_ricci(
    geom: &GeometrySpec,
    tables: &RicciTables<f64>,
    x: &DiagonalTensor,
) -> Result<DiagonalTensor> {
    let xs = TensorSeries::constant(x.values(), 2);
    let (a, _, _) = laurent_split(&ricci_series_with(geom, tables, &xs)?)?;
    Ok(DiagonalTensor::new(a))
}
