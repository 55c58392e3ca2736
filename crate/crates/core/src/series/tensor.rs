use alloc::vec::Vec;

use super::coeff::Coeff;
use super::scalar::ScalarSeries;
use crate::error::Result;
use crate::geometry::{DiagonalTensor, GeometrySpec};

/// One truncated series per summand: a diagonal tensor depending on `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSeries<T = f64> {
    parts: Vec<ScalarSeries<T>>,
}

impl<T: Coeff> TensorSeries<T> {
    pub fn new(parts: Vec<ScalarSeries<T>>) -> Self {
        Self { parts }
    }

    pub fn constant(values: &[T], order: i32) -> Self {
        Self::new(
            values
                .iter()
                .map(|v| ScalarSeries::constant(v.clone(), order))
                .collect(),
        )
    }

    /// `Σ_j X_j t^j` from per-order coefficient vectors `jet[j][s]`.
    pub fn from_jet(jet: &[Vec<T>], order: i32) -> Self {
        let n = jet.first().map_or(0, Vec::len);
        Self::new(
            (0..n)
                .map(|s| ScalarSeries::taylor(jet.iter().map(|x| x[s].clone()).collect(), order))
                .collect(),
        )
    }

    pub fn parts(&self) -> &[ScalarSeries<T>] {
        &self.parts
    }

    pub fn part(&self, s: usize) -> &ScalarSeries<T> {
        &self.parts[s]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn order(&self) -> i32 {
        self.parts
            .iter()
            .map(ScalarSeries::order)
            .min()
            .unwrap_or(i32::MAX)
    }

    pub fn lead(&self) -> i32 {
        self.parts.iter().map(ScalarSeries::lead).min().unwrap_or(0)
    }

    /// Coefficient vector of `t^e`.
    pub fn coeff(&self, e: i32) -> Result<Vec<T>> {
        self.parts.iter().map(|p| p.coeff(e)).collect()
    }

    pub fn map(&self, f: impl Fn(&ScalarSeries<T>) -> ScalarSeries<T>) -> Self {
        Self::new(self.parts.iter().map(f).collect())
    }

    fn zip(
        &self,
        o: &Self,
        f: impl Fn(&ScalarSeries<T>, &ScalarSeries<T>) -> ScalarSeries<T>,
    ) -> Self {
        assert_eq!(
            self.len(),
            o.len(),
            "tensor series over different geometries"
        );
        Self::new(
            self.parts
                .iter()
                .zip(&o.parts)
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, ScalarSeries::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, ScalarSeries::sub)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.zip(o, ScalarSeries::mul)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|p| p.scale(c))
    }

    /// Multiplies every component by the same scalar series.
    pub fn scale_series(&self, c: &ScalarSeries<T>) -> Self {
        self.map(|p| p.mul(c))
    }

    pub fn shift(&self, e: i32) -> Self {
        self.map(|p| p.shift(e))
    }

    pub fn derivative(&self) -> Self {
        self.map(ScalarSeries::derivative)
    }

    pub fn truncate(&self, order: i32) -> Self {
        self.map(|p| p.truncate(order))
    }

    pub fn invert(&self) -> Result<Self> {
        Ok(Self::new(
            self.parts
                .iter()
                .map(ScalarSeries::invert)
                .collect::<Result<_>>()?,
        ))
    }

    /// `Σ d_s ξ_s(t)`.
    pub fn trace(&self, geom: &GeometrySpec) -> ScalarSeries<T> {
        let order = self.order();
        let mut acc = ScalarSeries::zero(order);
        for (p, s) in self.parts.iter().zip(geom.summands()) {
            acc = acc.add(&p.scale(&T::from_i64(s.dim as i64)));
        }
        acc
    }

    /// Keeps the components with `keep[s]` and zeroes the rest.
    pub fn mask(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self::new(
            self.parts
                .iter()
                .enumerate()
                .map(|(s, p)| {
                    if keep(s) {
                        p.clone()
                    } else {
                        ScalarSeries::zero(p.order())
                    }
                })
                .collect(),
        )
    }

    pub fn plus(&self, geom: &GeometrySpec) -> Self {
        self.mask(|s| geom.is_plus(s))
    }

    pub fn minus(&self, geom: &GeometrySpec) -> Self {
        self.mask(|s| !geom.is_plus(s))
    }

    pub fn eval(&self, t: f64) -> DiagonalTensor {
        DiagonalTensor::new(self.parts.iter().map(|p| p.eval(t)).collect())
    }

    pub fn to_f64(&self) -> TensorSeries<f64> {
        TensorSeries::new(self.parts.iter().map(ScalarSeries::to_f64).collect())
    }
}
