use alloc::vec;
use alloc::vec::Vec;

use super::spec::{Block, GeometrySpec};
use crate::error::{Error, Result};

/// A `K`-invariant symmetric endomorphism of `𝔭` that acts as a scalar on
/// each irreducible summand.
///
/// All arithmetic is componentwise, so products commute.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalTensor {
    values: Vec<f64>,
}

impl DiagonalTensor {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n],
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn identity(geom: &GeometrySpec) -> Self {
        Self::constant(geom.n_summands(), 1.0)
    }

    /// `𝕀₊`: identity on the Plus block, zero on the Minus block.
    pub fn plus_identity(geom: &GeometrySpec) -> Self {
        Self::new(
            (0..geom.n_summands())
                .map(|s| if geom.is_plus(s) { 1.0 } else { 0.0 })
                .collect(),
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, s: usize) -> f64 {
        self.values[s]
    }

    /// Endomorphism trace, `Σ d_i ξ_i`.
    pub fn trace(&self, geom: &GeometrySpec) -> f64 {
        self.values
            .iter()
            .zip(geom.summands())
            .map(|(v, s)| v * s.dim as f64)
            .sum()
    }

    pub fn restrict(&self, geom: &GeometrySpec, block: Block) -> Self {
        Self::new(
            self.values
                .iter()
                .zip(geom.summands())
                .map(|(&v, s)| if s.block == block { v } else { 0.0 })
                .collect(),
        )
    }

    pub fn plus(&self, geom: &GeometrySpec) -> Self {
        self.restrict(geom, Block::Plus)
    }

    pub fn minus(&self, geom: &GeometrySpec) -> Self {
        self.restrict(geom, Block::Minus)
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "diagonal tensors over different geometries"
        );
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    pub fn invert(&self) -> Result<Self> {
        for (s, &v) in self.values.iter().enumerate() {
            if v == 0.0 {
                return Err(Error::SingularMetric {
                    summand: s,
                    value: v,
                });
            }
        }
        Ok(Self::new(self.values.iter().map(|v| 1.0 / v).collect()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}
