use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{DiagonalTensor, GeometrySpec};

const TRACE_TOL: f64 = 1e-12;

/// Data of the singular initial value problem: the soliton constant, the
/// second fundamental form of the singular orbit, `ü(0)`, and coefficients
/// for the free directions of the recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    epsilon: f64,
    l1: DiagonalTensor,
    u2: f64,
    kernel_params: BTreeMap<usize, Vec<f64>>,
    order: usize,
}

impl InitialData {
    /// Rejects `L₁` with Plus components or nonzero trace; the singular
    /// orbit must be minimal.
    pub fn new(
        geom: &GeometrySpec,
        epsilon: f64,
        l1: DiagonalTensor,
        u2: f64,
        order: usize,
    ) -> Result<Self> {
        if l1.len() != geom.n_summands() {
            return Err(Error::InvalidData(format!(
                "L1 has {} entries, geometry has {} summands",
                l1.len(),
                geom.n_summands()
            )));
        }
        for s in geom.plus_summands() {
            if l1.get(s) != 0.0 {
                return Err(Error::InvalidData(format!(
                    "L1 must vanish on the sphere directions; summand {} has {}",
                    geom.summand(s).label,
                    l1.get(s)
                )));
            }
        }
        let tr = l1.trace(geom);
        if tr.abs() > TRACE_TOL * l1.max_abs().max(1.0) {
            return Err(Error::InvalidData(format!(
                "tr L1 = {tr:e}: the singular orbit must be minimal"
            )));
        }
        if !(epsilon.is_finite() && u2.is_finite() && l1.values().iter().all(|v| v.is_finite())) {
            return Err(Error::InvalidData("non-finite initial data".into()));
        }
        if order < 2 {
            return Err(Error::InvalidData("series order must be at least 2".into()));
        }
        Ok(Self {
            epsilon,
            l1,
            u2,
            kernel_params: BTreeMap::new(),
            order,
        })
    }

    /// L₁ = 0.
    pub fn totally_geodesic(
        geom: &GeometrySpec,
        epsilon: f64,
        u2: f64,
        order: usize,
    ) -> Result<Self> {
        Self::new(
            geom,
            epsilon,
            DiagonalTensor::zeros(geom.n_summands()),
            u2,
            order,
        )
    }

    /// Coefficients, over [`kernel_basis`](super::kernel_basis)`(m)`, added to
    /// `x_{m+2}`.
    pub fn with_kernel_params(mut self, m: usize, coeffs: Vec<f64>) -> Self {
        self.kernel_params.insert(m, coeffs);
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn l1(&self) -> &DiagonalTensor {
        &self.l1
    }

    pub fn u2(&self) -> f64 {
        self.u2
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kernel_params(&self) -> &BTreeMap<usize, Vec<f64>> {
        &self.kernel_params
    }
}
