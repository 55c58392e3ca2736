use alloc::vec::Vec;

use crate::error::Result;
use crate::geometry::{casimir_on_diagonals, DiagonalTensor, GeometrySpec, RicciTables};
use crate::linalg::{svd, Matrix};
use crate::series::singular_ricci;

/// A linear map on diagonal tensors, in summand coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub m: usize,
    pub matrix: Matrix,
}

impl OperatorMatrix {
    pub fn apply(&self, xi: &DiagonalTensor) -> DiagonalTensor {
        DiagonalTensor::new(self.matrix.mul_vec(xi.values()))
    }

    /// Largest entry coupling `from` into `to` (as Plus/Minus flags).
    pub fn block_norm(&self, geom: &GeometrySpec, to_plus: bool, from_plus: bool) -> f64 {
        let n = geom.n_summands();
        let mut out: f64 = 0.0;
        for i in (0..n).filter(|&i| geom.is_plus(i) == to_plus) {
            for j in (0..n).filter(|&j| geom.is_plus(j) == from_plus) {
                out = out.max(self.matrix[(i, j)].abs());
            }
        }
        out
    }
}

/// The order-`m` operator of the metric recursion,
///
/// ```text
/// (𝓛ξ)₊ = m(1 + (k+1)/(m+2)) ξ₊ + (4 tr ξ₊/(m+2) + tr ξ) 𝕀₊
/// (𝓛ξ)₋ = (m+1+k) ξ₋ - 𝒞ξ₋/(m+2)
/// ```
///
/// with `𝒞` the Casimir action from [`casimir_on_diagonals`].
pub fn build_lm(geom: &GeometrySpec, m: usize) -> Result<OperatorMatrix> {
    let casimir = casimir_on_diagonals(geom)?;
    Ok(build_lm_with(geom, &casimir, m))
}

pub(crate) fn build_lm_with(geom: &GeometrySpec, casimir: &Matrix, m: usize) -> OperatorMatrix {
    let n = geom.n_summands();
    let (mf, k) = (m as f64, geom.k() as f64);
    let d = geom.dims();
    let minus = geom.minus_summands();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        if geom.is_plus(i) {
            a[(i, i)] += mf * (1.0 + (k + 1.0) / (mf + 2.0));
            for j in 0..n {
                let plus_weight = if geom.is_plus(j) {
                    4.0 / (mf + 2.0)
                } else {
                    0.0
                };
                a[(i, j)] += (plus_weight + 1.0) * d[j] as f64;
            }
        } else {
            let pi = minus.iter().position(|&s| s == i).expect("minus summand");
            a[(i, i)] += mf + 1.0 + k;
            for (pj, &j) in minus.iter().enumerate() {
                a[(i, j)] -= casimir[(pi, pj)] / (mf + 2.0);
            }
        }
    }
    OperatorMatrix { m, matrix: a }
}

/// `𝓛̃_m = (m+1) - k/(m+2) + k`.
pub fn build_ltilde(k: usize, m: usize) -> f64 {
    let (mf, kf) = (m as f64, k as f64);
    (mf + 1.0) - kf / (mf + 2.0) + kf
}

const FD_STEP: f64 = 1e-6;

/// `A(x) = (1-k) x₊ + x r_sing(x)`, the `t⁻²` part of the metric equation.
pub fn singular_part(
    geom: &GeometrySpec,
    tables: &RicciTables<f64>,
    x: &DiagonalTensor,
) -> Result<DiagonalTensor> {
    let r = singular_ricci(geom, tables, x)?;
    Ok(x.plus(geom).scale(1.0 - geom.k() as f64).add(&x.mul(&r)))
}

/// `B(x, y) = -k y - tr(x⁻¹y) x₊ + u̇ x₊`, the `t⁻¹` part, at `u̇ = 0`.
pub fn simple_pole_part(
    geom: &GeometrySpec,
    x: &DiagonalTensor,
    y: &DiagonalTensor,
) -> Result<DiagonalTensor> {
    let tr = x.invert()?.mul(y).trace(geom);
    Ok(y.scale(-(geom.k() as f64)).sub(&x.plus(geom).scale(tr)))
}

/// Central difference of `f` at `base` along each summand direction.
pub(crate) fn jacobian_fd(
    n: usize,
    base: &DiagonalTensor,
    mut f: impl FnMut(&DiagonalTensor) -> Result<DiagonalTensor>,
) -> Result<Matrix> {
    let mut jac = Matrix::zeros(n, n);
    for j in 0..n {
        let mut up = base.clone();
        let mut down = base.clone();
        up.values_mut()[j] += FD_STEP;
        down.values_mut()[j] -= FD_STEP;
        let diff = f(&up)?.sub(&f(&down)?).scale(0.5 / FD_STEP);
        for i in 0..n {
            jac[(i, j)] = diff.get(i);
        }
    }
    Ok(jac)
}

/// `𝓛_m = (m+1) I - (2/(m+2)) (dA)_𝕀 - (∂_y B)_{(𝕀, b)}` by finite
/// differences of the series-extracted singular parts.
pub fn build_lm_fd(geom: &GeometrySpec, b: &DiagonalTensor, m: usize) -> Result<OperatorMatrix> {
    let tables = RicciTables::new(geom)?;
    let n = geom.n_summands();
    let id = DiagonalTensor::identity(geom);
    let da = jacobian_fd(n, &id, |x| singular_part(geom, &tables, x))?;
    let dby = jacobian_fd(n, b, |y| simple_pole_part(geom, &id, y))?;
    let mf = m as f64;
    let matrix = Matrix::from_fn(n, n, |i, j| {
        let diag = if i == j { mf + 1.0 } else { 0.0 };
        diag - 2.0 / (mf + 2.0) * da[(i, j)] - dby[(i, j)]
    });
    Ok(OperatorMatrix { m, matrix })
}

/// `𝓛 W^{-1/2}` with `W = diag(d_i)`, whose SVD gives trace-orthonormal
/// kernel vectors and minimum-norm solutions.
pub(crate) fn weighted(geom: &GeometrySpec, op: &OperatorMatrix) -> (Matrix, Vec<f64>) {
    let w: Vec<f64> = geom
        .dims()
        .iter()
        .map(|&d| 1.0 / libm::sqrt(d as f64))
        .collect();
    let n = w.len();
    (Matrix::from_fn(n, n, |i, j| op.matrix[(i, j)] * w[j]), w)
}

pub const KERNEL_TOL: f64 = 1e-9;

/// Basis of `ker 𝓛_m`, orthonormal for `⟨ξ, ζ⟩ = tr(ξζ) = Σ d_i ξ_i ζ_i`.
pub fn kernel_basis(geom: &GeometrySpec, m: usize) -> Result<Vec<DiagonalTensor>> {
    Ok(kernel_of(geom, &build_lm(geom, m)?))
}

pub(crate) fn kernel_of(geom: &GeometrySpec, op: &OperatorMatrix) -> Vec<DiagonalTensor> {
    let (aw, w) = weighted(geom, op);
    if aw.rows() == 0 {
        return Vec::new();
    }
    svd(&aw)
        .null_space(KERNEL_TOL)
        .into_iter()
        .map(|v| DiagonalTensor::new(v.iter().zip(&w).map(|(a, b)| a * b).collect()))
        .collect()
}
