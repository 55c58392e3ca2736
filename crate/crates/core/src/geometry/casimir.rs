//! Casimir operators of the sphere directions acting on `𝔭₋`.
//!
//! With `{U_α}` an orthonormal basis of `𝔭₊` and `J_α = ad(U_α)|𝔭₋`, the
//! Casimir on `𝔭₋` is `-Σ J_α²`. The recursion operators see its action on
//! `End(𝔭₋)` by conjugation, `ξ ↦ -Σ [J_α, [J_α, ξ]]`, which on diagonal
//! tensors becomes a matrix over the Minus summands.

use alloc::vec::Vec;

use super::spec::{Block, GeometrySpec};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

const SCALAR_TOL: f64 = 1e-10;

fn sphere_actions(geom: &GeometrySpec) -> (Vec<usize>, Vec<Matrix>) {
    let minus = geom.basis_in_block(Block::Minus);
    let plus = geom.basis_in_block(Block::Plus);
    let js = plus
        .iter()
        .map(|&u| {
            Matrix::from_fn(minus.len(), minus.len(), |z, w| {
                geom.c(u, minus[w], minus[z])
            })
        })
        .collect();
    (minus, js)
}

/// `-Σ_α ad(U_α)²` on `𝔭₋`, in the `𝔭₋` part of the adapted basis.
pub fn p_minus_casimir_matrix(geom: &GeometrySpec) -> Matrix {
    let (minus, js) = sphere_actions(geom);
    let mut c = Matrix::zeros(minus.len(), minus.len());
    for j in &js {
        let j2 = j.mul(j);
        for z in 0..minus.len() {
            for w in 0..minus.len() {
                c[(z, w)] -= j2[(z, w)];
            }
        }
    }
    c
}

/// The scalar by which `-Σ ad(U_α)²` acts on each Minus summand, in the
/// order of [`GeometrySpec::minus_summands`].
pub fn casimir_spectrum(geom: &GeometrySpec) -> Result<Vec<f64>> {
    let c = p_minus_casimir_matrix(geom);
    let minus = geom.basis_in_block(Block::Minus);
    let scale = c.max_abs().max(1.0);
    let mut out = Vec::new();
    for s in geom.minus_summands() {
        let idx: Vec<usize> = (0..minus.len())
            .filter(|&z| geom.summand_of(minus[z]) == Some(s))
            .collect();
        let lambda = c[(idx[0], idx[0])];
        let mut dev: f64 = 0.0;
        for &z in &idx {
            for w in 0..minus.len() {
                let expect = if z == w { lambda } else { 0.0 };
                dev = dev.max((c[(z, w)] - expect).abs());
            }
        }
        if dev > SCALAR_TOL * scale {
            return Err(Error::NonScalarCasimir {
                summand: s,
                max_dev: dev,
            });
        }
        out.push(lambda);
    }
    Ok(out)
}

/// Conjugation action of the Casimir on diagonal tensors supported on
/// `𝔭₋`, computed from the bracket tensor. Rows and columns follow
/// [`GeometrySpec::minus_summands`].
pub fn end_casimir_matrix(geom: &GeometrySpec) -> Result<Matrix> {
    let (minus, js) = sphere_actions(geom);
    let summands = geom.minus_summands();
    let pos = |z: usize| {
        let s = geom.summand_of(minus[z]).expect("p basis");
        summands
            .iter()
            .position(|&t| t == s)
            .expect("minus summand")
    };
    let nb = minus.len();
    let mut out = Matrix::zeros(summands.len(), summands.len());
    let mut dev: f64 = 0.0;
    let mut worst = 0;
    for (col, &s) in summands.iter().enumerate() {
        let xi: Vec<f64> = (0..nb)
            .map(|z| {
                if geom.summand_of(minus[z]) == Some(s) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        // -Σ [J, [J, ξ]] = Σ (2 J ξ J - J² ξ - ξ J²) for diagonal ξ.
        let mut image = Matrix::zeros(nb, nb);
        for j in &js {
            let j2 = j.mul(j);
            for z in 0..nb {
                for w in 0..nb {
                    let mut v = -j2[(z, w)] * xi[w] - xi[z] * j2[(z, w)];
                    for q in 0..nb {
                        v += 2.0 * j[(z, q)] * xi[q] * j[(q, w)];
                    }
                    image[(z, w)] += v;
                }
            }
        }
        let mut seen: Vec<Option<f64>> = alloc::vec![None; summands.len()];
        for z in 0..nb {
            for w in 0..nb {
                if z != w && image[(z, w)].abs() > dev {
                    dev = image[(z, w)].abs();
                    worst = s;
                }
            }
            let row = pos(z);
            match seen[row] {
                None => seen[row] = Some(image[(z, z)]),
                Some(v) => {
                    if (v - image[(z, z)]).abs() > dev {
                        dev = (v - image[(z, z)]).abs();
                        worst = s;
                    }
                }
            }
        }
        for (row, v) in seen.into_iter().enumerate() {
            out[(row, col)] = v.unwrap_or(0.0);
        }
    }
    if dev > SCALAR_TOL * out.max_abs().max(1.0) {
        return Err(Error::NonScalarCasimir {
            summand: worst,
            max_dev: dev,
        });
    }
    Ok(out)
}

/// The Casimir action used by the recursion operators: the declared
/// `casimir_eigenvalue`s when every Minus summand carries one, otherwise
/// [`end_casimir_matrix`].
pub fn casimir_on_diagonals(geom: &GeometrySpec) -> Result<Matrix> {
    let minus = geom.minus_summands();
    let declared: Option<Vec<f64>> = minus
        .iter()
        .map(|&s| geom.summand(s).casimir_eigenvalue)
        .collect();
    match declared {
        Some(values) if !values.is_empty() => {
            Ok(Matrix::from_fn(values.len(), values.len(), |i, j| {
                if i == j {
                    values[i]
                } else {
                    0.0
                }
            }))
        }
        _ => end_casimir_matrix(geom),
    }
}
