//! Free directions of the series recursion, order by order.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{casimir_on_diagonals, casimir_spectrum, DiagonalTensor, GeometrySpec};
use crate::ivp::{build_lm, kernel_basis};
use crate::linalg::{svd, symmetric_eigen, Matrix};

pub const DEFAULT_SCAN_LIMIT: usize = 50;

const SUPPORT_TOL: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-9;

/// Kernel of the order-`m` recursion operator.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderKernel {
    pub m: usize,
    /// Kernel directions supported on the sphere directions alone.
    pub plus_dim: usize,
    /// Rank of the kernel projected to the singular-orbit directions.
    pub minus_dim: usize,
    /// Singular-orbit summands carrying the kernel, and sphere summands when
    /// the kernel has a pure sphere part.
    pub triggering: Vec<usize>,
    pub basis: Vec<DiagonalTensor>,
}

impl OrderKernel {
    pub fn dim(&self) -> usize {
        self.plus_dim + self.minus_dim
    }
}

/// An eigenvalue `λ` of the Casimir action and the order `m ≥ 0` (if any)
/// solving `λ = (m+1+k)(m+2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirRoot {
    pub eigenvalue: f64,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndeterminacyReport {
    pub scan_limit: usize,
    pub per_order: Vec<OrderKernel>,
    pub roots: Vec<CasimirRoot>,
    /// `m₀` with `2m₀ = m + 2` for the last even `m` carrying a kernel (0 if none).
    pub m0: usize,
    /// `m₁` with `2m₁ + 1 = m + 2` for the last odd `m` carrying a kernel (0 if none).
    pub m1: usize,
    /// Two singular-orbit summands share dimension and Casimir eigenvalue,
    /// so the scalar model may undercount.
    pub multiplicity_warning: bool,
}

impl IndeterminacyReport {
    /// Orders with a nontrivial kernel.
    pub fn nonzero(&self) -> impl Iterator<Item = &OrderKernel> {
        self.per_order.iter().filter(|k| k.dim() > 0)
    }

    pub fn plus_total(&self) -> usize {
        self.per_order.iter().map(|k| k.plus_dim).sum()
    }

    pub fn minus_total(&self) -> usize {
        self.per_order.iter().map(|k| k.minus_dim).sum()
    }

    pub fn last_kernel_order(&self) -> Option<usize> {
        self.nonzero().map(|k| k.m).last()
    }
}

/// Eigenvalues of the Casimir action on diagonal tensors of the singular
/// orbit, which is self-adjoint for `tr(ξζ)`.
pub fn casimir_eigenvalues(geom: &GeometrySpec) -> Result<Vec<f64>> {
    let c = casimir_on_diagonals(geom)?;
    let d: Vec<f64> = geom
        .minus_summands()
        .iter()
        .map(|&s| geom.summand(s).dim as f64)
        .collect();
    let n = d.len();
    let sym = Matrix::from_fn(n, n, |i, j| {
        let a = c[(i, j)] * libm::sqrt(d[i] / d[j]);
        let b = c[(j, i)] * libm::sqrt(d[j] / d[i]);
        0.5 * (a + b)
    });
    Ok(symmetric_eigen(&sym).0)
}

/// Nonnegative integer solution of `(m+1+k)(m+2) = λ`.
pub fn root_order(k: usize, eigenvalue: f64) -> Option<usize> {
    let kf = k as f64;
    // m² + (k+3) m + 2(k+1) - λ = 0
    let b = kf + 3.0;
    let c = 2.0 * (kf + 1.0) - eigenvalue;
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return None;
    }
    let m = 0.5 * (-b + libm::sqrt(disc));
    let mr = libm::round(m);
    let predicted = (mr + 1.0 + kf) * (mr + 2.0);
    (mr >= 0.0 && (predicted - eigenvalue).abs() <= ROOT_TOL * eigenvalue.abs().max(1.0))
        .then_some(mr as usize)
}

fn rank(vectors: &[Vec<f64>]) -> usize {
    if vectors.is_empty() || vectors[0].is_empty() {
        return 0;
    }
    let m = Matrix::from_fn(vectors[0].len(), vectors.len(), |i, j| vectors[j][i]);
    svd(&m).rank(SUPPORT_TOL)
}

fn order_kernel(geom: &GeometrySpec, m: usize) -> Result<OrderKernel> {
    let basis = kernel_basis(geom, m)?;
    let minus = geom.minus_summands();
    let projected: Vec<Vec<f64>> = basis
        .iter()
        .map(|v| minus.iter().map(|&s| v.get(s)).collect())
        .collect();
    let minus_dim = rank(&projected);
    let supported = |s: usize| basis.iter().any(|v| v.get(s).abs() > SUPPORT_TOL);
    let plus_dim = basis.len() - minus_dim;
    let triggering = (0..geom.n_summands())
        .filter(|&s| supported(s) && (!geom.is_plus(s) || plus_dim > 0))
        .collect();
    Ok(OrderKernel {
        m,
        plus_dim,
        minus_dim,
        triggering,
        basis,
    })
}

fn shares_eigenvalue(geom: &GeometrySpec) -> bool {
    let minus = geom.minus_summands();
    let Ok(values) = casimir_spectrum(geom) else {
        return false;
    };
    (0..minus.len()).any(|i| {
        (i + 1..minus.len()).any(|j| {
            geom.summand(minus[i]).dim == geom.summand(minus[j]).dim
                && (values[i] - values[j]).abs() <= ROOT_TOL * values[i].abs().max(1.0)
        })
    })
}

/// Kernel dimensions of the recursion operators for `m = 0..=scan_limit`.
pub fn kernel_scan(geom: &GeometrySpec, scan_limit: usize) -> Result<IndeterminacyReport> {
    let per_order = (0..=scan_limit)
        .map(|m| order_kernel(geom, m))
        .collect::<Result<Vec<_>>>()?;
    let roots: Vec<CasimirRoot> = casimir_eigenvalues(geom)?
        .into_iter()
        .map(|eigenvalue| CasimirRoot {
            eigenvalue,
            order: root_order(geom.k(), eigenvalue),
        })
        .collect();
    for k in &per_order {
        assert!(
            k.m == 0 || k.plus_dim == 0,
            "sphere-direction kernel at order {}",
            k.m
        );
    }
    let last_even = per_order
        .iter()
        .filter(|k| k.dim() > 0 && k.m % 2 == 0)
        .map(|k| k.m)
        .next_back();
    let last_odd = per_order
        .iter()
        .filter(|k| k.dim() > 0 && k.m % 2 == 1)
        .map(|k| k.m)
        .next_back();
    Ok(IndeterminacyReport {
        scan_limit,
        per_order,
        roots,
        m0: last_even.map_or(0, |m| (m + 2) / 2),
        m1: last_odd.map_or(0, |m| m.div_ceil(2)),
        multiplicity_warning: shares_eigenvalue(geom),
    })
}

/// Sum of kernel dimensions. Fails if the last scanned order still has a
/// kernel.
pub fn indeterminacy_total(report: &IndeterminacyReport) -> Result<usize> {
    if report.per_order.last().is_some_and(|k| k.dim() > 0) {
        return Err(Error::StabilizationNotReached {
            m_max: report.scan_limit,
        });
    }
    Ok(report.per_order.iter().map(OrderKernel::dim).sum())
}

/// Eigenvalue of the order-`m` operator on a Minus direction with Casimir
/// eigenvalue `λ`: `(m+1+k) - λ/(m+2)`.
pub fn minus_eigenvalue(k: usize, m: usize, eigenvalue: f64) -> f64 {
    (m + 1 + k) as f64 - eigenvalue / (m + 2) as f64
}

/// Checks that every reported Minus kernel sits at a root of the Casimir
/// condition and that none appear past the largest root.
pub fn kernels_match_roots(geom: &GeometrySpec, report: &IndeterminacyReport) -> Result<bool> {
    let root_orders: Vec<usize> = report.roots.iter().filter_map(|r| r.order).collect();
    let last_root = root_orders.iter().copied().max();
    for k in report.nonzero() {
        if k.minus_dim > 0 {
            let expected = report.roots.iter().filter(|r| r.order == Some(k.m)).count();
            if expected != k.minus_dim || last_root.is_none_or(|r| k.m > r) {
                return Ok(false);
            }
            let op = build_lm(geom, k.m)?;
            for v in &k.basis {
                if op.apply(v).max_abs() > ROOT_TOL * op.matrix.max_abs().max(1.0) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sphere, stiefel, stiefel_codim2, torus, Block, SummandSpec};
    use alloc::vec;

    #[test]
    fn flat_skeleton_has_no_kernels() {
        let g = torus(&[2, 1, 3]).unwrap();
        let r = kernel_scan(&g, DEFAULT_SCAN_LIMIT).unwrap();
        assert_eq!(indeterminacy_total(&r).unwrap(), 0);
        assert_eq!(r.minus_total(), 0);
    }

    #[test]
    fn two_sphere_summands_give_a_plus_freedom() {
        let g = GeometrySpec::new(
            3,
            vec![
                SummandSpec::new("a", 2, Block::Plus),
                SummandSpec::new("b", 1, Block::Plus),
            ],
            vec![Some(0), Some(0), Some(1)],
            vec![],
        )
        .unwrap();
        let r = kernel_scan(&g, 10).unwrap();
        assert_eq!((r.plus_total(), r.minus_total()), (1, 0));
        assert_eq!(r.last_kernel_order(), Some(0));
    }

    #[test]
    fn planted_eigenvalue_triggers_its_order() {
        // k = 1, λ = (2 + 1 + 1)(2 + 2) = 16 gives a kernel at m = 2.
        let g = GeometrySpec::new(
            1,
            vec![
                SummandSpec::new("sphere", 1, Block::Plus),
                SummandSpec::new("planted", 2, Block::Minus).with_casimir(16.0),
            ],
            vec![Some(0), Some(1), Some(1)],
            vec![],
        )
        .unwrap();
        let r = kernel_scan(&g, 20).unwrap();
        let orders: Vec<usize> = r.nonzero().map(|k| k.m).collect();
        assert_eq!(orders, [2]);
        assert_eq!(r.per_order[2].triggering, [1]);
        assert_eq!((r.m0, r.m1), (2, 0));
        assert!(kernels_match_roots(&g, &r).unwrap());
        assert_eq!(root_order(1, 16.0), Some(2));
    }

    #[test]
    fn persistent_kernel_is_reported() {
        let g = GeometrySpec::new(
            1,
            vec![
                SummandSpec::new("sphere", 1, Block::Plus),
                SummandSpec::new("planted", 1, Block::Minus).with_casimir(36.0),
            ],
            vec![Some(0), Some(1)],
            vec![],
        )
        .unwrap();
        // λ = 36 = (4 + 1 + 1)(4 + 2) is a root at m = 4.
        let r = kernel_scan(&g, 4).unwrap();
        assert!(matches!(
            indeterminacy_total(&r),
            Err(Error::StabilizationNotReached { m_max: 4 })
        ));
        assert_eq!(
            indeterminacy_total(&kernel_scan(&g, 6).unwrap()).unwrap(),
            1
        );
        assert_eq!(kernel_scan(&g, 6).unwrap().m0, 3);
    }

    #[test]
    fn stiefel_kernel_sits_on_the_singular_orbit() {
        let g = stiefel(2).unwrap();
        let r = kernel_scan(&g, DEFAULT_SCAN_LIMIT).unwrap();
        assert_eq!(indeterminacy_total(&r).unwrap(), 1);
        assert_eq!((r.plus_total(), r.minus_total()), (0, 1));
        assert!(kernels_match_roots(&g, &r).unwrap());
        let eig = casimir_eigenvalues(&g).unwrap();
        assert!(
            (eig[0]).abs() < 1e-12 && (eig[1] - 6.0).abs() < 1e-12,
            "{eig:?}"
        );
        assert!(minus_eigenvalue(2, 0, 6.0).abs() < 1e-15);
    }

    #[test]
    fn codim2_and_sphere() {
        let r = kernel_scan(&stiefel_codim2(2).unwrap(), 20).unwrap();
        assert_eq!((r.plus_total(), r.minus_total()), (0, 1));
        assert_eq!(
            indeterminacy_total(&kernel_scan(&sphere(3).unwrap(), 20).unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn reordering_summands_does_not_change_the_report() {
        let g = stiefel(3).unwrap();
        let h = g.permute_summands(&[2, 0, 1]).unwrap();
        let (a, b) = (kernel_scan(&g, 20).unwrap(), kernel_scan(&h, 20).unwrap());
        for (x, y) in a.per_order.iter().zip(&b.per_order) {
            assert_eq!((x.plus_dim, x.minus_dim), (y.plus_dim, y.minus_dim));
        }
        assert_eq!((a.m0, a.m1), (b.m0, b.m1));
    }

    #[test]
    fn multiplicity_is_flagged() {
        let g = GeometrySpec::new(
            1,
            vec![
                SummandSpec::new("sphere", 1, Block::Plus),
                SummandSpec::new("a", 1, Block::Minus),
                SummandSpec::new("b", 1, Block::Minus),
            ],
            vec![Some(0), Some(1), Some(2)],
            vec![],
        )
        .unwrap();
        assert!(kernel_scan(&g, 5).unwrap().multiplicity_warning);
        assert!(
            !kernel_scan(&stiefel(2).unwrap(), 5)
                .unwrap()
                .multiplicity_warning
        );
    }

    proptest::proptest! {
        #[test]
        fn planted_roots_are_found_at_their_order(k in 1usize..8, m in 0usize..12, dim in 1usize..4) {
            let lambda = ((m + 1 + k) * (m + 2)) as f64;
            proptest::prop_assert_eq!(root_order(k, lambda), Some(m));
            let mut summand_of = vec![Some(0); k];
            summand_of.extend(core::iter::repeat_n(Some(1), dim));
            let g = GeometrySpec::new(
                k,
                vec![
                    SummandSpec::new("sphere", k, Block::Plus),
                    SummandSpec::new("planted", dim, Block::Minus).with_casimir(lambda),
                ],
                summand_of,
                vec![],
            )
            .unwrap();
            let r = kernel_scan(&g, 16).unwrap();
            let orders: Vec<usize> = r.nonzero().map(|o| o.m).collect();
            proptest::prop_assert_eq!(orders, vec![m]);
            proptest::prop_assert!(kernels_match_roots(&g, &r).unwrap());
        }
    }
}
