//! Ricci curvature of diagonal invariant metrics on `G/K`, `G` compact.
//!
//! For `X, Y ∈ 𝔭` and any basis `{X_i}` of `𝔭`,
//!
//! ```text
//! Ric(X,Y) = -½ tr_𝔤(ad X ad Y) - ½ Σ g([X,X_i]_𝔭, [Y,X_j]_𝔭) g^{ij}
//!            + ¼ Σ g(X,[X_i,X_p]) g(Y,[X_j,X_q]) g^{ij} g^{pq}.
//! ```
//!
//! [`ricci_form`] evaluates this sum literally. [`RicciTables`] rewrites it,
//! once per geometry, as a Laurent polynomial in the metric scalars so that
//! it can be evaluated over any coefficient algebra (plain floats or
//! truncated series in `t`).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::spec::GeometrySpec;
use super::tensor::DiagonalTensor;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::series::{Algebra, Coeff};

const DIAG_TOL: f64 = 1e-10;

fn check_positive(x: &DiagonalTensor) -> Result<()> {
    for (s, &v) in x.values().iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::SingularMetric {
                summand: s,
                value: v,
            });
        }
    }
    Ok(())
}

/// `tr_𝔤(ad X_a ad X_b)`.
fn killing(geom: &GeometrySpec, a: usize, b: usize) -> f64 {
    let n = geom.basis_dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            sum += geom.c(a, j, i) * geom.c(b, i, j);
        }
    }
    sum
}

/// The Ricci form `Ric(X_a, X_b)` on the `𝔭`-basis (rows/cols follow
/// [`GeometrySpec::p_basis`]) for the metric with scalars `metric`.
pub fn ricci_form(geom: &GeometrySpec, metric: &DiagonalTensor) -> Result<Matrix> {
    check_positive(metric)?;
    let p = geom.p_basis();
    let g = |i: usize| metric.get(geom.summand_of(i).expect("p basis"));
    let mut ric = Matrix::zeros(p.len(), p.len());
    for (ia, &a) in p.iter().enumerate() {
        for (ib, &b) in p.iter().enumerate() {
            let mut val = -0.5 * killing(geom, a, b);
            for &i in &p {
                for &c in &p {
                    val -= 0.5 * geom.c(a, i, c) * geom.c(b, i, c) * g(c) / g(i);
                }
            }
            for &i in &p {
                for &q in &p {
                    val += 0.25 * g(a) * geom.c(i, q, a) * g(b) * geom.c(i, q, b) / (g(i) * g(q));
                }
            }
            ric[(ia, ib)] = val;
        }
    }
    Ok(ric)
}

/// Ricci endomorphism `r` with `Ric(X,Y) = g(rX, Y)` for the diagonal metric
/// `x`, one value per summand.
pub fn ricci_endomorphism(geom: &GeometrySpec, x: &DiagonalTensor) -> Result<DiagonalTensor> {
    let ric = ricci_form(geom, x)?;
    let p = geom.p_basis();
    let scale = ric.max_abs().max(1.0);
    let mut max_dev: f64 = 0.0;
    let mut r = vec![f64::NAN; geom.n_summands()];
    for (ia, &a) in p.iter().enumerate() {
        for ib in 0..p.len() {
            if ia != ib {
                max_dev = max_dev.max(ric[(ia, ib)].abs() / scale);
            }
        }
        let s = geom.summand_of(a).expect("p basis");
        let ra = ric[(ia, ia)] / x.get(s);
        if r[s].is_nan() {
            r[s] = ra;
        } else {
            max_dev = max_dev.max((r[s] - ra).abs() / scale);
        }
    }
    if max_dev > DIAG_TOL {
        return Err(Error::NonDiagonalRicci { max_dev });
    }
    Ok(DiagonalTensor::new(r))
}

/// `Σ_i (L_i - L_Z) C^i_{Z i}` for each `Z` in the `𝔭`-basis: the divergence
/// of an invariant diagonal shape operator `L` for a diagonal metric.
/// It is the left side of the mixed (orbit, normal) soliton equation.
pub fn shape_divergence(geom: &GeometrySpec, shape: &DiagonalTensor) -> Vec<f64> {
    let p = geom.p_basis();
    let l = |i: usize| shape.get(geom.summand_of(i).expect("p basis"));
    p.iter()
        .map(|&z| p.iter().map(|&i| (l(i) - l(z)) * geom.c(z, i, i)).sum())
        .collect()
}

/// `coef · Π_σ g_σ^{exps[σ]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial<T> {
    pub exps: Vec<i32>,
    pub coef: T,
}

/// The Ricci endomorphism of a diagonal metric as a Laurent polynomial in
/// the metric scalars, one polynomial per summand.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciTables<T> {
    per_summand: Vec<Vec<Monomial<T>>>,
}

type Poly = BTreeMap<Vec<i32>, f64>;

fn accumulate(poly: &mut Poly, exps: Vec<i32>, coef: f64) {
    if coef != 0.0 {
        *poly.entry(exps).or_insert(0.0) += coef;
    }
}

fn max_poly_diff(a: &Poly, b: &Poly) -> f64 {
    let mut dev: f64 = 0.0;
    for (e, v) in a {
        dev = dev.max((v - b.get(e).copied().unwrap_or(0.0)).abs());
    }
    for (e, v) in b {
        dev = dev.max((v - a.get(e).copied().unwrap_or(0.0)).abs());
    }
    dev
}

impl RicciTables<f64> {
    /// Builds the tables and checks, structurally, that the Ricci tensor of
    /// every diagonal metric is diagonal and scalar on each summand.
    pub fn new(geom: &GeometrySpec) -> Result<Self> {
        let p = geom.p_basis();
        let ns = geom.n_summands();
        let s_of = |i: usize| geom.summand_of(i).expect("p basis");
        let unit = |s: usize, e: i32, acc: &mut Vec<i32>| acc[s] += e;

        // Ric(X_a, X_b) as a polynomial in the metric scalars.
        let ric_poly = |a: usize, b: usize| -> Poly {
            let mut poly = Poly::new();
            accumulate(&mut poly, vec![0; ns], -0.5 * killing(geom, a, b));
            for &i in &p {
                for &c in &p {
                    let coef = -0.5 * geom.c(a, i, c) * geom.c(b, i, c);
                    if coef != 0.0 {
                        let mut e = vec![0; ns];
                        unit(s_of(c), 1, &mut e);
                        unit(s_of(i), -1, &mut e);
                        accumulate(&mut poly, e, coef);
                    }
                }
            }
            for &i in &p {
                for &q in &p {
                    let coef = 0.25 * geom.c(i, q, a) * geom.c(i, q, b);
                    if coef != 0.0 {
                        let mut e = vec![0; ns];
                        unit(s_of(a), 1, &mut e);
                        unit(s_of(b), 1, &mut e);
                        unit(s_of(i), -1, &mut e);
                        unit(s_of(q), -1, &mut e);
                        accumulate(&mut poly, e, coef);
                    }
                }
            }
            poly
        };

        let mut max_dev: f64 = 0.0;
        for (ia, &a) in p.iter().enumerate() {
            for &b in &p[ia + 1..] {
                for v in ric_poly(a, b).values() {
                    max_dev = max_dev.max(v.abs());
                }
            }
        }

        let mut per_summand: Vec<Option<Poly>> = vec![None; ns];
        for &a in &p {
            let s = s_of(a);
            let mut r = Poly::new();
            for (mut e, v) in ric_poly(a, a) {
                e[s] -= 1;
                accumulate(&mut r, e, v);
            }
            match &per_summand[s] {
                None => per_summand[s] = Some(r),
                Some(prev) => max_dev = max_dev.max(max_poly_diff(prev, &r)),
            }
        }
        if max_dev > DIAG_TOL {
            return Err(Error::NonDiagonalRicci { max_dev });
        }
        let per_summand = per_summand
            .into_iter()
            .map(|poly| {
                poly.unwrap_or_default()
                    .into_iter()
                    .filter(|(_, v)| v.abs() > 1e-14)
                    .map(|(exps, coef)| Monomial { exps, coef })
                    .collect()
            })
            .collect();
        Ok(Self { per_summand })
    }
}

impl<T: Coeff> RicciTables<T> {
    pub fn monomials(&self, s: usize) -> &[Monomial<T>] {
        &self.per_summand[s]
    }

    pub fn convert<U: Coeff>(&self) -> RicciTables<U> {
        RicciTables {
            per_summand: self
                .per_summand
                .iter()
                .map(|ms| {
                    ms.iter()
                        .map(|m| Monomial {
                            exps: m.exps.clone(),
                            coef: U::from_f64(m.coef.to_f64()),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Evaluates `r` for metric scalars `g` with inverses `g_inv`, over any
    /// algebra. `unit` is the multiplicative identity of that algebra.
    pub fn eval<A: Algebra<T>>(&self, g: &[A], g_inv: &[A], unit: &A) -> Vec<A> {
        self.per_summand
            .iter()
            .map(|monomials| {
                let mut total: Option<A> = None;
                for m in monomials {
                    let mut term = unit.scale(&m.coef);
                    for (s, &e) in m.exps.iter().enumerate() {
                        let factor = if e > 0 { &g[s] } else { &g_inv[s] };
                        for _ in 0..e.unsigned_abs() {
                            term = term.mul(factor);
                        }
                    }
                    total = Some(match total {
                        None => term,
                        Some(acc) => acc.add(&term),
                    });
                }
                total.unwrap_or_else(|| unit.scale(&T::zero()))
            })
            .collect()
    }
}

impl RicciTables<f64> {
    /// Pointwise evaluation at a positive diagonal metric.
    pub fn ricci(&self, x: &DiagonalTensor) -> Result<DiagonalTensor> {
        check_positive(x)?;
        let inv: Vec<f64> = x.values().iter().map(|v| 1.0 / v).collect();
        Ok(DiagonalTensor::new(self.eval(x.values(), &inv, &1.0)))
    }
}
