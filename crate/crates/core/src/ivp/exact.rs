//! The recursion in rational arithmetic, for geometries whose recursion
//! operators are all invertible.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::solve::order_residuals;
use crate::error::{Error, Result};
use crate::geometry::{casimir_on_diagonals, GeometrySpec, RicciTables};
use crate::series::{Coeff, Rational};

/// Raw Taylor coefficients: `x(t) = Σ x[m] t^m`, `u(t) = Σ u[m] t^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactJet {
    pub x: Vec<Vec<Rational>>,
    pub u: Vec<Rational>,
}

fn int(v: usize) -> Rational {
    Rational::from_i64(v as i64)
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc.mul(&int(i)))
}

fn lm_exact(geom: &GeometrySpec, casimir: &[Vec<Rational>], m: usize) -> Vec<Vec<Rational>> {
    let n = geom.n_summands();
    let (mr, k) = (int(m), int(geom.k()));
    let m2 = int(m + 2);
    let minus = geom.minus_summands();
    let d = geom.dims();
    let mut a = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        if geom.is_plus(i) {
            let diag = mr.mul(&Rational::one().add(&k.add(&Rational::one()).div(&m2)));
            a[i][i] = a[i][i].add(&diag);
            for j in 0..n {
                let w = if geom.is_plus(j) {
                    int(4).div(&m2)
                } else {
                    Rational::zero()
                };
                a[i][j] = a[i][j].add(&w.add(&Rational::one()).mul(&int(d[j])));
            }
        } else {
            let pi = minus.iter().position(|&s| s == i).expect("minus summand");
            a[i][i] = a[i][i].add(&mr.add(&Rational::one()).add(&k));
            for (pj, &j) in minus.iter().enumerate() {
                a[i][j] = a[i][j].sub(&casimir[pi][pj].div(&m2));
            }
        }
    }
    a
}

/// Gaussian elimination; `None` if the matrix is singular.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].div(&a[col][col]);
                for c in col..n {
                    let v = a[col][c].mul(&f);
                    a[r][c] = a[r][c].sub(&v);
                }
                let v = b[col].mul(&f);
                b[r] = b[r].sub(&v);
            }
        }
    }
    Some((0..n).map(|i| b[i].div(&a[i][i])).collect())
}

/// Exact jet through `x_order` and `u_{order+1}`. Fails if some recursion
/// operator has a kernel, since then the jet is not determined by the data.
pub fn solve_series_exact(
    geom: &GeometrySpec,
    epsilon: Rational,
    l1: &[Rational],
    u2: Rational,
    order: usize,
) -> Result<ExactJet> {
    if l1.len() != geom.n_summands() || order < 2 {
        return Err(Error::InvalidData(
            "L1 length or series order out of range".into(),
        ));
    }
    let tables = RicciTables::new(geom)?.convert::<Rational>();
    let cas = casimir_on_diagonals(geom)?;
    let casimir: Vec<Vec<Rational>> = (0..cas.rows())
        .map(|i| {
            (0..cas.cols())
                .map(|j| Rational::from_f64(cas[(i, j)]))
                .collect()
        })
        .collect();
    let two = int(2);
    let mut x = vec![
        vec![Rational::one(); geom.n_summands()],
        l1.iter().map(|v| v.mul(&two)).collect(),
    ];
    let mut u = vec![Rational::zero(), Rational::zero(), u2.div(&two)];
    for m in 0..=order - 2 {
        let (ex, eu) = order_residuals(geom, &tables, &epsilon, &x, &u, m)?;
        let scale = two.mul(&factorial(m + 1)).neg();
        let d: Vec<Rational> = ex.iter().map(|v| v.mul(&scale)).collect();
        let xm = solve_linear(lm_exact(geom, &casimir, m), d).ok_or_else(|| {
            Error::InvalidData(format!("recursion operator at order {m} has a kernel"))
        })?;
        let norm = factorial(m + 2);
        x.push(xm.iter().map(|v| v.div(&norm)).collect());

        let ltilde = int(m + 1)
            .sub(&int(geom.k()).div(&int(m + 2)))
            .add(&int(geom.k()));
        let um = factorial(m + 1).neg().mul(&eu).div(&ltilde);
        u.push(um.div(&factorial(m + 3)));
    }
    Ok(ExactJet { x, u })
}
