use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::data::InitialData;
use super::equations::{tt_equation, u_equation, x_equation};
use super::operators::{
    build_lm_with, build_ltilde, jacobian_fd, simple_pole_part, singular_part, weighted, KERNEL_TOL,
};
use crate::error::{Error, Result};
use crate::geometry::{casimir_on_diagonals, DiagonalTensor, GeometrySpec, RicciTables};
use crate::linalg::{norm, svd};
use crate::series::{Coeff, ScalarSeries, TensorSeries};

const INITIAL_TOL: f64 = 1e-8;
const CONSISTENCY_TOL: f64 = 1e-8;
const PARITY_TOL: f64 = 1e-9;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// The four solvability conditions at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditionReport {
    /// `max |A(𝕀)|`.
    pub singular_part: f64,
    /// `max |2 (dA)_𝕀 · L₁ + B(𝕀, L₁)|`.
    pub first_order: f64,
    /// `|Ã(0)|`.
    pub scalar_singular_part: f64,
    /// `|(dÃ) ü(0) + B̃(0, ü(0))|`.
    pub scalar_first_order: f64,
}

impl InitialConditionReport {
    pub fn max(&self) -> f64 {
        self.singular_part
            .max(self.first_order)
            .max(self.scalar_singular_part)
            .max(self.scalar_first_order)
    }

    pub fn passed(&self) -> bool {
        self.max() <= INITIAL_TOL
    }
}

/// Evaluates the solvability conditions. Fails with
/// [`Error::InitialConditionViolated`] naming the first offender.
pub fn check_initial_conditions(
    geom: &GeometrySpec,
    data: &InitialData,
) -> Result<InitialConditionReport> {
    let tables = RicciTables::new(geom)?;
    initial_report(geom, &tables, data).and_then(|r| {
        for (name, v) in [
            ("A(I)", r.singular_part),
            ("2 dA.L1 + B(I, L1)", r.first_order),
            ("A~(0)", r.scalar_singular_part),
            ("dA~.u2 + B~(0, u2)", r.scalar_first_order),
        ] {
            if !(v <= INITIAL_TOL) {
                return Err(Error::InitialConditionViolated {
                    quantity: name.into(),
                    value: v,
                });
            }
        }
        Ok(r)
    })
}

fn initial_report(
    geom: &GeometrySpec,
    tables: &RicciTables<f64>,
    data: &InitialData,
) -> Result<InitialConditionReport> {
    let n = geom.n_summands();
    let id = DiagonalTensor::identity(geom);
    let b = data.l1();
    let a0 = singular_part(geom, tables, &id)?;
    let da = jacobian_fd(n, &id, |x| singular_part(geom, tables, x))?;
    let da_b = DiagonalTensor::new(da.mul_vec(b.values()));
    let first = da_b.scale(2.0).add(&simple_pole_part(geom, &id, b)?);

    let x = TensorSeries::from_jet(&[id.values().to_vec(), b.scale(2.0).into_values()], 1);
    let u = ScalarSeries::taylor(vec![0.0, 0.0, 0.5 * data.u2()], 3);
    let eu = u_equation(geom, &data.epsilon(), &x, &u)?;
    Ok(InitialConditionReport {
        singular_part: a0.max_abs(),
        first_order: first.max_abs(),
        scalar_singular_part: eu.coeff(-2)?.abs(),
        scalar_first_order: eu.coeff(-1)?.abs(),
    })
}

/// A free parameter of the jet as it was used.
#[derive(Debug, Clone, PartialEq)]
pub enum FreeParameter {
    /// `ü(0)`, seeding the potential.
    SecondDerivative { value: f64 },
    /// Coefficients over the kernel of `𝓛_m`, added to `x_{m+2}`.
    Kernel {
        m: usize,
        basis: Vec<DiagonalTensor>,
        coeffs: Vec<f64>,
    },
}

/// Per-order solvability residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderResidual {
    pub m: usize,
    /// `‖D_m - 𝓛_m x_{m+2}‖ / max(1, ‖D_m‖)`.
    pub x: f64,
    /// Same for the potential; `𝓛̃_m > 0`, so this is rounding only.
    pub u: f64,
}

/// Formal solution at the singular orbit in the normalisation
/// `x(t) = Σ x_m t^m / m!`, `u(t) = Σ u_m t^m / m!`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    pub x_jet: Vec<DiagonalTensor>,
    pub u_jet: Vec<f64>,
    pub consistency_residuals: Vec<OrderResidual>,
    pub free_params: Vec<FreeParameter>,
    pub order: usize,
}

impl SeriesSolution {
    /// Raw Taylor coefficient of `t^m` in `x`.
    pub fn x_coeff(&self, m: usize) -> DiagonalTensor {
        self.x_jet[m].scale(1.0 / factorial(m))
    }

    pub fn u_coeff(&self, m: usize) -> f64 {
        self.u_jet[m] / factorial(m)
    }

    /// `y_m = x_{m+1} / 2`.
    pub fn y_jet(&self, m: usize) -> DiagonalTensor {
        self.x_jet[m + 1].scale(0.5)
    }

    /// The jet as a polynomial, declared valid through `order`.
    pub fn x_series(&self, order: i32) -> TensorSeries {
        let jet: Vec<Vec<f64>> = (0..self.x_jet.len())
            .map(|m| self.x_coeff(m).into_values())
            .collect();
        TensorSeries::from_jet(&jet, order)
    }

    pub fn u_series(&self, order: i32) -> ScalarSeries {
        ScalarSeries::taylor(
            (0..self.u_jet.len()).map(|m| self.u_coeff(m)).collect(),
            order,
        )
    }

    /// Size of the last retained terms at `t`; two orders are used on each
    /// side because parity can make the very last one vanish.
    pub fn tail_estimate(&self, t: f64) -> f64 {
        let nx = self.x_jet.len() - 1;
        let nu = self.u_jet.len() - 1;
        let term_x = |m: usize| self.x_coeff(m).max_abs() * libm::pow(t, m as f64);
        let term_u = |m: usize| self.u_coeff(m).abs() * libm::pow(t, m as f64);
        term_x(nx)
            .max(term_x(nx - 1))
            .max(term_u(nu))
            .max(term_u(nu - 1))
    }

    pub fn max_consistency_residual(&self) -> f64 {
        self.consistency_residuals
            .iter()
            .fold(0.0, |m, r| m.max(r.x).max(r.u))
    }
}

/// `D_m` and `D̃_m`: the order-`m` right sides of
/// `𝓛_m x_{m+2} = D_m` and `𝓛̃_m u_{m+3} = D̃_m`.
///
/// Only `x_0..x_{m+1}` and `u_0..u_{m+2}` are read (raw coefficients), so
/// the unknowns are structurally absent.
pub fn compute_d(
    geom: &GeometrySpec,
    tables: &RicciTables<f64>,
    epsilon: f64,
    x_raw: &[Vec<f64>],
    u_raw: &[f64],
    m: usize,
) -> Result<(DiagonalTensor, f64)> {
    if x_raw.len() < m + 2 || u_raw.len() < m + 3 {
        return Err(Error::InvalidData(format!(
            "order {m} needs x through {} and u through {}",
            m + 1,
            m + 2
        )));
    }
    let (ex, eu) = order_residuals(geom, tables, &epsilon, x_raw, u_raw, m)?;
    let d = DiagonalTensor::new(ex).scale(-2.0 * factorial(m + 1));
    Ok((d, -factorial(m + 1) * eu))
}

/// Order-`m` coefficients of both equations with `X_{m+2} = U_{m+3} = 0`.
pub(crate) fn order_residuals<T: Coeff>(
    geom: &GeometrySpec,
    tables: &RicciTables<T>,
    epsilon: &T,
    x_raw: &[Vec<T>],
    u_raw: &[T],
    m: usize,
) -> Result<(Vec<T>, T)> {
    let mi = m as i32;
    let x = TensorSeries::from_jet(&x_raw[..m + 2], mi + 2);
    let u = ScalarSeries::taylor(u_raw[..m + 3].to_vec(), mi + 2);
    let ex = x_equation(geom, tables, epsilon, &x, &u)?.coeff(mi)?;
    let x_short = TensorSeries::from_jet(&x_raw[..m + 2], mi + 1);
    let u_long = ScalarSeries::taylor(u_raw[..m + 3].to_vec(), mi + 3);
    let eu = u_equation(geom, epsilon, &x_short, &u_long)?.coeff(mi)?;
    Ok((ex, eu))
}

/// Solves the recursion order by order through `x_N` and `u_{N+1}`.
pub fn solve_series(geom: &GeometrySpec, data: &InitialData) -> Result<SeriesSolution> {
    let tables = RicciTables::new(geom)?;
    let casimir = casimir_on_diagonals(geom)?;
    let report = initial_report(geom, &tables, data)?;
    if !report.passed() {
        check_initial_conditions(geom, data)?;
    }
    let n_order = data.order();
    if let Some((&m, _)) = data.kernel_params().iter().find(|(&m, _)| m + 2 > n_order) {
        return Err(Error::InvalidData(format!(
            "kernel parameters at m = {m} lie beyond the series order"
        )));
    }

    let id = DiagonalTensor::identity(geom);
    let mut x_raw = vec![id.clone().into_values(), data.l1().scale(2.0).into_values()];
    let mut u_raw = vec![0.0, 0.0, 0.5 * data.u2()];
    let mut x_jet = vec![id, data.l1().scale(2.0)];
    let mut u_jet = vec![0.0, 0.0, data.u2()];
    let mut residuals = Vec::new();
    let mut free = vec![FreeParameter::SecondDerivative { value: data.u2() }];

    for m in 0..=n_order - 2 {
        let (d, d_tilde) = compute_d(geom, &tables, data.epsilon(), &x_raw, &u_raw, m)?;

        let op = build_lm_with(geom, &casimir, m);
        let (aw, w) = weighted(geom, &op);
        let dec = svd(&aw);
        let z = dec.solve(d.values(), KERNEL_TOL);
        let mut xm = DiagonalTensor::new(z.iter().zip(&w).map(|(a, b)| a * b).collect());
        let miss = d.sub(&op.apply(&xm));
        let residual = norm(miss.values()) / norm(d.values()).max(1.0);
        if !(residual <= CONSISTENCY_TOL) {
            return Err(Error::ConsistencyViolated { order: m, residual });
        }
        let basis: Vec<DiagonalTensor> = dec
            .null_space(KERNEL_TOL)
            .into_iter()
            .map(|v| DiagonalTensor::new(v.iter().zip(&w).map(|(a, b)| a * b).collect()))
            .collect();
        let coeffs = match data.kernel_params().get(&m) {
            Some(c) if c.len() != basis.len() => {
                return Err(Error::InvalidData(format!(
                    "{} kernel parameters at m = {m}, kernel has dimension {}",
                    c.len(),
                    basis.len()
                )))
            }
            Some(c) => c.clone(),
            None => vec![0.0; basis.len()],
        };
        for (c, v) in coeffs.iter().zip(&basis) {
            xm = xm.add(&v.scale(*c));
        }
        if !basis.is_empty() {
            free.push(FreeParameter::Kernel { m, basis, coeffs });
        }
        x_raw.push(xm.scale(1.0 / factorial(m + 2)).into_values());
        x_jet.push(xm);

        let mut um = d_tilde / build_ltilde(geom.k(), m);
        if (m + 3) % 2 == 1 {
            if !(um.abs() <= PARITY_TOL) {
                return Err(Error::ParityViolated {
                    order: m + 3,
                    value: um,
                });
            }
            um = 0.0;
        }
        u_raw.push(um / factorial(m + 3));
        u_jet.push(um);
        residuals.push(OrderResidual {
            m,
            x: residual,
            u: 0.0,
        });
    }

    Ok(SeriesSolution {
        x_jet,
        u_jet,
        consistency_residuals: residuals,
        free_params: free,
        order: n_order,
    })
}

/// Lowest exponents at which the metric equation, the first integral and
/// the normal-normal equation fail when the jet is substituted as a
/// polynomial. `None` means no failure within the checked range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactOrders {
    pub x: Option<i32>,
    pub u: Option<i32>,
    pub tt: Option<i32>,
}

pub fn contact_orders(
    geom: &GeometrySpec,
    data: &InitialData,
    sol: &SeriesSolution,
    tol: f64,
) -> Result<ContactOrders> {
    let tables = RicciTables::new(geom)?;
    let order = sol.order as i32 + 4;
    let x = sol.x_series(order);
    let u = sol.u_series(order);
    let eps = data.epsilon();
    let first_x = |s: &TensorSeries| -> Option<i32> {
        (s.lead()..=s.order()).find(|&e| s.coeff(e).is_ok_and(|c| c.iter().any(|v| v.abs() > tol)))
    };
    let first_u = |s: &ScalarSeries| -> Option<i32> {
        (s.lead()..=s.order()).find(|&e| s.coeff(e).is_ok_and(|c| c.abs() > tol))
    };
    Ok(ContactOrders {
        x: first_x(&x_equation(geom, &tables, &eps, &x, &u)?),
        u: first_u(&u_equation(geom, &eps, &x, &u)?),
        tt: first_u(&tt_equation(geom, &eps, &x, &u)?),
    })
}
