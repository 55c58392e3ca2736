use alloc::vec;
use alloc::vec::Vec;

use super::coeff::{Algebra, Coeff};
use crate::error::{Error, Result};

/// Truncated Laurent series `Σ_{e=lead}^{order} c_e t^e`.
///
/// `coeffs[j]` is the coefficient of `t^{lead+j}` and there is exactly one
/// entry per exponent up to `order`. Everything past `order` is unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries<T = f64> {
    lead: i32,
    coeffs: Vec<T>,
    order: i32,
}

impl<T: Coeff> ScalarSeries<T> {
    pub fn new(lead: i32, mut coeffs: Vec<T>, order: i32) -> Self {
        let len = (order - lead + 1).max(0) as usize;
        coeffs.resize(len, T::zero());
        Self {
            lead,
            coeffs,
            order,
        }
    }

    pub fn zero(order: i32) -> Self {
        Self::new(0, Vec::new(), order)
    }

    pub fn constant(c: T, order: i32) -> Self {
        Self::new(0, vec![c], order)
    }

    pub fn one(order: i32) -> Self {
        Self::constant(T::one(), order)
    }

    /// `c · t^e`, valid through `order`.
    pub fn monomial(c: T, e: i32, order: i32) -> Self {
        Self::new(e, vec![c], order)
    }

    /// Taylor series from coefficients of `t⁰, t¹, …`.
    pub fn taylor(coeffs: Vec<T>, order: i32) -> Self {
        Self::new(0, coeffs, order)
    }

    pub fn lead(&self) -> i32 {
        self.lead
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i32) -> Result<T> {
        if e > self.order {
            return Err(Error::OutOfOrder {
                exponent: e,
                order: self.order,
            });
        }
        Ok(self.get(e))
    }

    fn get(&self, e: i32) -> T {
        if e < self.lead || e > self.order {
            T::zero()
        } else {
            self.coeffs[(e - self.lead) as usize].clone()
        }
    }

    pub fn set(&mut self, e: i32, c: T) {
        assert!(
            e >= self.lead && e <= self.order,
            "t^{e} outside stored range"
        );
        self.coeffs[(e - self.lead) as usize] = c;
    }

    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        let lead = self.lead.min(order + 1);
        Self::new(lead, (lead..=order).map(|e| self.get(e)).collect(), order)
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        let lead = self.lead.min(o.lead);
        let order = self.order.min(o.order);
        Self::new(
            lead,
            (lead..=order).map(|e| f(&self.get(e), &o.get(e))).collect(),
            order,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.lead,
            self.coeffs.iter().map(T::neg).collect(),
            self.order,
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(
            self.lead,
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
            self.order,
        )
    }

    /// Exponent of the first nonzero known coefficient, or `order + 1`.
    pub fn valuation(&self) -> i32 {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map_or(self.order + 1, |j| self.lead + j as i32)
    }

    /// Cauchy product. Validity is tracked from the true valuations, so
    /// known leading zeros do not cost precision.
    pub fn mul(&self, o: &Self) -> Self {
        let lead = self.lead + o.lead;
        let order = (self.order + o.valuation()).min(o.order + self.valuation());
        let len = (order - lead + 1).max(0) as usize;
        let mut out = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len.saturating_sub(i)) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self {
            lead,
            coeffs: out,
            order,
        }
    }

    /// `1/s`; the coefficient at `lead` must be nonzero.
    pub fn invert(&self) -> Result<Self> {
        let a0 = match self.coeffs.first() {
            Some(a0) if !a0.is_zero() => a0.clone(),
            _ => return Err(Error::ZeroLeadingCoefficient),
        };
        let rel = (self.order - self.lead) as usize;
        let mut b = vec![T::zero(); rel + 1];
        let inv0 = T::one().div(&a0);
        b[0] = inv0.clone();
        for n in 1..=rel {
            let mut acc = T::zero();
            for j in 1..=n {
                acc = acc.add(&self.coeffs[j].mul(&b[n - j]));
            }
            b[n] = acc.neg().mul(&inv0);
        }
        Ok(Self {
            lead: -self.lead,
            coeffs: b,
            order: self.order - 2 * self.lead,
        })
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: i32) -> Self {
        Self {
            lead: self.lead + e,
            coeffs: self.coeffs.clone(),
            order: self.order + e,
        }
    }

    /// Term-by-term derivative. A Taylor series keeps `lead = 0`.
    pub fn derivative(&self) -> Self {
        if self.lead == 0 {
            let coeffs = self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.mul(&T::from_i64(j as i64)))
                .collect();
            return Self::new(0, coeffs, self.order - 1);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.mul(&T::from_i64((self.lead + j as i32) as i64)))
            .collect();
        Self {
            lead: self.lead - 1,
            coeffs,
            order: self.order - 1,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut sum = 0.0;
        for c in self.coeffs.iter().rev() {
            sum = sum * t + c.to_f64();
        }
        sum * libm::pow(t, self.lead as f64)
    }

    pub fn to_f64(&self) -> ScalarSeries<f64> {
        ScalarSeries::new(
            self.lead,
            self.coeffs.iter().map(T::to_f64).collect(),
            self.order,
        )
    }
}

impl<T: Coeff> Algebra<T> for ScalarSeries<T> {
    fn add(&self, o: &Self) -> Self {
        ScalarSeries::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ScalarSeries::mul(self, o)
    }
    fn scale(&self, c: &T) -> Self {
        ScalarSeries::scale(self, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type S = ScalarSeries<f64>;

    #[test]
    fn geometric_series() {
        let inv = S::taylor(vec![1.0, 1.0], 3).invert().unwrap();
        assert_eq!(inv.coeffs(), &[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(inv.order(), 3);
    }

    #[test]
    fn difference_of_squares() {
        let p = S::taylor(vec![1.0, 1.0], 4).mul(&S::taylor(vec![1.0, -1.0], 4));
        assert_eq!(p.coeffs(), &[1.0, 0.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn laurent_inverse() {
        let s = S::taylor(vec![1.0, 1.0], 3).shift(2);
        let inv = s.invert().unwrap();
        assert_eq!(inv.lead(), -2);
        assert_eq!(inv.coeffs(), &[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(inv.order(), 1);
    }

    #[test]
    fn zero_lead_rejected() {
        assert_eq!(
            S::taylor(vec![0.0, 1.0], 3).invert(),
            Err(Error::ZeroLeadingCoefficient)
        );
    }

    #[test]
    fn out_of_order_coefficient() {
        let s = S::taylor(vec![1.0], 2);
        assert!(matches!(s.coeff(3), Err(Error::OutOfOrder { .. })));
        assert_eq!(s.coeff(-1).unwrap(), 0.0);
    }

    #[test]
    fn derivative_of_laurent() {
        // d/dt (t^-2 + t) = -2 t^-3 + 1
        let s = S::new(-2, vec![1.0, 0.0, 0.0, 1.0], 3).derivative();
        assert_eq!(
            (s.lead(), s.coeff(-3).unwrap(), s.coeff(0).unwrap()),
            (-3, -2.0, 1.0)
        );
    }

    proptest! {
        // Series composition agrees with pointwise evaluation to O(t^{N+1}):
        // halving t must shrink the discrepancy by about 2^{N+1}.
        #[test]
        fn composition_matches_pointwise(c in proptest::collection::vec(-1.0f64..1.0, 5)) {
            let n = 6;
            let mut a: Vec<f64> = c.iter().map(|x| 0.5 * x).collect();
            a[0] = 1.0 + c[0].abs();
            let s = S::taylor(a.clone(), n);
            let expr = s.mul(&s).add(&s.invert().unwrap());
            let direct = |t: f64| {
                let v: f64 = a.iter().enumerate().map(|(j, x)| x * libm::pow(t, j as f64)).sum();
                v * v + 1.0 / v
            };
            let e1 = (expr.eval(0.04) - direct(0.04)).abs();
            let e2 = (expr.eval(0.02) - direct(0.02)).abs();
            prop_assume!(e1 > 1e-12);
            prop_assert!(libm::log2(e1 / e2) > n as f64 - 0.5, "ratio {}", e2 / e1);
        }

        #[test]
        fn inverse_roundtrip(c in proptest::collection::vec(-1.0f64..1.0, 6), lead in -3i32..3) {
            let mut a = c.clone();
            a[0] = 1.0 + c[0].abs();
            let s = S::new(lead, a, lead + 8);
            let p = s.mul(&s.invert().unwrap());
            prop_assert_eq!(p.lead(), 0);
            prop_assert!((p.coeffs()[0] - 1.0).abs() < 1e-12);
            prop_assert!(p.coeffs()[1..].iter().all(|x| x.abs() < 1e-10));
        }
    }
}
