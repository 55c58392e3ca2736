use core::fmt::Debug;

/// Scalar field for series coefficients.
pub trait Coeff: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    /// Exact for dyadic rationals in the exact backend.
    fn from_f64(v: f64) -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

#[cfg(feature = "exact")]
mod exact {
    use super::Coeff;
    use num_rational::Ratio;

    pub type Rational = Ratio<i128>;

    impl Coeff for Rational {
        fn zero() -> Self {
            Ratio::from_integer(0)
        }
        fn one() -> Self {
            Ratio::from_integer(1)
        }
        fn from_f64(v: f64) -> Self {
            assert!(v.is_finite(), "non-finite coefficient");
            let mut num = v;
            let mut den: i128 = 1;
            while num != libm::trunc(num) {
                num *= 2.0;
                den *= 2;
                assert!(
                    den < (1 << 100),
                    "coefficient {v} is not a short dyadic rational"
                );
            }
            Ratio::new(num as i128, den)
        }
        fn from_i64(v: i64) -> Self {
            Ratio::from_integer(v as i128)
        }
        fn to_f64(&self) -> f64 {
            *self.numer() as f64 / *self.denom() as f64
        }
        fn add(&self, o: &Self) -> Self {
            self + o
        }
        fn sub(&self, o: &Self) -> Self {
            self - o
        }
        fn mul(&self, o: &Self) -> Self {
            self * o
        }
        fn div(&self, o: &Self) -> Self {
            self / o
        }
        fn neg(&self) -> Self {
            -self
        }
        fn is_zero(&self) -> bool {
            *self.numer() == 0
        }
    }
}

#[cfg(feature = "exact")]
pub use exact::Rational;

/// A commutative algebra over a coefficient field: the scalars themselves,
/// or truncated series with those coefficients.
pub trait Algebra<T>: Clone {
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, c: &T) -> Self;
}

impl<T: Coeff> Algebra<T> for T {
    fn add(&self, o: &Self) -> Self {
        Coeff::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Coeff::mul(self, o)
    }
    fn scale(&self, c: &T) -> Self {
        Coeff::mul(self, c)
    }
}
