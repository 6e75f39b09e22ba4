use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Result, SeriesError};

/// Ring operations a series coefficient must support.
///
/// Multiplication is fallible because products of circle functions can
/// exceed the Fourier frequency cap.
pub trait Coefficient: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn mul_int(&self, n: i64) -> Self;
    /// Multiplicative inverse, used for leading coefficients only.
    fn reciprocal(&self) -> Result<Self>;

    fn powi(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// A coefficient field of plain numbers.
pub trait Scalar: Coefficient {
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_positive(&self) -> bool;
    fn div_int(&self, n: i64) -> Self;
}

impl Coefficient for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn mul_int(&self, n: i64) -> Self {
        self * n as f64
    }
    fn reciprocal(&self) -> Result<Self> {
        if *self == 0.0 || !self.is_finite() {
            return Err(SeriesError::NonInvertibleLeadingCoefficient(format!(
                "{self}"
            )));
        }
        Ok(1.0 / self)
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn div_int(&self, n: i64) -> Self {
        self / n as f64
    }
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn mul_int(&self, n: i64) -> Self {
        self * BigRational::from_integer(BigInt::from(n))
    }
    fn reciprocal(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(SeriesError::NonInvertibleLeadingCoefficient("0".into()));
        }
        Ok(self.recip())
    }
}

impl Scalar for BigRational {
    /// Exact conversion; every finite `f64` is a dyadic rational.
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn div_int(&self, n: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(n))
    }
}
