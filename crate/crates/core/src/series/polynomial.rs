use serde::{Deserialize, Serialize};

use super::coeff::Scalar;
use super::power::PowerSeries;
use super::{Result, SeriesError};

/// `Σ p_i y^i` with real coefficients. Trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// The identity `y`.
    pub fn identity() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| j as f64 * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Self::new(vec![1.0]), |acc, _| acc.mul(self))
    }

    /// Drops every term of degree above `degree`.
    pub fn truncate(&self, degree: usize) -> Self {
        Self::new(self.coeffs.iter().take(degree + 1).copied().collect())
    }

    /// `self(inner(y))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::new(Vec::new()), |acc, &c| {
                acc.mul(inner).add(&Self::new(vec![c]))
            })
    }

    /// Checks `P(0) = 0` and `P'(0) > 0`.
    pub fn check_normalizing(&self) -> Result<()> {
        if self.coeff(0) != 0.0 {
            return Err(SeriesError::InvalidPolynomial(format!(
                "P(0) = {} must vanish",
                self.coeff(0)
            )));
        }
        if !(self.coeff(1) > 0.0) {
            return Err(SeriesError::InvalidPolynomial(format!(
                "P'(0) = {} must be positive",
                self.coeff(1)
            )));
        }
        if self.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(SeriesError::InvalidPolynomial(
                "coefficients must be finite".into(),
            ));
        }
        Ok(())
    }

    pub fn to_series<S: Scalar>(&self, order: usize) -> PowerSeries<S> {
        PowerSeries::new(self.coeffs.iter().map(|&c| S::from_f64(c)).collect(), order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        let p = RealPolynomial::new(vec![0.0, 1.0, 3.0]);
        assert_eq!(p.eval(2.0), 14.0);
        assert_eq!(p.derivative(), RealPolynomial::new(vec![1.0, 6.0]));
        assert_eq!(p.derivative().eval(2.0), 13.0);
    }

    #[test]
    fn compose_and_trim() {
        let p = RealPolynomial::new(vec![0.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        let q = RealPolynomial::new(vec![0.0, 1.0, 1.0]);
        assert_eq!(p.compose(&q), RealPolynomial::new(vec![0.0, 2.0, 2.0]));
        assert_eq!(q.compose(&p), RealPolynomial::new(vec![0.0, 2.0, 4.0]));
    }

    #[test]
    fn normalizing_checks() {
        assert!(RealPolynomial::identity().check_normalizing().is_ok());
        assert!(RealPolynomial::new(vec![0.0, 0.0, 1.0]).check_normalizing().is_err());
        assert!(RealPolynomial::new(vec![1e-3, 1.0]).check_normalizing().is_err());
    }
}
