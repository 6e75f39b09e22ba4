//! Truncated power series, Laurent series and trigonometric polynomials.
//!
//! Everything in this module is exact up to the truncation order each value
//! carries: products drop the tail beyond the surviving order, nothing else
//! is approximated. Coefficients are either plain scalars (`f64`, or
//! [`BigRational`](num_rational::BigRational) for the exact scalar mode) or
//! [`CircleFunction`]s, finite Fourier sums on the circle `θ ∈ [0, 1)`.

mod circle;
mod coeff;
mod laurent;
mod polynomial;
mod power;

pub use circle::{CircleFunction, SignCertificate, MAX_FREQUENCY, POSITIVITY_SAMPLES};
pub use coeff::{Coefficient, Scalar};
pub use laurent::LaurentSeries;
pub use polynomial::RealPolynomial;
pub use power::{PowerSeries, DEFAULT_ORDER};

use thiserror::Error;

/// Power series in the collar coordinate `y` with circle-function coefficients.
pub type CollarSeries = PowerSeries<CircleFunction>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("leading coefficient is not invertible: {0}")]
    NonInvertibleLeadingCoefficient(String),
    #[error("leading coefficient {0} is nonvanishing but its reciprocal is not a trigonometric polynomial")]
    UnrepresentableInverse(String),
    #[error("Fourier frequency {0} exceeds the cap of {MAX_FREQUENCY}")]
    FrequencyOverflow(u32),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("invalid circle function: {0}")]
    InvalidCircleFunction(String),
    #[error("series composition requires an inner series without constant term")]
    NonzeroConstantTerm,
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Series of `P'(y) / P(y)^i`, to absolute order `order`.
///
/// Computed as `P' · (p₁y)^{-i} · (1 + u)^{-i}` with `u = P/(p₁y) − 1`, so the
/// lowest degree of the result is exactly `−i`.
pub fn expand_dp_over_pk<S: Scalar>(
    poly: &RealPolynomial,
    i: u32,
    order: i32,
) -> Result<LaurentSeries<S>> {
    poly.check_normalizing()?;
    if i == 0 {
        return Err(SeriesError::InvalidPolynomial(
            "pole exponent must be at least 1".into(),
        ));
    }
    let i = i as i32;
    // relative precision needed for the regular factor
    let rel = (order + i).max(0) as usize;
    let p1 = S::from_f64(poly.coeff(1));
    let coeffs: Vec<S> = poly.coeffs().iter().map(|&c| S::from_f64(c)).collect();

    // (1 + u) = P / (p1 y)
    let p1_inv = p1.reciprocal()?;
    let mut shifted = vec![S::zero(); rel + 1];
    for (j, c) in coeffs.iter().enumerate().skip(1) {
        if j - 1 <= rel {
            shifted[j - 1] = c.mul(&p1_inv)?;
        }
    }
    let one_plus_u = PowerSeries::new(shifted, rel);
    let inv = one_plus_u.reciprocal()?.powi(i as u32)?;

    let deriv: Vec<S> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c.mul_int(j as i64))
        .collect();
    let dp = PowerSeries::from_coeffs_truncated(deriv, rel);
    let regular = dp.mul(&inv)?.scale(&p1_inv.powi(i as u32)?)?;
    Ok(LaurentSeries::from_power_series(-i, regular))
}

/// The coefficient of `y^{-1}`.
pub fn residue<C: Coefficient>(series: &LaurentSeries<C>) -> C {
    series.residue()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    #[test]
    fn expand_monomial_is_pure_pole() {
        let p = RealPolynomial::new(vec![0.0, 1.0]);
        let s = expand_dp_over_pk::<f64>(&p, 3, 4).unwrap();
        assert_eq!(s.valuation(), -3);
        assert_eq!(s.coeff(-3), 1.0);
        for d in -2..=4 {
            assert_eq!(s.coeff(d), 0.0);
        }
    }

    #[test]
    fn log_derivative_has_unit_residue() {
        let p = RealPolynomial::new(vec![0.0, 1.0, 1.0]);
        let s = expand_dp_over_pk::<BigRational>(&p, 1, 6).unwrap();
        assert!(One::is_one(&s.residue()));
    }

    #[test]
    fn y_plus_y_squared_cubed() {
        // P'/P^3 = (1+2y) / (y^3 (1+y)^3) = y^-3 - y^-2 + 0 y^-1 + ...
        let p = RealPolynomial::new(vec![0.0, 1.0, 1.0]);
        let s = expand_dp_over_pk::<BigRational>(&p, 3, 4).unwrap();
        assert!(One::is_one(&s.coeff(-3)));
        assert_eq!(s.coeff(-2), -<BigRational as One>::one());
        assert!(Zero::is_zero(&s.coeff(-1)));
    }

    #[test]
    fn y_plus_y_squared_cubed_matches_pointwise_fit() {
        // Oracle: evaluate P'/P^3 directly at small y and peel off the
        // principal part term by term.
        let p = RealPolynomial::new(vec![0.0, 1.0, 1.0]);
        let s = expand_dp_over_pk::<f64>(&p, 3, 8).unwrap();
        for &y in &[1e-3, 1e-4, 1e-5, 1e-6] {
            let direct = p.derivative().eval(y) / p.eval(y).powi(3);
            let lead = direct * y.powi(3);
            assert!((lead - 1.0).abs() < 4.0 * y);
            let next = (direct - y.powi(-3)) * y * y;
            assert!((next + 1.0).abs() < 10.0 * y);
        }
        assert_eq!(s.coeff(-3), 1.0);
        assert_eq!(s.coeff(-2), -1.0);
        assert!(s.coeff(-1).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(
            expand_dp_over_pk::<f64>(&RealPolynomial::new(vec![1.0, 1.0]), 1, 3),
            Err(SeriesError::InvalidPolynomial(_))
        ));
        assert!(matches!(
            expand_dp_over_pk::<f64>(&RealPolynomial::new(vec![0.0, -1.0]), 1, 3),
            Err(SeriesError::InvalidPolynomial(_))
        ));
    }

    #[test]
    fn residue_of_pure_double_pole_is_zero() {
        let s = LaurentSeries::<f64>::monomial(-2, 1.0, 3);
        assert_eq!(residue(&s), 0.0);
    }
}
