use super::coeff::{Coefficient, Scalar};
use super::{CircleFunction, Result, SeriesError};

/// Truncation order used when the caller does not pick one.
pub const DEFAULT_ORDER: usize = 16;

/// `Σ_{j=0}^{N} c_j y^j`, exact up to and including `y^N`.
///
/// The tail in `y^{N+1}` is discarded by convention; every operation
/// records the order that survives it.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<C> {
    coeffs: Vec<C>,
    order: usize,
}

impl<C: Coefficient> PowerSeries<C> {
    /// Pads with zeros or truncates `coeffs` to `order + 1` entries.
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Self { coeffs, order }
    }

    pub fn from_coeffs_truncated(coeffs: Vec<C>, order: usize) -> Self {
        Self::new(coeffs, order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// `c · y^degree`; zero if the degree exceeds the order.
    pub fn monomial(degree: usize, c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `y^j`, zero beyond the order.
    pub fn coeff(&self, j: usize) -> C {
        self.coeffs.get(j).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coefficient::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self::new(self.coeffs[..=order].to_vec(), order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order)
            .map(|j| self.coeffs[j].add(&other.coeffs[j]))
            .collect();
        Self { coeffs, order }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order)
            .map(|j| self.coeffs[j].sub(&other.coeffs[j]))
            .collect();
        Self { coeffs, order }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(Coefficient::neg).collect(),
            order: self.order,
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let order = self.order.min(other.order);
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?);
            }
        }
        Ok(Self { coeffs, order })
    }

    pub fn scale(&self, c: &C) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.mul(c))
            .collect::<Result<_>>()?;
        Ok(Self {
            coeffs,
            order: self.order,
        })
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(f).collect(),
            order: self.order,
        }
    }

    /// Formal `d/dy`; the result is known to one order less.
    pub fn derivative(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let coeffs = (1..=self.order)
            .map(|j| self.coeffs[j].mul_int(j as i64))
            .collect();
        Self::new(coeffs, order)
    }

    /// Multiplies by `y^shift`.
    pub fn shift_up(&self, shift: usize) -> Self {
        let mut coeffs = vec![C::zero(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        Self {
            coeffs,
            order: self.order + shift,
        }
    }

    /// Divides by `y^shift`; `None` unless the low coefficients vanish.
    pub fn shift_down(&self, shift: usize) -> Option<Self> {
        if shift > self.order || self.coeffs[..shift].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self {
            coeffs: self.coeffs[shift..].to_vec(),
            order: self.order - shift,
        })
    }

    /// `1 / self` to the same order.
    pub fn reciprocal(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].reciprocal()?;
        let mut out = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        for n in 1..=self.order {
            let mut acc = C::zero();
            for j in 1..=n {
                let u = &self.coeffs[j];
                if u.is_zero() || out[n - j].is_zero() {
                    continue;
                }
                acc = acc.add(&u.mul(&out[n - j])?);
            }
            out.push(acc.mul(&inv0)?.neg());
        }
        Ok(Self {
            coeffs: out,
            order: self.order,
        })
    }

    pub fn powi(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.order);
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

    /// `self(inner(y))` by Horner's rule; `inner` must have no constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order.min(inner.order);
        let inner = inner.truncate(order);
        let mut acc = Self::constant(self.coeffs[order].clone(), order);
        for j in (0..order).rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[j]);
        }
        Ok(acc)
    }
}

impl<S: Scalar> PowerSeries<S> {
    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * y + c.to_f64())
    }
}

impl PowerSeries<CircleFunction> {
    /// Value of the polynomial `Σ g_j(θ) y^j`.
    pub fn eval(&self, y: f64, theta: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * y + c.eval(theta))
    }

    /// `∂/∂y` of the polynomial at a point.
    pub fn eval_dy(&self, y: f64, theta: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (j, c)| acc * y + j as f64 * c.eval(theta))
    }

    /// The coefficient-wise `θ`-slice `Σ g_j(θ) y^j` as a scalar series.
    pub fn at_theta(&self, theta: f64) -> PowerSeries<f64> {
        PowerSeries::new(
            self.coeffs.iter().map(|c| c.eval(theta)).collect(),
            self.order,
        )
    }

    /// Series of circle means `Σ (∫ g_j) y^j`.
    pub fn circle_means(&self) -> PowerSeries<f64> {
        PowerSeries::new(
            self.coeffs
                .iter()
                .map(CircleFunction::integrate_over_circle)
                .collect(),
            self.order,
        )
    }

    /// Formal `∂/∂θ` applied to every coefficient.
    pub fn theta_derivative(&self) -> Self {
        self.map_coeffs(CircleFunction::derivative)
    }

    pub fn max_frequency(&self) -> u32 {
        self.coeffs
            .iter()
            .map(CircleFunction::max_frequency)
            .max()
            .unwrap_or(0)
    }

    pub fn from_scalar(series: &PowerSeries<f64>) -> Self {
        Self::new(
            series
                .coeffs
                .iter()
                .map(|&c| CircleFunction::constant(c))
                .collect(),
            series.order,
        )
    }
}
