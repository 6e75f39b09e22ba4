use super::coeff::Coefficient;
use super::power::PowerSeries;
use super::Result;

/// `y^v · Σ_{j=0}^{n} c_j y^j`: finitely many negative powers, known up to
/// the absolute degree `v + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries<C> {
    valuation: i32,
    body: PowerSeries<C>,
}

impl<C: Coefficient> LaurentSeries<C> {
    pub fn from_power_series(valuation: i32, body: PowerSeries<C>) -> Self {
        Self { valuation, body }
    }

    /// `c · y^degree`, known up to `order`.
    pub fn monomial(degree: i32, c: C, order: i32) -> Self {
        let rel = (order - degree).max(0) as usize;
        Self {
            valuation: degree,
            body: PowerSeries::constant(c, rel),
        }
    }

    pub fn zero(order: i32) -> Self {
        Self::monomial(order, C::zero(), order)
    }

    /// Lowest stored degree. The coefficient there may be zero; see
    /// [`leading_degree`](Self::leading_degree).
    pub fn valuation(&self) -> i32 {
        self.valuation
    }

    /// Highest degree that is known exactly.
    pub fn order(&self) -> i32 {
        self.valuation + self.body.order() as i32
    }

    /// Degree of the first nonzero coefficient.
    pub fn leading_degree(&self) -> Option<i32> {
        self.body.valuation().map(|j| self.valuation + j as i32)
    }

    pub fn coeff(&self, degree: i32) -> C {
        if degree < self.valuation {
            return C::zero();
        }
        self.body.coeff((degree - self.valuation) as usize)
    }

    pub fn residue(&self) -> C {
        self.coeff(-1)
    }

    /// Coefficients of `y^{-m}, …, y^{-1}` in that order (empty when there is
    /// no pole).
    pub fn principal_part(&self) -> Vec<(i32, C)> {
        (self.valuation..0.min(self.order() + 1))
            .map(|d| (d, self.coeff(d)))
            .collect()
    }

    pub fn has_zero_principal_part(&self) -> bool {
        self.principal_part().iter().all(|(_, c)| c.is_zero())
    }

    /// The sub-series of degrees `0..=order`.
    pub fn regular_part(&self) -> PowerSeries<C> {
        let order = self.order().max(0) as usize;
        let coeffs = (0..=order as i32).map(|d| self.coeff(d)).collect();
        PowerSeries::new(coeffs, order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let valuation = self.valuation.min(other.valuation);
        let order = self.order().min(other.order()).max(valuation);
        let coeffs = (valuation..=order)
            .map(|d| self.coeff(d).add(&other.coeff(d)))
            .collect();
        Self {
            valuation,
            body: PowerSeries::new(coeffs, (order - valuation) as usize),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            valuation: self.valuation,
            body: self.body.neg(),
        }
    }

    /// Lowest degrees add; the known range is the smaller relative one.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            valuation: self.valuation + other.valuation,
            body: self.body.mul(&other.body)?,
        })
    }

    pub fn scale(&self, c: &C) -> Result<Self> {
        Ok(Self {
            valuation: self.valuation,
            body: self.body.scale(c)?,
        })
    }

    /// Formal `d/dy`.
    pub fn derivative(&self) -> Self {
        let order = self.order() - 1;
        let lowest = self.valuation - 1;
        let coeffs = (lowest..=order.max(lowest))
            .map(|d| self.coeff(d + 1).mul_int(i64::from(d + 1)))
            .collect();
        Self {
            valuation: lowest,
            body: PowerSeries::new(coeffs, (order.max(lowest) - lowest) as usize),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentSeries<D> {
        let coeffs = self.body.coeffs().iter().map(f).collect();
        LaurentSeries {
            valuation: self.valuation,
            body: PowerSeries::new(coeffs, self.body.order()),
        }
    }
}
