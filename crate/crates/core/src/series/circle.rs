use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::coeff::Coefficient;
use super::{Result, SeriesError};

/// Highest Fourier frequency a circle function may carry.
pub const MAX_FREQUENCY: u32 = 64;

/// Number of equispaced samples used by the first pass of the sign checks.
pub const POSITIVITY_SAMPLES: usize = 256;

const MAX_SAMPLES: usize = 1 << 16;

/// A finite Fourier sum `c + Σ aₘ cos(2πmθ) + Σ bₘ sin(2πmθ)` on `θ ∈ [0, 1)`.
///
/// Frequencies are stored strictly increasing and zero amplitudes are never
/// stored, so two equal functions have equal representations.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawCircleFunction")]
pub struct CircleFunction {
    constant: f64,
    cos: Vec<(u32, f64)>,
    sin: Vec<(u32, f64)>,
}

#[derive(Deserialize)]
struct RawCircleFunction {
    #[serde(default)]
    constant: f64,
    #[serde(default)]
    cos: Vec<(u32, f64)>,
    #[serde(default)]
    sin: Vec<(u32, f64)>,
}

impl TryFrom<RawCircleFunction> for CircleFunction {
    type Error = SeriesError;

    fn try_from(raw: RawCircleFunction) -> Result<Self> {
        CircleFunction::new(raw.constant, raw.cos, raw.sin)
    }
}

/// Outcome of a certified sign check on a circle function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignCertificate {
    Positive,
    Negative,
    /// A zero (or a point where nonvanishing could not be certified).
    Vanishes { theta: f64 },
}

impl CircleFunction {
    pub fn new(constant: f64, cos: Vec<(u32, f64)>, sin: Vec<(u32, f64)>) -> Result<Self> {
        fn check(modes: Vec<(u32, f64)>, kind: &str) -> Result<Vec<(u32, f64)>> {
            let mut last = 0;
            for &(m, a) in &modes {
                if m == 0 {
                    return Err(SeriesError::InvalidCircleFunction(format!(
                        "{kind} frequency must be at least 1"
                    )));
                }
                if m > MAX_FREQUENCY {
                    return Err(SeriesError::FrequencyOverflow(m));
                }
                if m <= last {
                    return Err(SeriesError::InvalidCircleFunction(format!(
                        "{kind} frequencies must be strictly increasing"
                    )));
                }
                if !a.is_finite() {
                    return Err(SeriesError::InvalidCircleFunction(format!(
                        "{kind} amplitude at frequency {m} is not finite"
                    )));
                }
                last = m;
            }
            Ok(modes.into_iter().filter(|&(_, a)| a != 0.0).collect())
        }
        if !constant.is_finite() {
            return Err(SeriesError::InvalidCircleFunction(
                "constant term is not finite".into(),
            ));
        }
        Ok(Self {
            constant,
            cos: check(cos, "cosine")?,
            sin: check(sin, "sine")?,
        })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    /// `amplitude · cos(2π·frequency·θ)`.
    pub fn cos_mode(frequency: u32, amplitude: f64) -> Result<Self> {
        Self::new(0.0, vec![(frequency, amplitude)], Vec::new())
    }

    /// `amplitude · sin(2π·frequency·θ)`.
    pub fn sin_mode(frequency: u32, amplitude: f64) -> Result<Self> {
        Self::new(0.0, Vec::new(), vec![(frequency, amplitude)])
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    pub fn cosines(&self) -> &[(u32, f64)] {
        &self.cos
    }

    pub fn sines(&self) -> &[(u32, f64)] {
        &self.sin
    }

    pub fn is_constant(&self) -> bool {
        self.cos.is_empty() && self.sin.is_empty()
    }

    pub fn max_frequency(&self) -> u32 {
        let c = self.cos.last().map_or(0, |m| m.0);
        let s = self.sin.last().map_or(0, |m| m.0);
        c.max(s)
    }

    /// `∫₀¹ f(θ) dθ`, which is exactly the constant mode.
    pub fn integrate_over_circle(&self) -> f64 {
        self.constant
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut v = self.constant;
        for &(m, a) in &self.cos {
            v += a * (TAU * m as f64 * theta).cos();
        }
        for &(m, b) in &self.sin {
            v += b * (TAU * m as f64 * theta).sin();
        }
        v
    }

    /// Formal `d/dθ`.
    pub fn derivative(&self) -> Self {
        let cos = self
            .sin
            .iter()
            .map(|&(m, b)| (m, TAU * m as f64 * b))
            .collect();
        let sin = self
            .cos
            .iter()
            .map(|&(m, a)| (m, -TAU * m as f64 * a))
            .collect();
        Self {
            constant: 0.0,
            cos,
            sin,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        let sc = |v: &[(u32, f64)]| {
            v.iter()
                .map(|&(m, a)| (m, a * factor))
                .filter(|&(_, a)| a != 0.0)
                .collect()
        };
        Self {
            constant: self.constant * factor,
            cos: sc(&self.cos),
            sin: sc(&self.sin),
        }
    }

    /// Upper bound on `|f'(θ)|`: `Σ 2πm (|aₘ| + |bₘ|)`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.cos
            .iter()
            .chain(self.sin.iter())
            .map(|&(m, a)| TAU * m as f64 * a.abs())
            .sum()
    }

    /// `Σ |amplitudes|`, a bound on `sup |f|`.
    pub fn amplitude_bound(&self) -> f64 {
        self.constant.abs()
            + self
                .cos
                .iter()
                .chain(self.sin.iter())
                .map(|&(_, a)| a.abs())
                .sum::<f64>()
    }

    /// Certifies the sign of `f` on the whole circle.
    ///
    /// Samples on an equispaced grid (256 points first, refined up to 65536)
    /// and accepts a sign only when the smallest sampled magnitude exceeds
    /// the largest possible excursion between neighbouring samples.
    pub fn certify_sign(&self) -> SignCertificate {
        if self.is_constant() {
            return match self.constant {
                c if c > 0.0 => SignCertificate::Positive,
                c if c < 0.0 => SignCertificate::Negative,
                _ => SignCertificate::Vanishes { theta: 0.0 },
            };
        }
        let lip = self.lipschitz_bound();
        let mut n = POSITIVITY_SAMPLES;
        loop {
            let h = 1.0 / n as f64;
            let mut min_abs = f64::INFINITY;
            let mut argmin = 0.0;
            let mut sign = 0.0;
            for j in 0..n {
                let theta = j as f64 * h;
                let v = self.eval(theta);
                if v == 0.0 || (sign != 0.0 && v.signum() != sign) {
                    return SignCertificate::Vanishes { theta };
                }
                sign = v.signum();
                if v.abs() < min_abs {
                    min_abs = v.abs();
                    argmin = theta;
                }
            }
            if min_abs > 0.5 * lip * h {
                return if sign > 0.0 {
                    SignCertificate::Positive
                } else {
                    SignCertificate::Negative
                };
            }
            if n >= MAX_SAMPLES {
                return SignCertificate::Vanishes { theta: argmin };
            }
            n *= 2;
        }
    }

    pub fn is_nonvanishing(&self) -> bool {
        !matches!(self.certify_sign(), SignCertificate::Vanishes { .. })
    }

    fn to_dense(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.max_frequency() as usize + 1;
        let mut c = vec![0.0; n];
        let mut s = vec![0.0; n];
        c[0] = self.constant;
        for &(m, a) in &self.cos {
            c[m as usize] = a;
        }
        for &(m, b) in &self.sin {
            s[m as usize] = b;
        }
        (c, s)
    }

    fn from_dense(c: &[f64], s: &[f64]) -> Result<Self> {
        let top = (1..c.len())
            .rev()
            .find(|&m| c[m] != 0.0 || s[m] != 0.0)
            .unwrap_or(0);
        if top as u32 > MAX_FREQUENCY {
            return Err(SeriesError::FrequencyOverflow(top as u32));
        }
        let pick = |v: &[f64]| {
            (1..=top)
                .filter(|&m| v[m] != 0.0)
                .map(|m| (m as u32, v[m]))
                .collect()
        };
        Ok(Self {
            constant: c[0],
            cos: pick(c),
            sin: pick(s),
        })
    }
}

impl Coefficient for CircleFunction {
    fn zero() -> Self {
        Self::default()
    }

    fn one() -> Self {
        Self::constant(1.0)
    }

    fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.is_constant()
    }

    fn add(&self, other: &Self) -> Self {
        let (mut c, mut s) = self.to_dense();
        let (oc, os) = other.to_dense();
        if oc.len() > c.len() {
            c.resize(oc.len(), 0.0);
            s.resize(oc.len(), 0.0);
        }
        for m in 0..oc.len() {
            c[m] += oc[m];
            s[m] += os[m];
        }
        Self::from_dense(&c, &s).expect("sum cannot raise frequencies")
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_constant() {
            return Ok(other.scale(self.constant));
        }
        if other.is_constant() {
            return Ok(self.scale(other.constant));
        }
        let (ac, as_) = self.to_dense();
        let (bc, bs) = other.to_dense();
        let n = ac.len() + bc.len() - 1;
        let mut c = vec![0.0; n];
        let mut s = vec![0.0; n];
        // cos(a)cos(b) = [cos(a-b) + cos(a+b)]/2
        // sin(a)sin(b) = [cos(a-b) - cos(a+b)]/2
        // sin(a)cos(b) = [sin(a+b) + sin(a-b)]/2
        for a in 0..ac.len() {
            for b in 0..bc.len() {
                let (sum, diff) = (a + b, a.abs_diff(b));
                let cc = ac[a] * bc[b];
                if cc != 0.0 {
                    c[sum] += 0.5 * cc;
                    c[diff] += 0.5 * cc;
                }
                let ss = as_[a] * bs[b];
                if ss != 0.0 {
                    c[diff] += 0.5 * ss;
                    c[sum] -= 0.5 * ss;
                }
                let sc = as_[a] * bc[b];
                if sc != 0.0 {
                    s[sum] += 0.5 * sc;
                    // sin(a - b), odd in the difference
                    if a > b {
                        s[diff] += 0.5 * sc;
                    } else if a < b {
                        s[diff] -= 0.5 * sc;
                    }
                }
                let cs = ac[a] * bs[b];
                if cs != 0.0 {
                    s[sum] += 0.5 * cs;
                    if b > a {
                        s[diff] += 0.5 * cs;
                    } else if b < a {
                        s[diff] -= 0.5 * cs;
                    }
                }
            }
        }
        s[0] = 0.0;
        Self::from_dense(&c, &s)
    }

    fn mul_int(&self, n: i64) -> Self {
        self.scale(n as f64)
    }

    fn reciprocal(&self) -> Result<Self> {
        if self.is_constant() {
            if self.constant == 0.0 {
                return Err(SeriesError::NonInvertibleLeadingCoefficient("0".into()));
            }
            return Ok(Self::constant(1.0 / self.constant));
        }
        match self.certify_sign() {
            SignCertificate::Vanishes { theta } => {
                Err(SeriesError::NonInvertibleLeadingCoefficient(format!(
                    "{self} vanishes near θ = {theta:.6}"
                )))
            }
            _ => Err(SeriesError::UnrepresentableInverse(self.to_string())),
        }
    }
}

impl fmt::Display for CircleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.constant != 0.0 || self.is_constant() {
            terms.push(format!("{}", self.constant));
        }
        for &(m, a) in &self.cos {
            terms.push(format!("{a}·cos(2π·{m}θ)"));
        }
        for &(m, b) in &self.sin {
            terms.push(format!("{b}·sin(2π·{m}θ)"));
        }
        write!(f, "{}", terms.join(" + "))
    }
}
