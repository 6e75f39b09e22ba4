//! Polynomial normalization of residue data, changes of the defining
//! function within its jet class, and reparameterization of Laurent data.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bk_forms::{
    laurent_normal_form, BkSurfaceForm, CircleLaurentData, CollarPiece, FormError,
    LaurentNormalForm,
};
use crate::series::{
    expand_dp_over_pk, CircleFunction, Coefficient, CollarSeries, LaurentSeries, PowerSeries,
    RealPolynomial, Scalar, SeriesError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormalizeError {
    #[error("invalid residue vector: {0}")]
    InvalidResidueVector(String),
    #[error("normalizing polynomial failed verification: {0}")]
    VerificationFailed(String),
    #[error("circle {circle}: {reason}")]
    CollarFit { circle: String, reason: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Form(#[from] FormError),
}

pub type Result<T> = std::result::Result<T, NormalizeError>;

/// Absolute tolerance, relative to the size of the residue vector, that the
/// self-check of [`poly_pick`] accepts.
pub const VERIFY_TOL: f64 = 1e-11;

/// Relative mismatch allowed between a truncated collar density and the
/// exact pulled-back density on the edge of a refitted collar.
const COLLAR_FIT_TOL: f64 = 1e-12;

/// θ-nodes of the periodic trapezoid rule used for the region between an
/// old collar and a θ-dependent new one.
const BAND_NODES: usize = 512;

/// `(a_{−1}, …, a_{−k})` with `a_{−k} > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ResidueVector {
    values: Vec<f64>,
}

impl ResidueVector {
    /// `values[i − 1]` is `a_{−i}`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let Some(&lead) = values.last() else {
            return Err(NormalizeError::InvalidResidueVector(
                "at least one entry is required".into(),
            ));
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(NormalizeError::InvalidResidueVector(
                "entries must be finite".into(),
            ));
        }
        if !(lead > 0.0) {
            return Err(NormalizeError::InvalidResidueVector(format!(
                "leading entry a_-{} = {lead} must be positive",
                values.len()
            )));
        }
        Ok(Self { values })
    }

    pub fn k(&self) -> u32 {
        self.values.len() as u32
    }

    /// `a_{−i}`.
    pub fn a(&self, i: u32) -> f64 {
        self.values[i as usize - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn scale(&self) -> f64 {
        self.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
    }
}

impl TryFrom<Vec<f64>> for ResidueVector {
    type Error = NormalizeError;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ResidueVector> for Vec<f64> {
    fn from(v: ResidueVector) -> Self {
        v.values
    }
}

/// `Σ_i a_{−i} P'/P^i` to absolute order `order`, in the scalar type `S`.
pub fn residue_expansion<S: Scalar>(
    a: &ResidueVector,
    poly: &RealPolynomial,
    order: i32,
) -> Result<LaurentSeries<S>> {
    let k = a.k();
    let mut acc = LaurentSeries::<S>::zero(order);
    for i in 1..=k {
        let term = expand_dp_over_pk::<S>(poly, i, order)?.scale(&S::from_f64(a.a(i)))?;
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Coefficients `(b_{−k}, …, b_{−1})` of `Σ a_{−i} P'/P^i`, evaluated exactly
/// from the floating coefficients of `P` and rounded once.
pub fn principal_coefficients(a: &ResidueVector, poly: &RealPolynomial) -> Result<Vec<f64>> {
    let k = a.k() as i32;
    let e = residue_expansion::<BigRational>(a, poly, -1)?;
    Ok((1..=k).rev().map(|i| e.coeff(-i).to_f64()).collect())
}

/// A polynomial `P` with `P(0) = 0`, `P'(0) > 0` such that
/// `Σ a_{−i} P'/P^i = 1/y^k + 0/y^{k−1} + … + 0/y² + a_{−1}/y + O(1)`.
///
/// Starts from `P = c·y` with `c = a_{−k}^{1/(k−1)}` and removes the
/// intermediate coefficients one degree at a time with
/// `P ← P + t·P^{j+1}`, `t = −b_{−k+j} p₁^{k−j−1} / (a_{−k}(j+1−k))`.
/// The result is truncated to degree `max(order, k)` and checked by exact
/// series expansion before it is returned.
pub fn poly_pick(a: &ResidueVector, order: usize) -> Result<RealPolynomial> {
    let k = a.k();
    let lead = a.a(k);
    if k == 1 {
        let p = RealPolynomial::identity();
        verify_pick(a, &p)?;
        return Ok(p);
    }
    let degree = order.max(k as usize);
    let c = lead.powf(1.0 / f64::from(k - 1));
    let mut p = RealPolynomial::new(vec![0.0, c]);
    for j in 1..=k.saturating_sub(2) {
        let e = residue_expansion::<f64>(a, &p, -1)?;
        let b = e.coeff(j as i32 - k as i32);
        if b == 0.0 {
            continue;
        }
        let p1 = p.coeff(1);
        let t = -b * p1.powi((k - j - 1) as i32) / (lead * f64::from(j as i32 + 1 - k as i32));
        p = p.add(&p.powi(j + 1).scale(t)).truncate(degree);
    }
    verify_pick(a, &p)?;
    Ok(p)
}

fn verify_pick(a: &ResidueVector, p: &RealPolynomial) -> Result<()> {
    let k = a.k() as usize;
    let b = principal_coefficients(a, p)?;
    let tol = VERIFY_TOL * a.scale();
    let mut target = vec![0.0; k];
    target[0] = 1.0;
    target[k - 1] = a.a(1);
    for (idx, (got, want)) in b.iter().zip(&target).enumerate() {
        if !((got - want).abs() <= tol) {
            return Err(NormalizeError::VerificationFailed(format!(
                "coefficient of y^-{} is {got}, expected {want}",
                k - idx
            )));
        }
    }
    Ok(())
}

/// The substitution `y₂ = y(1 + g·y^{k−1})`, which leaves the `(k−1)`-jet of
/// the defining function unchanged. `g` is read as a polynomial in `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetChange {
    g: CollarSeries,
}

impl JetChange {
    pub fn new(g: CollarSeries) -> Self {
        Self { g }
    }

    pub fn identity() -> Self {
        Self::new(CollarSeries::zero(0))
    }

    pub fn g(&self) -> &CollarSeries {
        &self.g
    }

    /// `y₂` as a polynomial in `y`.
    pub fn new_coordinate(&self, k: u32) -> CollarSeries {
        let order = self.g.order() + k as usize;
        pad(&self.g, self.g.order())
            .shift_up(k as usize)
            .add(&CollarSeries::monomial(1, CircleFunction::one(), order))
    }

    /// `(y₂, ∂y₂/∂y)` at a point.
    pub fn eval(&self, k: u32, y: f64, theta: f64) -> (f64, f64) {
        let g = self.g.eval(y, theta);
        let dg = self.g.eval_dy(y, theta);
        let km1 = (k - 1) as i32;
        let value = y * (1.0 + g * y.powi(km1));
        let slope = 1.0 + f64::from(k) * g * y.powi(km1) + dg * y.powi(k as i32);
        (value, slope)
    }
}

/// `dy₂/y₂^k − dy/y^k = dy_part·dy + dtheta_part·dθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetDefect {
    pub dy_part: LaurentSeries<CircleFunction>,
    pub dtheta_part: LaurentSeries<CircleFunction>,
}

impl JetDefect {
    pub fn has_zero_principal_part(&self) -> bool {
        self.dy_part.has_zero_principal_part() && self.dtheta_part.has_zero_principal_part()
    }
}

/// Laurent series of `dy₂/y₂^k − dy/y^k` up to degree `order`.
///
/// With `w = g y^{k−1}`, `∂y₂/∂y − (1+w)^k = y^k ∂_y g − Σ_{m≥2} C(k,m) w^m`,
/// so the `dy` coefficient is `y^{−k}` times a series that starts at `y^k`;
/// the `dθ` coefficient is `∂_θ g (1+w)^{−k}`.
pub fn jet_equivalence_defect(k: u32, change: &JetChange, order: i32) -> Result<JetDefect> {
    let ku = k as usize;
    let rel = (order + k as i32).max(0) as usize;
    let g = pad(&change.g, rel + 1);
    let w = g.shift_up(ku - 1).truncate(rel);
    let one_plus_w = CollarSeries::one(rel).add(&w);
    let inv_k = one_plus_w.reciprocal()?.powi(k)?;

    let mut numerator = g.derivative().shift_up(ku).truncate(rel);
    let mut w_pow = w.clone();
    for m in 2..=ku {
        w_pow = w_pow.mul(&w)?;
        numerator = numerator.sub(&w_pow.scale(&CircleFunction::constant(binomial(k, m as u32)))?);
    }
    let dy_body = numerator.mul(&inv_k)?;
    let dy_part = LaurentSeries::from_power_series(-(k as i32), dy_body);

    let dtheta_body = g.theta_derivative().truncate(rel).mul(&inv_k)?;
    let order_rel = order.max(0) as usize;
    let dtheta_part = LaurentSeries::from_power_series(0, dtheta_body.truncate(order_rel));
    Ok(JetDefect {
        dy_part,
        dtheta_part,
    })
}

fn binomial(n: u32, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// Treats `s` as a polynomial and re-declares it known to `order`.
fn pad(s: &CollarSeries, order: usize) -> CollarSeries {
    PowerSeries::new(s.coeffs().to_vec(), order)
}

/// Laurent data pulled back along `y ↦ P(y)`:
/// `α'_{−i} = Σ_j [y^{−i}](P'/P^j)·α_{−j}` and
/// `β' = Σ_j (P'/P^j)_{≥0}·α_{−j} + β(P)·P'`, with `β'` known to degree `order`.
///
/// The principal coefficients of `P'/P^j` are computed in exact rational
/// arithmetic, so the residue coefficient of `P'/P` is exactly 1 and the
/// others exactly 0.
pub fn reparam_decomposition(
    lnf: &LaurentNormalForm,
    poly: &RealPolynomial,
    order: usize,
) -> Result<LaurentNormalForm> {
    poly.check_normalizing()?;
    let k = lnf.k;
    let exact: Vec<LaurentSeries<BigRational>> = (1..=k)
        .map(|j| expand_dp_over_pk::<BigRational>(poly, j, -1))
        .collect::<std::result::Result<_, _>>()?;
    let regular: Vec<CollarSeries> = (1..=k)
        .map(|j| {
            expand_dp_over_pk::<f64>(poly, j, order as i32)
                .map(|e| CollarSeries::from_scalar(&e.regular_part()))
        })
        .collect::<std::result::Result<_, _>>()?;
    let p_series = CollarSeries::from_scalar(&poly.to_series::<f64>(order));
    let dp_series = CollarSeries::from_scalar(&poly.derivative().to_series::<f64>(order));

    let circles = lnf
        .circles
        .iter()
        .map(|c| {
            let singular = (1..=k)
                .map(|i| {
                    (i..=k).fold(CircleFunction::zero(), |acc, j| {
                        let factor = exact[j as usize - 1].coeff(-(i as i32)).to_f64();
                        acc.add(&c.alpha(j).scale(factor))
                    })
                })
                .collect();
            let mut smooth = pad(&c.smooth, order).compose(&p_series)?.mul(&dp_series)?;
            for j in 1..=k {
                smooth = smooth.add(&regular[j as usize - 1].scale(c.alpha(j))?);
            }
            Ok(CircleLaurentData {
                circle: c.circle.clone(),
                orientation: c.orientation,
                half_width: c.half_width,
                singular,
                smooth,
            })
        })
        .collect::<Result<_>>()?;
    Ok(LaurentNormalForm { k, circles })
}

/// The form written in the coordinate `y'` with `y = P(y')` on every collar.
///
/// Each collar is refitted to a half-width `R'` on which `P` is increasing,
/// maps into the old collar and the truncated pulled-back density matches
/// the exact one; the region between `P([−R', R'])` and the old collar
/// moves into the bulk integral.
pub fn pullback_form(form: &BkSurfaceForm, poly: &RealPolynomial, order: usize) -> Result<BkSurfaceForm> {
    let lnf = laurent_normal_form(form)?;
    let pulled = reparam_decomposition(&lnf, poly, order)?;
    let dp = poly.derivative();
    let mut bulk = form.bulk_integral();
    let mut collars = Vec::with_capacity(form.collars().len());
    for (piece, data) in form.collars().iter().zip(&pulled.circles) {
        let density = data.reconstruct_density();
        let start = piece.half_width() / poly.coeff(1);
        let (fitted, delta) = refit_collar(piece, density, start, false, |y_new, _| {
            Some((poly.eval(y_new), dp.eval(y_new)))
        })?;
        bulk += delta;
        collars.push(fitted);
    }
    Ok(BkSurfaceForm::new(
        form.pole_order(),
        form.descriptor(),
        collars,
        bulk,
    )?)
}

/// The form written in the coordinate `y₂ = y(1 + g y^{k−1})` on every
/// collar, with densities known to degree `order`.
pub fn jet_change_form(form: &BkSurfaceForm, change: &JetChange, order: usize) -> Result<BkSurfaceForm> {
    let k = form.pole_order();
    let ku = k as usize;
    let work = order + ku + 1;
    let y2 = change.new_coordinate(k).truncate(work);
    let y2 = pad(&y2, work);
    let inverse = invert_jet(&change.g, k, work)?;
    let dinverse = inverse.derivative();
    let ratio = inverse
        .shift_down(1)
        .expect("the inverse has no constant term");
    let ratio_inv_k = ratio.reciprocal()?.powi(k)?;
    debug_assert_eq!(y2.coeff(0), CircleFunction::zero());

    let mut bulk = form.bulk_integral();
    let mut collars = Vec::with_capacity(form.collars().len());
    for piece in form.collars() {
        let a = pad(piece.density(), work);
        let density = a
            .compose(&inverse)?
            .mul(&dinverse)?
            .mul(&ratio_inv_k)?
            .truncate(order);
        let r = piece.half_width();
        let (fitted, delta) = refit_collar(piece, density, r, true, |y_new, theta| {
            solve_jet(change, k, r, y_new, theta)
        })?;
        bulk += delta;
        collars.push(fitted);
    }
    Ok(BkSurfaceForm::new(k, form.descriptor(), collars, bulk)?)
}

/// Series `h` with `y₂(h(y₂)) = y₂`, to relative order `order`.
fn invert_jet(g: &CollarSeries, k: u32, order: usize) -> Result<CollarSeries> {
    let g = pad(g, order);
    let id = CollarSeries::monomial(1, CircleFunction::one(), order);
    let mut h = id.clone();
    for _ in 0..=order {
        let g_h = g.compose(&h)?;
        let factor = CollarSeries::one(order).add(&g_h.mul(&h.powi(k - 1)?)?);
        h = id.mul(&factor.reciprocal()?)?;
    }
    Ok(h)
}

/// The old coordinate `y` with `y₂(y, θ) = y_new`, and `∂y/∂y₂` there.
fn solve_jet(change: &JetChange, k: u32, r: f64, y_new: f64, theta: f64) -> Option<(f64, f64)> {
    if y_new == 0.0 {
        let (_, slope) = change.eval(k, 0.0, theta);
        return (slope > 0.0).then(|| (0.0, 1.0 / slope));
    }
    let (mut lo, mut hi) = if y_new > 0.0 { (0.0, r) } else { (-r, 0.0) };
    let f = |y: f64| change.eval(k, y, theta).0 - y_new;
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo <= 0.0 && fhi >= 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    let (_, slope) = change.eval(k, y, theta);
    (slope > 0.0).then(|| (y, 1.0 / slope))
}

/// `∫_a^b y^p dy` for `a, b` of one sign.
fn monomial_integral(p: i32, a: f64, b: f64) -> f64 {
    if p == -1 {
        (b / a).ln()
    } else {
        let q = p + 1;
        (b.powi(q) - a.powi(q)) / f64::from(q)
    }
}

/// `∫_a^b A(y, θ)/y^k dy` for `a, b` of one sign.
fn band_integral(density: &CollarSeries, k: u32, theta: Option<f64>, a: f64, b: f64) -> f64 {
    density
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            let weight = match theta {
                Some(t) => c.eval(t),
                None => c.integrate_over_circle(),
            };
            weight * monomial_integral(j as i32 - k as i32, a, b)
        })
        .sum()
}

/// Shrinks a trial half-width until the new collar embeds in the old one
/// monotonically and `density` matches the exact pulled-back density on its
/// edge; returns the new piece and the signed integral of the band between
/// the two collars.
fn refit_collar(
    piece: &CollarPiece,
    density: CollarSeries,
    start: f64,
    theta_dependent: bool,
    old_of_new: impl Fn(f64, f64) -> Option<(f64, f64)>,
) -> Result<(CollarPiece, f64)> {
    let k = piece.pole_order();
    let r = piece.half_width();
    let old = piece.density();
    let thetas: Vec<f64> = (0..64).map(|m| m as f64 / 64.0).collect();
    let fits = |r_new: f64| -> bool {
        for &theta in &thetas {
            let mut prev = f64::NEG_INFINITY;
            for s in 0..=64 {
                let y_new = r_new * (2.0 * s as f64 / 64.0 - 1.0);
                let Some((y, slope)) = old_of_new(y_new, theta) else {
                    return false;
                };
                if !(y > prev && slope > 0.0 && y.abs() <= r) {
                    return false;
                }
                prev = y;
            }
            for y_new in [-r_new, r_new] {
                let (y, slope) = old_of_new(y_new, theta).expect("checked above");
                let exact = old.eval(y, theta) * (y_new / y).powi(k as i32) * slope;
                let approx = density.eval(y_new, theta);
                if !((approx - exact).abs() <= COLLAR_FIT_TOL * exact.abs().max(1.0)) {
                    return false;
                }
            }
        }
        true
    };
    let mut r_new = start;
    let mut found = false;
    for _ in 0..120 {
        if fits(r_new) {
            found = true;
            break;
        }
        r_new *= 0.8;
    }
    if !found {
        return Err(NormalizeError::CollarFit {
            circle: piece.circle().to_string(),
            reason: "no collar width keeps the change of coordinate monotone and the truncation accurate".into(),
        });
    }

    let band = |theta: Option<f64>, t: f64| -> f64 {
        let (upper, _) = old_of_new(r_new, t).expect("checked by fits");
        let (lower, _) = old_of_new(-r_new, t).expect("checked by fits");
        let mut total = 0.0;
        if upper < r {
            total += band_integral(old, k, theta, upper, r);
        }
        if lower > -r {
            total += band_integral(old, k, theta, -r, lower);
        }
        total
    };
    let delta = if theta_dependent {
        (0..BAND_NODES)
            .map(|m| {
                let t = m as f64 / BAND_NODES as f64;
                band(Some(t), t)
            })
            .sum::<f64>()
            / BAND_NODES as f64
    } else {
        band(None, 0.0)
    };
    let fitted = CollarPiece::new(piece.circle(), r_new, k, density, piece.orientation())?;
    Ok((fitted, piece.orientation().sign() * delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk_forms::Orientation;
    use crate::volume::{liouville_volume, volume_polynomial};

    fn residues(v: &[f64]) -> ResidueVector {
        ResidueVector::new(v.to_vec()).unwrap()
    }

    fn constant_density(values: &[f64], order: usize) -> CollarSeries {
        PowerSeries::new(values.iter().map(|&v| CircleFunction::constant(v)).collect(), order)
    }

    fn one_circle(k: u32, density: CollarSeries, r: f64, bulk: f64) -> BkSurfaceForm {
        let piece = CollarPiece::new("z", r, k, density, Orientation::Positive).unwrap();
        BkSurfaceForm::new(k, "test", vec![piece], bulk).unwrap()
    }

    #[test]
    fn residue_vector_rejects_nonpositive_lead() {
        assert!(ResidueVector::new(vec![1.0, 0.0]).is_err());
        assert!(ResidueVector::new(vec![]).is_err());
        assert!(ResidueVector::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ResidueVector::new(vec![-3.0, 2.0]).is_ok());
    }

    #[test]
    fn pick_k1_is_identity() {
        assert_eq!(poly_pick(&residues(&[5.0]), 16).unwrap(), RealPolynomial::identity());
    }

    #[test]
    fn pick_k2_unit_lead_is_identity() {
        let p = poly_pick(&residues(&[3.0, 1.0]), 16).unwrap();
        assert_eq!(p, RealPolynomial::identity());
        let b = principal_coefficients(&residues(&[3.0, 1.0]), &p).unwrap();
        assert_eq!(b, vec![1.0, 3.0]);
    }

    #[test]
    fn pick_k3_fixture() {
        let a = residues(&[0.0, 1.0, 1.0]);
        let p = poly_pick(&a, 16).unwrap();
        assert_eq!(p, RealPolynomial::new(vec![0.0, 1.0, 1.0]));
        assert_eq!(principal_coefficients(&a, &p).unwrap(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn pick_scales_leading_coefficient() {
        // a_{−k} c^{1−k} = 1 for c = a_{−k}^{1/(k−1)}
        let a = residues(&[0.0, 0.0, 8.0]);
        let p = poly_pick(&a, 16).unwrap();
        assert!((p.coeff(1) - 8f64.sqrt()).abs() < 1e-15);
        let b = principal_coefficients(&a, &p).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pick_general_k6() {
        let a = residues(&[0.7, -1.3, 2.1, 0.4, -0.9, 2.5]);
        let p = poly_pick(&a, 16).unwrap();
        let b = principal_coefficients(&a, &p).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-12);
        for bi in &b[1..5] {
            assert!(bi.abs() < 1e-12, "{b:?}");
        }
        assert!((b[5] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn defect_zero_for_trivial_change() {
        let d = jet_equivalence_defect(3, &JetChange::identity(), 6).unwrap();
        assert!(d.has_zero_principal_part());
        assert!(d.dy_part.regular_part().is_zero());
        assert!(d.dtheta_part.regular_part().is_zero());
    }

    #[test]
    fn defect_k3_g1_is_smooth_and_matches_pointwise() {
        let change = JetChange::new(CollarSeries::constant(CircleFunction::one(), 0));
        let d = jet_equivalence_defect(3, &change, 16).unwrap();
        assert!(d.has_zero_principal_part());
        assert!(!d.dy_part.regular_part().is_zero());
        // (1 + 3y²)/(y + y³)³ − 1/y³ evaluated directly
        for &y in &[0.02_f64, 0.05, 0.1] {
            let direct = (1.0 + 3.0 * y * y) / (y + y * y * y).powi(3) - y.powi(-3);
            let series = d.dy_part.regular_part().eval(y, 0.3);
            assert!((direct - series).abs() < 1e-9, "{direct} {series}");
        }
    }

    #[test]
    fn defect_k1_has_no_pole() {
        let g = PowerSeries::new(
            vec![CircleFunction::constant(0.5), CircleFunction::cos_mode(1, 0.2).unwrap()],
            1,
        );
        let d = jet_equivalence_defect(1, &JetChange::new(g), 6).unwrap();
        assert!(d.has_zero_principal_part());
    }

    #[test]
    fn reparam_identity() {
        let form = one_circle(2, constant_density(&[1.0, 0.5, 0.25], 4), 1.0, 0.0);
        let lnf = laurent_normal_form(&form).unwrap();
        let out = reparam_decomposition(&lnf, &RealPolynomial::identity(), 4).unwrap();
        assert_eq!(out.circles[0].singular, lnf.circles[0].singular);
        for j in 0..=2 {
            assert_eq!(out.circles[0].smooth.coeff(j), lnf.circles[0].smooth.coeff(j));
        }
    }

    #[test]
    fn reparam_by_scaling_halves_double_pole() {
        let form = one_circle(2, constant_density(&[1.0], 2), 1.0, 0.0);
        let lnf = laurent_normal_form(&form).unwrap();
        let p = RealPolynomial::new(vec![0.0, 2.0]);
        let out = reparam_decomposition(&lnf, &p, 4).unwrap();
        assert_eq!(out.circles[0].alpha(2), &CircleFunction::constant(0.5));
        assert!(out.circles[0].alpha(1).is_zero());
    }

    #[test]
    fn reparam_preserves_residue() {
        let density = PowerSeries::new(
            vec![
                CircleFunction::new(2.0, vec![(1, 0.3)], vec![]).unwrap(),
                CircleFunction::new(-0.7, vec![], vec![(2, 0.1)]).unwrap(),
                CircleFunction::constant(0.4),
                CircleFunction::constant(1.1),
            ],
            5,
        );
        let form = one_circle(3, density, 0.8, 1.0);
        let lnf = laurent_normal_form(&form).unwrap();
        let p = RealPolynomial::new(vec![0.0, 1.5, -0.4, 0.3]);
        let out = reparam_decomposition(&lnf, &p, 8).unwrap();
        assert_eq!(
            out.circles[0].residue_integral(1),
            lnf.circles[0].residue_integral(1)
        );
    }

    #[test]
    fn pullback_preserves_liouville_volume() {
        let density = PowerSeries::new(
            vec![
                CircleFunction::new(2.0, vec![(1, 0.3)], vec![]).unwrap(),
                CircleFunction::new(-0.7, vec![], vec![(2, 0.1)]).unwrap(),
                CircleFunction::constant(0.4),
                CircleFunction::constant(1.1),
            ],
            5,
        );
        let form = one_circle(3, density, 0.5, 1.0);
        let p = RealPolynomial::new(vec![0.0, 1.2, 0.3, -0.2]);
        let pulled = pullback_form(&form, &p, 24).unwrap();
        let before = liouville_volume(&form).unwrap();
        let after = liouville_volume(&pulled).unwrap();
        assert!((before - after).abs() < 1e-9, "{before} {after}");
    }

    #[test]
    fn jet_change_preserves_volume_polynomial() {
        let density = PowerSeries::new(
            vec![
                CircleFunction::new(1.5, vec![(1, 0.3)], vec![]).unwrap(),
                CircleFunction::new(-0.2, vec![], vec![(1, 0.4)]).unwrap(),
                CircleFunction::constant(0.4),
            ],
            4,
        );
        let form = one_circle(2, density, 0.4, 0.25);
        let g = PowerSeries::new(
            vec![
                CircleFunction::new(0.3, vec![(1, 0.2)], vec![]).unwrap(),
                CircleFunction::constant(-0.1),
            ],
            1,
        );
        let changed = jet_change_form(&form, &JetChange::new(g), 24).unwrap();
        let p0 = volume_polynomial(&form).unwrap().coefficients();
        let p1 = volume_polynomial(&changed).unwrap().coefficients();
        for (a, b) in p0.iter().zip(&p1) {
            assert!((a - b).abs() < 1e-8, "{p0:?} {p1:?}");
        }
    }
}
