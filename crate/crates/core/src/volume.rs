//! Cutoff integrals, the volume polynomial and the Liouville volume.
//!
//! All integrals are closed form: monomials in `y` against Fourier means in
//! `θ`. Inputs are `f64`, but the arithmetic here runs in exact rationals
//! (every finite float is a dyadic rational), so that `P(1/ε)` and the cutoff
//! volume can be subtracted at `ε = 10⁻⁴` with `k = 5` without catastrophic
//! cancellation. Results are rounded to `f64` only at the boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::bk_forms::{laurent_normal_form, BkSurfaceForm, FormError};

/// Default `ε` grid for asymptotic gap tables.
pub const DEFAULT_EPS_GRID: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VolumeError {
    #[error("cutoff ε = {eps} must lie in (0, {max})")]
    EpsilonOutOfRange { eps: f64, max: f64 },
    #[error(transparent)]
    Form(#[from] FormError),
}

pub type Result<T> = std::result::Result<T, VolumeError>;

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `x^n` for any integer `n` (`x ≠ 0` when `n < 0`).
fn powi(x: &BigRational, n: i64) -> BigRational {
    let p = num_traits::pow(x.clone(), n.unsigned_abs() as usize);
    if n < 0 {
        p.recip()
    } else {
        p
    }
}

/// `P(t) = q₀ + Σ q_j t^j` whose value at `1/ε` tracks the cutoff volume.
///
/// Only odd powers `t^{i−1}` (from even pole orders `i`) can be nonzero above
/// the constant term; the constructor takes the odd coefficients separately so
/// the even ones are zero by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumePolynomial {
    k: u32,
    coeffs: Vec<BigRational>,
    half_widths: Vec<(String, f64)>,
}

impl VolumePolynomial {
    /// `odd[m]` is the coefficient of `t^{2m+1}`; must fit below degree `k`.
    pub fn new(
        k: u32,
        constant: BigRational,
        odd: Vec<BigRational>,
        half_widths: Vec<(String, f64)>,
    ) -> Self {
        let len = k.max(1) as usize;
        let mut coeffs = vec![BigRational::zero(); len];
        coeffs[0] = constant;
        for (m, q) in odd.into_iter().enumerate() {
            let j = 2 * m + 1;
            assert!(j < len, "t^{j} exceeds degree {} for k = {k}", len - 1);
            coeffs[j] = q;
        }
        Self {
            k,
            coeffs,
            half_widths,
        }
    }

    pub fn pole_order(&self) -> u32 {
        self.k
    }

    /// `q₀, …, q_{k−1}` rounded to `f64`.
    pub fn coefficients(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn exact_coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn half_widths(&self) -> &[(String, f64)] {
        &self.half_widths
    }

    pub fn constant_term(&self) -> f64 {
        to_f64(&self.coeffs[0])
    }

    pub fn eval_exact(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, q| acc * t + q)
    }

    pub fn eval(&self, t: f64) -> f64 {
        to_f64(&self.eval_exact(&rat(t)))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.coefficients()
            .into_iter()
            .fold(0.0, |m, q| m.max(q.abs()))
    }
}

/// `∫_ε^R y^p dy + ∫_{−R}^{−ε} y^p dy`: zero for odd `p` (including the
/// cancelling logarithms at `p = −1`), twice one side for even `p`.
fn symmetric_shell(p: i64, eps: &BigRational, r: &BigRational) -> BigRational {
    if p.rem_euclid(2) == 1 {
        return BigRational::zero();
    }
    int(2) * (powi(r, p + 1) - powi(eps, p + 1)) / int(p + 1)
}

fn check_eps(form: &BkSurfaceForm, eps: f64) -> Result<()> {
    let max = form
        .collars()
        .iter()
        .map(|c| c.half_width())
        .fold(f64::INFINITY, f64::min);
    if !(eps > 0.0 && eps < max && eps.is_finite()) {
        return Err(VolumeError::EpsilonOutOfRange { eps, max });
    }
    Ok(())
}

/// `vol_ε = ∫_{M \ {|y| < ε}} ω`, exactly.
pub fn vol_cutoff_exact(form: &BkSurfaceForm, eps: f64) -> Result<BigRational> {
    check_eps(form, eps)?;
    let e = rat(eps);
    let k = i64::from(form.pole_order());
    let mut total = rat(form.bulk_integral());
    for piece in form.collars() {
        let r = rat(piece.half_width());
        let sign = rat(piece.orientation().sign());
        let mut collar = BigRational::zero();
        for (j, a) in piece.density().coeffs().iter().enumerate() {
            let mean = a.integrate_over_circle();
            if mean == 0.0 {
                continue;
            }
            collar += rat(mean) * symmetric_shell(j as i64 - k, &e, &r);
        }
        total += sign * collar;
    }
    Ok(total)
}

/// Cutoff volume: the bulk plus every collar with `|y| < ε` removed.
pub fn vol_cutoff(form: &BkSurfaceForm, eps: f64) -> Result<f64> {
    vol_cutoff_exact(form, eps).map(|v| to_f64(&v))
}

/// The polynomial `P` with `P(1/ε) − vol_ε(ω) → 0`:
///
/// `q₀ = bulk + ∫β + Σ_{i even} −2R^{1−i}/(i−1) ∫α_{−i}` and
/// `q_{i−1} = 2/(i−1) ∫α_{−i}` for even `i`, summed over circles.
pub fn volume_polynomial(form: &BkSurfaceForm) -> Result<VolumePolynomial> {
    let lnf = laurent_normal_form(form)?;
    let k = i64::from(lnf.k);
    let mut constant = rat(form.bulk_integral());
    let mut odd = vec![BigRational::zero(); k as usize / 2];
    let mut half_widths = Vec::new();
    for c in &lnf.circles {
        half_widths.push((c.circle.clone(), c.half_width));
        let r = rat(c.half_width);
        let sign = rat(c.orientation.sign());
        // smooth part over the whole collar [−R, R]
        let mut smooth = BigRational::zero();
        for (j, b) in c.smooth.coeffs().iter().enumerate() {
            let mean = b.integrate_over_circle();
            if j % 2 == 0 && mean != 0.0 {
                smooth += int(2) * rat(mean) * powi(&r, j as i64 + 1) / int(j as i64 + 1);
            }
        }
        constant += &sign * smooth;
        for i in (2..=k).step_by(2) {
            let alpha = c.alpha(i as u32).integrate_over_circle();
            if alpha == 0.0 {
                continue;
            }
            let a = &sign * rat(alpha);
            constant -= int(2) * powi(&r, 1 - i) * &a / int(i - 1);
            odd[(i as usize - 2) / 2] += int(2) * a / int(i - 1);
        }
    }
    Ok(VolumePolynomial::new(lnf.k, constant, odd, half_widths))
}

/// The constant term `P(0)`.
pub fn liouville_volume(form: &BkSurfaceForm) -> Result<f64> {
    Ok(volume_polynomial(form)?.constant_term())
}

/// In top degree on a surface, pairing the smooth part with the class of
/// the constant function 1 gives back the Liouville volume.
pub fn smooth_part_integral(form: &BkSurfaceForm) -> Result<f64> {
    liouville_volume(form)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GapRow {
    pub eps: f64,
    pub gap: f64,
}

/// `|P(1/ε) − vol_ε(ω)|` on each grid point, with the difference taken in
/// exact arithmetic.
pub fn asymptotic_gap(form: &BkSurfaceForm, grid: &[f64]) -> Result<Vec<GapRow>> {
    let poly = volume_polynomial(form)?;
    grid.iter()
        .map(|&eps| {
            let v = vol_cutoff_exact(form, eps)?;
            let p = poly.eval_exact(&rat(eps).recip());
            Ok(GapRow {
                eps,
                gap: to_f64(&(p - v).abs()),
            })
        })
        .collect()
}

/// Whether a gap table is nonincreasing as `ε` shrinks along the grid.
pub fn gaps_nonincreasing(rows: &[GapRow]) -> bool {
    rows.windows(2).all(|w| w[1].gap <= w[0].gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk_forms::{bump_factor, d_collar, BkCollarOneForm, CollarPiece, Orientation};
    use crate::series::{CircleFunction, CollarSeries};

    fn cf(c: f64) -> CircleFunction {
        CircleFunction::constant(c)
    }

    fn single(k: u32, a: Vec<CircleFunction>, order: usize, r: f64, bulk: f64) -> BkSurfaceForm {
        let piece = CollarPiece::new("Z1", r, k, CollarSeries::new(a, order), Orientation::Positive)
            .unwrap();
        BkSurfaceForm::new(k, "test", vec![piece], bulk).unwrap()
    }

    #[test]
    fn double_pole_cutoff() {
        // 2 ∫_{0.1}^{1} y^{-2} dy = 2 (10 - 1) = 18
        let f = single(2, vec![cf(1.0)], 2, 1.0, 0.0);
        assert_eq!(vol_cutoff_exact(&f, 0.1).unwrap(), rat(2.0) / rat(0.1) - int(2));
        assert!((vol_cutoff(&f, 0.1).unwrap() - 18.0).abs() < 1e-12);
    }

    #[test]
    fn simple_pole_logs_cancel() {
        let f = single(1, vec![cf(3.0)], 1, 1.0, 1.25);
        for eps in DEFAULT_EPS_GRID {
            assert_eq!(vol_cutoff(&f, eps).unwrap(), 1.25);
        }
    }

    #[test]
    fn odd_pole_is_invisible() {
        let f = single(3, vec![cf(1.0)], 3, 1.0, 0.0);
        assert_eq!(vol_cutoff(&f, 0.3).unwrap(), 0.0);
        let p = volume_polynomial(&f).unwrap();
        assert!(p.exact_coefficients().iter().all(Zero::is_zero));
    }

    #[test]
    fn double_pole_polynomial() {
        let f = single(2, vec![cf(1.0)], 2, 1.0, 0.0);
        let p = volume_polynomial(&f).unwrap();
        assert_eq!(p.coefficients(), vec![-2.0, 2.0]);
        assert_eq!(liouville_volume(&f).unwrap(), -2.0);
        assert_eq!(smooth_part_integral(&f).unwrap(), -2.0);
        let gaps = asymptotic_gap(&f, &DEFAULT_EPS_GRID).unwrap();
        assert!(gaps.iter().all(|g| g.gap == 0.0));
    }

    #[test]
    fn even_smooth_term_gap() {
        // A = 1 + y^2, k = 2: β = 1, gap = ∫_{-ε}^{ε} 1 dy = 2ε
        let f = single(2, vec![cf(1.0), cf(0.0), cf(1.0)], 2, 1.0, 0.0);
        let gaps = asymptotic_gap(&f, &DEFAULT_EPS_GRID).unwrap();
        for g in &gaps {
            assert!((g.gap - 2.0 * g.eps).abs() < 1e-15);
        }
        assert!(gaps_nonincreasing(&gaps));
    }

    #[test]
    fn odd_smooth_term_has_no_gap() {
        // A = 1 + y^3, k = 2: β = y is odd, so no mass near the circle
        let f = single(2, vec![cf(1.0), cf(0.0), cf(0.0), cf(1.0)], 3, 1.0, 0.0);
        let gaps = asymptotic_gap(&f, &DEFAULT_EPS_GRID).unwrap();
        assert!(gaps.iter().all(|g| g.gap == 0.0));
    }

    #[test]
    fn simple_pole_liouville_is_bulk() {
        let f = single(1, vec![cf(0.7)], 1, 0.5, -3.5);
        assert_eq!(liouville_volume(&f).unwrap(), -3.5);
        assert_eq!(volume_polynomial(&f).unwrap().coefficients(), vec![-3.5]);
    }

    #[test]
    fn smooth_form_integrates_normally() {
        // A = y^2 with k = 2 is the smooth density 1 on the collar: ∫ = 2R
        let f = single(2, vec![cf(0.0), cf(0.0), cf(1.0)], 2, 0.75, 0.5);
        assert_eq!(liouville_volume(&f).unwrap(), 0.5 + 1.5);
        let bulk_only = BkSurfaceForm::new(3, "bulk", vec![], 4.0).unwrap();
        assert_eq!(liouville_volume(&bulk_only).unwrap(), 4.0);
    }

    #[test]
    fn exact_collar_form_has_zero_polynomial() {
        let r = 0.8;
        let h = bump_factor(r, 1, 8)
            .mul(&CollarSeries::new(
                vec![CircleFunction::cos_mode(2, 0.4).unwrap(), cf(0.3)],
                8,
            ))
            .unwrap();
        let g = bump_factor(r, 2, 8)
            .mul(&CollarSeries::new(vec![cf(1.0), cf(-0.5)], 8))
            .unwrap();
        let mu = BkCollarOneForm::new("Z1", r, 3, h, g).unwrap();
        assert!(mu.is_compactly_supported());
        let piece = d_collar(&mu).unwrap();
        let form = BkSurfaceForm::new(3, "exact", vec![piece], 0.0).unwrap();
        let p = volume_polynomial(&form).unwrap();
        assert!(p.max_abs_coefficient() < 1e-14);
    }

    #[test]
    fn epsilon_range_is_checked() {
        let f = single(2, vec![cf(1.0)], 2, 0.5, 0.0);
        assert!(matches!(
            vol_cutoff(&f, 0.5),
            Err(VolumeError::EpsilonOutOfRange { .. })
        ));
        assert!(vol_cutoff(&f, 0.0).is_err());
        assert!(vol_cutoff(&f, 0.49).is_ok());
    }

    #[test]
    fn negative_orientation_flips_contributions() {
        let piece = CollarPiece::new("Z1", 1.0, 2, CollarSeries::new(vec![cf(-1.0)], 2), Orientation::Negative)
            .unwrap();
        let f = BkSurfaceForm::new(2, "t", vec![piece], 0.0).unwrap();
        assert_eq!(volume_polynomial(&f).unwrap().coefficients(), vec![-2.0, 2.0]);
        assert!((vol_cutoff(&f, 0.1).unwrap() - 18.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_matches_cutoff_for_nonconstant_density() {
        let a = vec![
            CircleFunction::new(1.5, vec![(3, 0.2)], vec![(1, 0.7)]).unwrap(),
            CircleFunction::new(0.25, vec![], vec![(2, 1.0)]).unwrap(),
            CircleFunction::new(-0.5, vec![(1, 0.1)], vec![]).unwrap(),
            CircleFunction::new(0.0, vec![(1, 0.1)], vec![]).unwrap(),
            cf(2.0),
            cf(1.0),
        ];
        let f = single(4, a, 5, 0.6, 0.3);
        let gaps = asymptotic_gap(&f, &DEFAULT_EPS_GRID).unwrap();
        // β = 2 + y with mean-zero odd part: gap = 2·2ε
        for g in &gaps {
            assert!((g.gap - 4.0 * g.eps).abs() < 1e-15, "{g:?}");
        }
    }
}
