//! Seeded random inputs for property checks and the self-test.

use rand::Rng;

use crate::bk_forms::{bump_factor, BkCollarOneForm, BkSurfaceForm, CollarPiece, Orientation};
use crate::normalize::{JetChange, ResidueVector};
use crate::series::{CircleFunction, Coefficient, CollarSeries, PowerSeries, RealPolynomial};

/// Shape of randomly generated surface forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormShape {
    pub k: u32,
    pub max_frequency: u32,
    /// Degree of the smooth remainder `β` in `y`.
    pub smooth_degree: usize,
    pub circles: usize,
}

/// A trig polynomial with modes up to `max_frequency` and total amplitude
/// (sum of absolute Fourier coefficients) at most `budget`.
pub fn random_circle_function<R: Rng>(
    rng: &mut R,
    max_frequency: u32,
    budget: f64,
    with_constant: bool,
) -> CircleFunction {
    let modes = if max_frequency == 0 {
        0
    } else {
        rng.gen_range(0..=3.min(max_frequency as usize))
    };
    let mut freqs: Vec<u32> = (0..modes).map(|_| rng.gen_range(1..=max_frequency)).collect();
    freqs.sort_unstable();
    freqs.dedup();
    let share = budget / (2 * freqs.len() + 1) as f64;
    let amp = |rng: &mut R| rng.gen_range(-share..=share);
    let constant = if with_constant { amp(rng) } else { 0.0 };
    let cos = freqs.iter().map(|&m| (m, amp(rng))).collect();
    let sin = freqs.iter().map(|&m| (m, amp(rng))).collect();
    CircleFunction::new(constant, cos, sin).expect("frequencies within the cap")
}

/// A positively oriented b^k-symplectic form: on every collar
/// `|A − A₀| ≤ 1 < |A₀|`, where `A₀` is the constant term of the leading
/// coefficient.
pub fn random_form<R: Rng>(rng: &mut R, shape: FormShape) -> BkSurfaceForm {
    let k = shape.k as usize;
    let order = k + shape.smooth_degree;
    let collars = (0..shape.circles)
        .map(|c| {
            let r: f64 = rng.gen_range(0.3..1.0);
            let orientation = if rng.gen_bool(0.5) {
                Orientation::Positive
            } else {
                Orientation::Negative
            };
            let lead = orientation.sign() * rng.gen_range(1.5..3.0);
            let per_term = 1.0 / (order + 1) as f64;
            let coeffs = (0..=order)
                .map(|j| {
                    let budget = per_term / r.powi(j as i32);
                    let f = random_circle_function(rng, shape.max_frequency, budget, j > 0);
                    if j == 0 {
                        CircleFunction::constant(lead).add(&f)
                    } else {
                        f
                    }
                })
                .collect();
            CollarPiece::new(
                format!("Z{}", c + 1),
                r,
                shape.k,
                PowerSeries::new(coeffs, order),
                orientation,
            )
            .expect("valid collar")
        })
        .collect();
    let bulk = rng.gen_range(-2.0..2.0);
    BkSurfaceForm::new(shape.k, "random", collars, bulk).expect("valid form")
}

/// `P` with `P(0) = 0`, `P'(0) ∈ [0.5, 2]` and small higher coefficients.
pub fn random_normalizing_polynomial<R: Rng>(rng: &mut R, max_degree: usize) -> RealPolynomial {
    let degree = rng.gen_range(1..=max_degree.max(1));
    let mut coeffs = vec![0.0, rng.gen_range(0.5..2.0)];
    for _ in 2..=degree {
        coeffs.push(rng.gen_range(-0.5..0.5));
    }
    RealPolynomial::new(coeffs)
}

pub fn random_residue_vector<R: Rng>(rng: &mut R, k: u32) -> ResidueVector {
    let mut values: Vec<f64> = (0..k).map(|_| rng.gen_range(-3.0..3.0)).collect();
    values[k as usize - 1] = rng.gen_range(0.1..3.0);
    ResidueVector::new(values).expect("positive leading entry")
}

/// `g = g₀(θ) + g₁ y` with small coefficients; `g₀` is constant when
/// `k = 1`, where `1 + g₀` must have a trigonometric reciprocal.
pub fn random_jet_change<R: Rng>(rng: &mut R, k: u32, max_frequency: u32) -> JetChange {
    let freq = if k == 1 { 0 } else { max_frequency };
    let g0 = random_circle_function(rng, freq, 0.3, true);
    let g1 = random_circle_function(rng, freq, 0.3, true);
    JetChange::new(PowerSeries::new(vec![g0, g1], 1))
}

/// `μ = h dy/y^k + g dθ` with `h, g` divisible by `(R² − y²)`, hence
/// vanishing at the edge of the collar.
pub fn random_compact_one_form<R: Rng>(
    rng: &mut R,
    k: u32,
    max_frequency: u32,
    degree: usize,
) -> BkCollarOneForm {
    let r: f64 = rng.gen_range(0.3..1.0);
    let order = degree + k as usize + 2;
    let bump = bump_factor(r, 1, order);
    let poly = |rng: &mut R| -> CollarSeries {
        let coeffs = (0..=degree)
            .map(|_| random_circle_function(rng, max_frequency, 1.0, true))
            .collect();
        PowerSeries::new(coeffs, order)
            .mul(&bump)
            .expect("frequencies within the cap")
    };
    let h = poly(rng);
    let g = poly(rng);
    BkCollarOneForm::new("Z1", r, k, h, g).expect("valid one-form")
}
