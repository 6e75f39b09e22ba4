//! Top-degree b^k-forms on model surfaces.
//!
//! Near each circle `γ_r` of the singular locus the form is stored as its raw
//! density, `ω = A(y, θ) / y^k · dy∧dθ` on `γ_r × [−R, R]`. Everything outside
//! the collars is summarized by the single number `bulk_integral`. The
//! Laurent decomposition `Σ dy/y^i ∧ α_{−i} + β` is derived from `A` on demand.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{
    CircleFunction, Coefficient, CollarSeries, PowerSeries, SeriesError, SignCertificate,
    POSITIVITY_SAMPLES,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("circle {circle}: density order {order} is below the pole order {k}")]
    InsufficientOrder { circle: String, order: usize, k: u32 },
    #[error("circle {circle}: density vanishes on the singular circle near θ = {theta:.6}")]
    DegenerateOnZ { circle: String, theta: f64 },
    #[error("circle {circle}: {reason}")]
    InvalidCollar { circle: String, reason: String },
    #[error("all collars must share one pole order (found {found}, expected {expected})")]
    MixedPoleOrders { expected: u32, found: u32 },
    #[error("circle id {0} appears more than once")]
    DuplicateCircle(String),
    #[error("bulk integral must be finite")]
    NonFiniteBulk,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, FormError>;

/// Whether `dy∧dθ` agrees with the orientation of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }
}

impl TryFrom<i8> for Orientation {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Orientation::Positive),
            -1 => Ok(Orientation::Negative),
            other => Err(format!("orientation must be +1 or -1, got {other}")),
        }
    }
}

impl From<Orientation> for i8 {
    fn from(o: Orientation) -> i8 {
        match o {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

/// The raw datum `A(y, θ)/y^k dy∧dθ` on one collar `γ × [−R, R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollarPiece {
    circle: String,
    half_width: f64,
    pole_order: u32,
    density: CollarSeries,
    orientation: Orientation,
}

impl CollarPiece {
    pub fn new(
        circle: impl Into<String>,
        half_width: f64,
        pole_order: u32,
        density: CollarSeries,
        orientation: Orientation,
    ) -> Result<Self> {
        let circle = circle.into();
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(FormError::InvalidCollar {
                circle,
                reason: format!("half-width must be positive, got {half_width}"),
            });
        }
        if pole_order == 0 {
            return Err(FormError::InvalidCollar {
                circle,
                reason: "pole order must be at least 1".into(),
            });
        }
        if density.order() < pole_order as usize {
            return Err(FormError::InsufficientOrder {
                circle,
                order: density.order(),
                k: pole_order,
            });
        }
        Ok(Self {
            circle,
            half_width,
            pole_order,
            density,
            orientation,
        })
    }

    pub fn circle(&self) -> &str {
        &self.circle
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn density(&self) -> &CollarSeries {
        &self.density
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `A(0, θ)`, the density along the circle itself.
    pub fn density_on_circle(&self) -> &CircleFunction {
        &self.density.coeffs()[0]
    }
}

/// A degree-2 b^k-form on a surface: one collar per circle plus the integral
/// of the form over the complement of all collars.
#[derive(Debug, Clone, PartialEq)]
pub struct BkSurfaceForm {
    k: u32,
    descriptor: String,
    collars: Vec<CollarPiece>,
    bulk_integral: f64,
}

impl BkSurfaceForm {
    pub fn new(
        k: u32,
        descriptor: impl Into<String>,
        collars: Vec<CollarPiece>,
        bulk_integral: f64,
    ) -> Result<Self> {
        if k == 0 {
            return Err(FormError::MixedPoleOrders {
                expected: 1,
                found: 0,
            });
        }
        if !bulk_integral.is_finite() {
            return Err(FormError::NonFiniteBulk);
        }
        for (i, c) in collars.iter().enumerate() {
            if c.pole_order != k {
                return Err(FormError::MixedPoleOrders {
                    expected: k,
                    found: c.pole_order,
                });
            }
            if collars[..i].iter().any(|o| o.circle == c.circle) {
                return Err(FormError::DuplicateCircle(c.circle.clone()));
            }
        }
        Ok(Self {
            k,
            descriptor: descriptor.into(),
            collars,
            bulk_integral,
        })
    }

    pub fn pole_order(&self) -> u32 {
        self.k
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn collars(&self) -> &[CollarPiece] {
        &self.collars
    }

    pub fn collar(&self, circle: &str) -> Option<&CollarPiece> {
        self.collars.iter().find(|c| c.circle == circle)
    }

    pub fn bulk_integral(&self) -> f64 {
        self.bulk_integral
    }

    pub fn with_bulk_integral(&self, bulk_integral: f64) -> Self {
        Self {
            bulk_integral,
            ..self.clone()
        }
    }

    /// Top degree on a surface: every such form is closed.
    pub fn degree(&self) -> u32 {
        2
    }
}

/// A collar-supported b^k one-form `μ = h(y,θ) dy/y^k + g(y,θ) dθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BkCollarOneForm {
    circle: String,
    half_width: f64,
    pole_order: u32,
    h: CollarSeries,
    g: CollarSeries,
    compact_support: bool,
}

/// Largest Fourier amplitude sum tolerated at `|y| = R` for compact support.
const SUPPORT_TOLERANCE: f64 = 1e-12;

impl BkCollarOneForm {
    pub fn new(
        circle: impl Into<String>,
        half_width: f64,
        pole_order: u32,
        h: CollarSeries,
        g: CollarSeries,
    ) -> Result<Self> {
        let circle = circle.into();
        if !(half_width > 0.0 && half_width.is_finite()) || pole_order == 0 {
            return Err(FormError::InvalidCollar {
                circle,
                reason: "one-form needs a positive half-width and pole order".into(),
            });
        }
        if h.order() < pole_order as usize {
            return Err(FormError::InsufficientOrder {
                circle,
                order: h.order(),
                k: pole_order,
            });
        }
        let vanishes = |s: &CollarSeries| {
            [half_width, -half_width].iter().all(|&y| {
                let scale = s
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c.amplitude_bound() * half_width.powi(j as i32))
                    .sum::<f64>()
                    .max(1.0);
                value_at(s, y).amplitude_bound() <= SUPPORT_TOLERANCE * scale
            })
        };
        let compact_support = vanishes(&h) && vanishes(&g);
        Ok(Self {
            circle,
            half_width,
            pole_order,
            h,
            g,
            compact_support,
        })
    }

    pub fn circle(&self) -> &str {
        &self.circle
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn h(&self) -> &CollarSeries {
        &self.h
    }

    pub fn g(&self) -> &CollarSeries {
        &self.g
    }

    /// `h` and `g` both vanish at `y = ±R`.
    pub fn is_compactly_supported(&self) -> bool {
        self.compact_support
    }
}

/// The circle function `Σ g_j(θ) y^j` at a fixed `y`.
fn value_at(s: &CollarSeries, y: f64) -> CircleFunction {
    s.coeffs()
        .iter()
        .rev()
        .fold(CircleFunction::zero(), |acc, c| acc.scale(y).add(c))
}

/// `(R² − y²)^power` as a collar series; multiplying by it makes a series
/// vanish at both collar ends.
pub fn bump_factor(half_width: f64, power: u32, order: usize) -> CollarSeries {
    let base = CollarSeries::new(
        vec![
            CircleFunction::constant(half_width * half_width),
            CircleFunction::zero(),
            CircleFunction::constant(-1.0),
        ],
        order,
    );
    base.powi(power).expect("constant coefficients cannot overflow")
}

/// Laurent data of one collar: `Σ_{i=1}^{k} dy/y^i ∧ α_{−i}(θ)dθ + β(y,θ) dy∧dθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleLaurentData {
    pub circle: String,
    pub orientation: Orientation,
    pub half_width: f64,
    /// `singular[i - 1]` is the density of `α_{−i}`.
    pub singular: Vec<CircleFunction>,
    /// Density of the smooth remainder `β`.
    pub smooth: CollarSeries,
}

impl CircleLaurentData {
    pub fn alpha(&self, i: u32) -> &CircleFunction {
        &self.singular[i as usize - 1]
    }

    pub fn pole_order(&self) -> u32 {
        self.singular.len() as u32
    }

    /// `∫_γ α_{−i}`, signed by the orientation of the collar.
    pub fn residue_integral(&self, i: u32) -> f64 {
        self.orientation.sign() * self.alpha(i).integrate_over_circle()
    }

    /// `A = Σ_i y^{k−i} α_{−i} + y^k β`.
    pub fn reconstruct_density(&self) -> CollarSeries {
        let k = self.pole_order() as usize;
        let order = self.smooth.order() + k;
        let mut coeffs: Vec<CircleFunction> =
            (0..k).map(|j| self.singular[k - 1 - j].clone()).collect();
        coeffs.extend(self.smooth.coeffs().iter().cloned());
        PowerSeries::new(coeffs, order)
    }
}

/// Laurent normal form of a whole surface form, one entry per circle.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentNormalForm {
    pub k: u32,
    pub circles: Vec<CircleLaurentData>,
}

impl LaurentNormalForm {
    pub fn circle(&self, id: &str) -> Option<&CircleLaurentData> {
        self.circles.iter().find(|c| c.circle == id)
    }

    /// Rebuilds a surface form from these germs and the given bulk integral.
    pub fn to_surface_form(
        &self,
        descriptor: impl Into<String>,
        bulk_integral: f64,
    ) -> Result<BkSurfaceForm> {
        let collars = self
            .circles
            .iter()
            .map(|c| {
                CollarPiece::new(
                    c.circle.clone(),
                    c.half_width,
                    self.k,
                    c.reconstruct_density(),
                    c.orientation,
                )
            })
            .collect::<Result<_>>()?;
        BkSurfaceForm::new(self.k, descriptor, collars, bulk_integral)
    }
}

pub fn collar_normal_form(piece: &CollarPiece) -> Result<CircleLaurentData> {
    let k = piece.pole_order as usize;
    let a = &piece.density;
    if a.order() < k {
        return Err(FormError::InsufficientOrder {
            circle: piece.circle.clone(),
            order: a.order(),
            k: piece.pole_order,
        });
    }
    let singular = (1..=k).map(|i| a.coeff(k - i)).collect();
    let smooth = PowerSeries::new(a.coeffs()[k..].to_vec(), a.order() - k);
    Ok(CircleLaurentData {
        circle: piece.circle.clone(),
        orientation: piece.orientation,
        half_width: piece.half_width,
        singular,
        smooth,
    })
}

/// Splits every collar density into its pole terms and smooth remainder:
/// `α_{−i}` is the `y^{k−i}` coefficient of `A`, `β = (A − Σ_{j<k} A_j y^j)/y^k`.
pub fn laurent_normal_form(form: &BkSurfaceForm) -> Result<LaurentNormalForm> {
    let circles = form
        .collars
        .iter()
        .map(collar_normal_form)
        .collect::<Result<_>>()?;
    Ok(LaurentNormalForm {
        k: form.k,
        circles,
    })
}

/// Contraction with the canonical section along each circle: the leading
/// pole coefficient `α_{−k}`.
pub fn iota_l(form: &BkSurfaceForm) -> Result<Vec<(String, CircleFunction)>> {
    form.collars
        .iter()
        .map(|piece| {
            let k = piece.pole_order as usize;
            if piece.density.order() < k {
                return Err(FormError::InsufficientOrder {
                    circle: piece.circle.clone(),
                    order: piece.density.order(),
                    k: piece.pole_order,
                });
            }
            Ok((piece.circle.clone(), piece.density.coeff(0)))
        })
        .collect()
}

/// `dμ` for `μ = h dy/y^k + g dθ`, as a raw density:
/// `dμ = (y^k ∂_y g − ∂_θ h)/y^k dy∧dθ`.
pub fn d_collar(mu: &BkCollarOneForm) -> Result<CollarPiece> {
    let k = mu.pole_order as usize;
    let from_g = mu.g.derivative().shift_up(k);
    let from_h = mu.h.theta_derivative();
    let density = from_g.sub(&from_h);
    CollarPiece::new(
        mu.circle.clone(),
        mu.half_width,
        mu.pole_order,
        density,
        Orientation::Positive,
    )
}

/// Positive orientation: `sign · A(0, θ) > 0` on every circle.
pub fn is_positively_oriented(form: &BkSurfaceForm) -> Result<bool> {
    let mut positive = true;
    for piece in &form.collars {
        match piece.density_on_circle().certify_sign() {
            SignCertificate::Vanishes { theta } => {
                return Err(FormError::DegenerateOnZ {
                    circle: piece.circle.clone(),
                    theta,
                })
            }
            SignCertificate::Positive => positive &= piece.orientation == Orientation::Positive,
            SignCertificate::Negative => positive &= piece.orientation == Orientation::Negative,
        }
    }
    Ok(positive)
}

/// A point of a collar where the density vanishes (or could not be certified
/// nonvanishing).
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub circle: String,
    pub y: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticCheck {
    pub symplectic: bool,
    pub witness: Option<Witness>,
}

const SYMPLECTIC_Y_SAMPLES: usize = 64;
const SYMPLECTIC_REFINEMENTS: u32 = 3;

/// Maximal rank of a top-degree b^k-form on a surface means its density `A`
/// has no zero on any collar `[−R, R] × γ`.
pub fn is_bk_symplectic(form: &BkSurfaceForm) -> SymplecticCheck {
    for piece in &form.collars {
        if let Some(w) = collar_zero(piece) {
            return SymplecticCheck {
                symplectic: false,
                witness: Some(w),
            };
        }
    }
    SymplecticCheck {
        symplectic: true,
        witness: None,
    }
}

/// Grid search with Lipschitz certification: accepts once the smallest
/// sampled `|A|` exceeds the largest change possible within a grid cell.
fn collar_zero(piece: &CollarPiece) -> Option<Witness> {
    let r = piece.half_width;
    let a = &piece.density;
    let coeffs = a.coeffs();
    let lip_y: f64 = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| j as f64 * c.amplitude_bound() * r.powi(j as i32 - 1))
        .sum();
    let lip_theta: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c.lipschitz_bound() * r.powi(j as i32))
        .sum();
    let mut ny = SYMPLECTIC_Y_SAMPLES;
    let mut nt = POSITIVITY_SAMPLES;
    let witness = |y: f64, theta: f64| Witness {
        circle: piece.circle.clone(),
        y,
        theta,
    };
    for round in 0..=SYMPLECTIC_REFINEMENTS {
        let hy = 2.0 * r / ny as f64;
        let ht = 1.0 / nt as f64;
        // values of every coefficient on the θ grid
        let table: Vec<Vec<f64>> = coeffs
            .iter()
            .map(|c| (0..nt).map(|t| c.eval(t as f64 * ht)).collect())
            .collect();
        let mut sign = 0.0;
        let mut min_abs = f64::INFINITY;
        let mut argmin = (0.0, 0.0);
        for iy in 0..=ny {
            let y = if 2 * iy == ny { 0.0 } else { -r + iy as f64 * hy };
            for it in 0..nt {
                let v = table.iter().rev().fold(0.0, |acc, col| acc * y + col[it]);
                let theta = it as f64 * ht;
                if v == 0.0 || (sign != 0.0 && v.signum() != sign) {
                    return Some(witness(y, theta));
                }
                sign = v.signum();
                if v.abs() < min_abs {
                    min_abs = v.abs();
                    argmin = (y, theta);
                }
            }
        }
        if min_abs > 0.5 * (lip_y * hy + lip_theta * ht) {
            return None;
        }
        if round == SYMPLECTIC_REFINEMENTS {
            return Some(witness(argmin.0, argmin.1));
        }
        ny *= 2;
        nt *= 2;
    }
    unreachable!()
}
