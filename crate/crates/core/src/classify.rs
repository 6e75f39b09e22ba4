//! Classification invariants of symplectic b^k-forms on model surfaces and
//! the equivalence tests they support.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bk_forms::{
    is_bk_symplectic, is_positively_oriented, laurent_normal_form, BkSurfaceForm, FormError,
    Orientation,
};
use crate::series::SignCertificate;
use crate::volume::{liouville_volume, VolumeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("form is not b^k-symplectic: density vanishes on circle {circle} near (y, θ) = ({y:.6}, {theta:.6})")]
    NotSymplectic { circle: String, y: f64, theta: f64 },
    #[error("modular periods need pole order 1, found {0}")]
    WrongPoleOrder(u32),
    #[error("form is not positively oriented")]
    NotPositivelyOriented,
    #[error("forms live on different b^k-structures: {0}")]
    IncompatibleStructures(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
}

pub type Result<T> = std::result::Result<T, ClassifyError>;

/// Liouville volume and the matrix of residue integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LLDecomposition {
    pub liouville_volume: f64,
    /// Circle ids in collar order.
    pub circles: Vec<String>,
    /// `residues[r][i − 1] = ∫_{γ_r} α_{−i}`, signed by the collar orientation.
    pub residues: Vec<Vec<f64>>,
}

impl LLDecomposition {
    pub fn residue(&self, circle: &str, i: u32) -> Option<f64> {
        let r = self.circles.iter().position(|c| c == circle)?;
        self.residues[r].get(i as usize - 1).copied()
    }
}

/// Period of the modular vector field on each circle (`k = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularPeriods {
    pub circles: Vec<String>,
    pub periods: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymplectoVerdict {
    Equivalent,
    NotEquivalent,
    /// The segment between the two forms leaves the symplectic forms, so
    /// equal invariants do not decide the question.
    PathDegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoissonVerdict {
    Isomorphic,
    Unknown,
}

fn require_symplectic(form: &BkSurfaceForm) -> Result<()> {
    let check = is_bk_symplectic(form);
    match check.witness {
        Some(w) if !check.symplectic => Err(ClassifyError::NotSymplectic {
            circle: w.circle,
            y: w.y,
            theta: w.theta,
        }),
        _ => Ok(()),
    }
}

pub fn ll_decomposition(form: &BkSurfaceForm) -> Result<LLDecomposition> {
    require_symplectic(form)?;
    let lnf = laurent_normal_form(form)?;
    let circles = lnf.circles.iter().map(|c| c.circle.clone()).collect();
    let residues = lnf
        .circles
        .iter()
        .map(|c| (1..=lnf.k).map(|i| c.residue_integral(i)).collect())
        .collect();
    Ok(LLDecomposition {
        liouville_volume: liouville_volume(form)?,
        circles,
        residues,
    })
}

/// `period_r = 1 / ∫_{γ_r} α_{−1}`.
pub fn modular_periods(form: &BkSurfaceForm) -> Result<ModularPeriods> {
    if form.pole_order() != 1 {
        return Err(ClassifyError::WrongPoleOrder(form.pole_order()));
    }
    if !is_positively_oriented(form)? {
        return Err(ClassifyError::NotPositivelyOriented);
    }
    let ll = ll_decomposition(form)?;
    Ok(ModularPeriods {
        periods: ll.residues.iter().map(|r| 1.0 / r[0]).collect(),
        circles: ll.circles,
    })
}

fn check_compatible(f0: &BkSurfaceForm, f1: &BkSurfaceForm) -> Result<()> {
    if f0.pole_order() != f1.pole_order() {
        return Err(ClassifyError::IncompatibleStructures(format!(
            "pole orders {} and {}",
            f0.pole_order(),
            f1.pole_order()
        )));
    }
    if f0.collars().len() != f1.collars().len() {
        return Err(ClassifyError::IncompatibleStructures(format!(
            "{} and {} circles",
            f0.collars().len(),
            f1.collars().len()
        )));
    }
    for c0 in f0.collars() {
        let Some(c1) = f1.collar(c0.circle()) else {
            return Err(ClassifyError::IncompatibleStructures(format!(
                "circle {} missing from the second form",
                c0.circle()
            )));
        };
        if c0.orientation() != c1.orientation() {
            return Err(ClassifyError::IncompatibleStructures(format!(
                "circle {} has opposite orientations",
                c0.circle()
            )));
        }
    }
    Ok(())
}

fn orientation_of(sign: SignCertificate) -> Option<Orientation> {
    match sign {
        SignCertificate::Positive => Some(Orientation::Positive),
        SignCertificate::Negative => Some(Orientation::Negative),
        SignCertificate::Vanishes { .. } => None,
    }
}

/// Whether `(1 − t)ω₀ + tω₁` stays nondegenerate on every collar: each
/// density has one sign on its collar, so the segment is nondegenerate iff
/// the signs agree circle by circle.
fn segment_is_symplectic(f0: &BkSurfaceForm, f1: &BkSurfaceForm) -> bool {
    f0.collars().iter().all(|c0| {
        let c1 = f1.collar(c0.circle()).expect("checked compatible");
        let s0 = orientation_of(c0.density_on_circle().certify_sign());
        let s1 = orientation_of(c1.density_on_circle().certify_sign());
        s0.is_some() && s0 == s1
    })
}

fn residues_close(a: &LLDecomposition, b: &LLDecomposition, columns: usize, tol: f64) -> bool {
    a.circles.iter().enumerate().all(|(r, id)| {
        let other = b.circles.iter().position(|c| c == id).expect("checked compatible");
        a.residues[r]
            .iter()
            .zip(&b.residues[other])
            .take(columns)
            .all(|(x, y)| (x - y).abs() < tol)
    })
}

/// Equal Liouville volume and residue matrix, with the straight-line path
/// between the forms checked first.
pub fn bk_symplectomorphic(
    f0: &BkSurfaceForm,
    f1: &BkSurfaceForm,
    tol: f64,
) -> Result<SymplectoVerdict> {
    check_compatible(f0, f1)?;
    require_symplectic(f0)?;
    require_symplectic(f1)?;
    if !segment_is_symplectic(f0, f1) {
        return Ok(SymplectoVerdict::PathDegenerate);
    }
    let ll0 = ll_decomposition(f0)?;
    let ll1 = ll_decomposition(f1)?;
    let same = (ll0.liouville_volume - ll1.liouville_volume).abs() < tol
        && residues_close(&ll0, &ll1, f0.pole_order() as usize, tol);
    Ok(if same {
        SymplectoVerdict::Equivalent
    } else {
        SymplectoVerdict::NotEquivalent
    })
}

/// Sufficient test for Poisson isomorphism of b^k-type: equal Liouville
/// volume and equal `∫α_{−1}` on every circle. Anything else is `Unknown`.
pub fn poisson_isomorphic_bk_type(
    f0: &BkSurfaceForm,
    f1: &BkSurfaceForm,
    tol: f64,
) -> Result<PoissonVerdict> {
    check_compatible(f0, f1)?;
    for f in [f0, f1] {
        if !is_positively_oriented(f)? {
            return Err(ClassifyError::NotPositivelyOriented);
        }
    }
    let ll0 = ll_decomposition(f0)?;
    let ll1 = ll_decomposition(f1)?;
    let same = (ll0.liouville_volume - ll1.liouville_volume).abs() < tol
        && residues_close(&ll0, &ll1, 1, tol);
    Ok(if same {
        PoissonVerdict::Isomorphic
    } else {
        PoissonVerdict::Unknown
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk_forms::CollarPiece;
    use crate::normalize::pullback_form;
    use crate::series::{CircleFunction, CollarSeries, RealPolynomial};

    fn cf(c: f64) -> CircleFunction {
        CircleFunction::constant(c)
    }

    fn single(k: u32, a: Vec<CircleFunction>, order: usize, bulk: f64) -> BkSurfaceForm {
        let piece =
            CollarPiece::new("Z1", 1.0, k, CollarSeries::new(a, order), Orientation::Positive)
                .unwrap();
        BkSurfaceForm::new(k, "test", vec![piece], bulk).unwrap()
    }

    #[test]
    fn ll_of_unit_double_pole() {
        let ll = ll_decomposition(&single(2, vec![cf(1.0)], 2, 0.0)).unwrap();
        assert_eq!(ll.liouville_volume, -2.0);
        assert_eq!(ll.residues, vec![vec![0.0, 1.0]]);
    }

    #[test]
    fn ll_of_b_symplectic_constant() {
        let ll = ll_decomposition(&single(1, vec![cf(3.0)], 1, 0.5)).unwrap();
        assert_eq!(ll.liouville_volume, 0.5);
        assert_eq!(ll.residues, vec![vec![3.0]]);
    }

    #[test]
    fn ll_of_smooth_form() {
        let f = BkSurfaceForm::new(1, "smooth", vec![], 4.0).unwrap();
        let ll = ll_decomposition(&f).unwrap();
        assert_eq!(ll.liouville_volume, 4.0);
        assert!(ll.residues.is_empty());
    }

    #[test]
    fn ll_rejects_degenerate() {
        let f = single(1, vec![CircleFunction::cos_mode(1, 1.0).unwrap()], 1, 0.0);
        assert!(matches!(
            ll_decomposition(&f),
            Err(ClassifyError::NotSymplectic { .. })
        ));
    }

    #[test]
    fn periods() {
        let p = modular_periods(&single(1, vec![cf(4.0)], 1, 0.0)).unwrap();
        assert_eq!(p.periods, vec![0.25]);
        let varying = CircleFunction::new(2.0, vec![(1, 1.0)], vec![]).unwrap();
        let p = modular_periods(&single(1, vec![varying], 1, 0.0)).unwrap();
        assert_eq!(p.periods, vec![0.5]);
        assert!(matches!(
            modular_periods(&single(2, vec![cf(1.0)], 2, 0.0)),
            Err(ClassifyError::WrongPoleOrder(2))
        ));
        assert!(matches!(
            modular_periods(&single(1, vec![cf(-1.0)], 1, 0.0)),
            Err(ClassifyError::NotPositivelyOriented)
        ));
    }

    #[test]
    fn symplecto_reflexive_and_scaling() {
        let f = single(2, vec![cf(1.0)], 2, 0.0);
        assert_eq!(bk_symplectomorphic(&f, &f, 1e-8).unwrap(), SymplectoVerdict::Equivalent);
        let g = pullback_form(&f, &RealPolynomial::new(vec![0.0, 2.0]), 16).unwrap();
        assert_eq!(
            bk_symplectomorphic(&f, &g, 1e-8).unwrap(),
            SymplectoVerdict::NotEquivalent
        );
        assert_eq!(
            poisson_isomorphic_bk_type(&f, &g, 1e-8).unwrap(),
            PoissonVerdict::Isomorphic
        );
    }

    #[test]
    fn symplecto_zero_mean_perturbation() {
        // y³(1 − y²)² cos(2πθ) has zero circle mean at every power of y
        let bump = CollarSeries::new(vec![cf(1.0), cf(0.0), cf(-2.0), cf(0.0), cf(1.0)], 4);
        let wave = CollarSeries::constant(CircleFunction::cos_mode(1, 0.2).unwrap(), 4);
        let pert = bump.mul(&wave).unwrap().shift_up(3);
        let a1 = CollarSeries::one(7).add(&pert);
        let f0 = single(2, vec![cf(1.0)], 7, 0.0);
        let piece = CollarPiece::new("Z1", 1.0, 2, a1, Orientation::Positive).unwrap();
        let f1 = BkSurfaceForm::new(2, "test", vec![piece], 0.0).unwrap();
        assert_eq!(bk_symplectomorphic(&f0, &f1, 1e-8).unwrap(), SymplectoVerdict::Equivalent);
    }

    #[test]
    fn symplecto_sign_flip_is_path_degenerate() {
        let f0 = single(1, vec![cf(1.0)], 1, 0.0);
        let f1 = single(1, vec![cf(-1.0)], 1, 0.0);
        assert_eq!(
            bk_symplectomorphic(&f0, &f1, 1e-8).unwrap(),
            SymplectoVerdict::PathDegenerate
        );
    }

    #[test]
    fn incompatible_structures() {
        let f0 = single(1, vec![cf(1.0)], 1, 0.0);
        let f1 = single(2, vec![cf(1.0)], 2, 0.0);
        assert!(matches!(
            bk_symplectomorphic(&f0, &f1, 1e-8),
            Err(ClassifyError::IncompatibleStructures(_))
        ));
    }

    #[test]
    fn poisson_unknown_when_residue_differs() {
        let f0 = single(2, vec![cf(1.0)], 2, 0.0);
        let a = CollarSeries::new(vec![cf(1.0), cf(1.0)], 2);
        let piece = CollarPiece::new("Z1", 0.5, 2, a, Orientation::Positive).unwrap();
        let f1 = BkSurfaceForm::new(2, "test", vec![piece], 0.0).unwrap();
        assert_eq!(
            poisson_isomorphic_bk_type(&f0, &f1, 1e-8).unwrap(),
            PoissonVerdict::Unknown
        );
    }
}
