//! Quick seeded runs of the library's invariant checks.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bk_forms::{d_collar, laurent_normal_form, BkSurfaceForm, CollarPiece, Orientation};
use crate::classify::{ll_decomposition, modular_periods};
use crate::generate::{
    random_compact_one_form, random_form, random_jet_change, random_normalizing_polynomial,
    random_residue_vector, FormShape,
};
use crate::normalize::{
    jet_equivalence_defect, poly_pick, principal_coefficients, pullback_form, ResidueVector,
};
use crate::series::{expand_dp_over_pk, CircleFunction, CollarSeries, RealPolynomial};
use crate::volume::{liouville_volume, volume_polynomial};

use super::report::{Report, SelftestCheck};

fn check(name: &str, result: Result<String, String>) -> SelftestCheck {
    match result {
        Ok(detail) => SelftestCheck {
            name: name.to_string(),
            passed: true,
            detail,
        },
        Err(detail) => SelftestCheck {
            name: name.to_string(),
            passed: false,
            detail,
        },
    }
}

fn residue_identities(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = 100;
    for _ in 0..n {
        let p = random_normalizing_polynomial(rng, 6);
        for i in 1..=6 {
            let r = expand_dp_over_pk::<BigRational>(&p, i, -1)
                .map_err(|e| e.to_string())?
                .residue();
            let want = if i == 1 {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            if r != want {
                return Err(format!("residue of P'/P^{i} is {r} for P = {:?}", p.coeffs()));
            }
        }
    }
    Ok(format!("{n} polynomials, exact"))
}

fn poly_pick_contract(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let fixture = ResidueVector::new(vec![0.0, 1.0, 1.0]).map_err(|e| e.to_string())?;
    let p = poly_pick(&fixture, 16).map_err(|e| e.to_string())?;
    if p != RealPolynomial::new(vec![0.0, 1.0, 1.0]) {
        return Err(format!("(0, 1, 1) gave P = {:?}", p.coeffs()));
    }
    let n = 100;
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let k = rng.gen_range(1..=6);
        let a = random_residue_vector(rng, k);
        let p = poly_pick(&a, 16).map_err(|e| e.to_string())?;
        let b = principal_coefficients(&a, &p).map_err(|e| e.to_string())?;
        let k = k as usize;
        for (idx, got) in b.iter().enumerate() {
            let want = if idx == k - 1 {
                a.a(1)
            } else if idx == 0 {
                1.0
            } else {
                0.0
            };
            worst = worst.max((got - want).abs());
        }
    }
    if worst < 1e-10 {
        Ok(format!("{n} residue vectors, worst deviation {worst:e}"))
    } else {
        Err(format!("worst deviation {worst:e}"))
    }
}

fn volume_fixture() -> Result<String, String> {
    let piece = CollarPiece::new(
        "Z1",
        1.0,
        2,
        CollarSeries::constant(CircleFunction::constant(1.0), 2),
        Orientation::Positive,
    )
    .map_err(|e| e.to_string())?;
    let form = BkSurfaceForm::new(2, "fixture", vec![piece], 0.0).map_err(|e| e.to_string())?;
    let p = volume_polynomial(&form).map_err(|e| e.to_string())?;
    if p.coefficients() == vec![-2.0, 2.0] {
        Ok("k = 2, A = 1, R = 1: P(t) = -2 + 2t".into())
    } else {
        Err(format!("got {:?}", p.coefficients()))
    }
}

fn exact_forms(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = 20;
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let k = rng.gen_range(1..=4);
        let mu = random_compact_one_form(rng, k, 3, 3);
        let piece = d_collar(&mu).map_err(|e| e.to_string())?;
        let form = BkSurfaceForm::new(k, "exact", vec![piece], 0.0).map_err(|e| e.to_string())?;
        let p = volume_polynomial(&form).map_err(|e| e.to_string())?;
        worst = worst.max(p.max_abs_coefficient());
    }
    if worst < 1e-10 {
        Ok(format!("{n} exact forms, largest coefficient {worst:e}"))
    } else {
        Err(format!("largest coefficient {worst:e}"))
    }
}

fn jet_defects(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = 20;
    for _ in 0..n {
        let k = rng.gen_range(1..=6);
        let change = random_jet_change(rng, k, 2);
        let d = jet_equivalence_defect(k, &change, 8).map_err(|e| e.to_string())?;
        if !d.has_zero_principal_part() {
            return Err(format!("nonzero principal part for k = {k}"));
        }
    }
    Ok(format!("{n} jet changes, principal parts exactly zero"))
}

fn reparam_invariance(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = 10;
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let shape = FormShape {
            k: rng.gen_range(1..=4),
            max_frequency: 4,
            smooth_degree: 3,
            circles: 2,
        };
        let form = random_form(rng, shape);
        let p = random_normalizing_polynomial(rng, 3);
        let pulled = pullback_form(&form, &p, 24).map_err(|e| e.to_string())?;
        let r0 = laurent_normal_form(&form).map_err(|e| e.to_string())?;
        let r1 = laurent_normal_form(&pulled).map_err(|e| e.to_string())?;
        for (c0, c1) in r0.circles.iter().zip(&r1.circles) {
            if c0.residue_integral(1) != c1.residue_integral(1) {
                return Err(format!("residue of α_-1 changed on {}", c0.circle));
            }
        }
        let before = liouville_volume(&form).map_err(|e| e.to_string())?;
        let after = liouville_volume(&pulled).map_err(|e| e.to_string())?;
        worst = worst.max((before - after).abs());
    }
    if worst < 1e-8 {
        Ok(format!("{n} pullbacks, Liouville drift {worst:e}"))
    } else {
        Err(format!("Liouville drift {worst:e}"))
    }
}

fn radko_triangle(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = 5;
    for _ in 0..n {
        let b: f64 = rng.gen_range(-3.0..3.0);
        let c: f64 = rng.gen_range(0.2..4.0);
        let piece = CollarPiece::new(
            "Z1",
            1.0,
            1,
            CollarSeries::constant(CircleFunction::constant(c), 1),
            Orientation::Positive,
        )
        .map_err(|e| e.to_string())?;
        let form = BkSurfaceForm::new(1, "radko", vec![piece], b).map_err(|e| e.to_string())?;
        let ll = ll_decomposition(&form).map_err(|e| e.to_string())?;
        let periods = modular_periods(&form).map_err(|e| e.to_string())?;
        if ll.liouville_volume != b || ll.residues != vec![vec![c]] || periods.periods != vec![1.0 / c] {
            return Err(format!("b = {b}, c = {c}: {ll:?} {periods:?}"));
        }
    }
    Ok(format!("{n} forms A = c, bulk b"))
}

fn report_round_trip(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut report = Report::new("selftest");
    report.volume_polynomial = Some((0..5).map(|_| rng.gen_range(-1e3..1e3)).collect());
    report.liouville_volume = Some(rng.gen());
    let text = report.to_json();
    let again = Report::from_json(&text).map_err(|e| e.to_string())?.to_json();
    if again == text {
        Ok("re-emitted report is byte-identical".into())
    } else {
        Err("re-emitted report differs".into())
    }
}

pub fn run(seed: u64) -> Vec<SelftestCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        check("residue identities", residue_identities(&mut rng)),
        check("poly_pick contract", poly_pick_contract(&mut rng)),
        check("volume fixture", volume_fixture()),
        check("exact forms", exact_forms(&mut rng)),
        check("jet defect", jet_defects(&mut rng)),
        check("reparameterization", reparam_invariance(&mut rng)),
        check("k = 1 periods", radko_triangle(&mut rng)),
        check("report round trip", report_round_trip(&mut rng)),
    ]
}
