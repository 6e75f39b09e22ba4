use bkforms::bk_forms::{d_collar, laurent_normal_form, BkSurfaceForm};
use bkforms::generate::{
    random_compact_one_form, random_form, random_jet_change, random_normalizing_polynomial,
    random_residue_vector, FormShape,
};
use bkforms::normalize::{
    jet_equivalence_defect, poly_pick, principal_coefficients, reparam_decomposition,
};
use bkforms::series::{expand_dp_over_pk, CircleFunction, PowerSeries, RealPolynomial, Scalar};
use bkforms::volume::{liouville_volume, vol_cutoff, volume_polynomial};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDER: usize = 8;

fn series() -> impl Strategy<Value = PowerSeries<f64>> {
    prop::collection::vec(-2.0..2.0f64, 1..=ORDER + 1).prop_map(|c| PowerSeries::new(c, ORDER))
}

fn unit_series() -> impl Strategy<Value = PowerSeries<f64>> {
    (prop_oneof![0.5..2.0f64, -2.0..-0.5f64], series()).prop_map(|(c0, s)| {
        let mut c = s.coeffs().to_vec();
        c.resize(ORDER + 1, 0.0);
        c[0] = c0;
        PowerSeries::new(c, ORDER)
    })
}

fn normalizing_polynomial() -> impl Strategy<Value = RealPolynomial> {
    (0.5..2.0f64, prop::collection::vec(-0.5..0.5f64, 0..4)).prop_map(|(p1, rest)| {
        let mut c = vec![0.0, p1];
        c.extend(rest);
        RealPolynomial::new(c)
    })
}

fn assert_series_close(a: &PowerSeries<f64>, b: &PowerSeries<f64>, tol: f64) {
    let n = a.order().min(b.order());
    for j in 0..=n {
        let (x, y) = (a.coeff(j), b.coeff(j));
        assert!((x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())), "y^{j}: {x} vs {y}");
    }
}

fn form(seed: u64, k: u32) -> BkSurfaceForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_form(
        &mut rng,
        FormShape { k, max_frequency: 3, smooth_degree: 3, circles: 2 },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_commutative(a in series(), b in series()) {
        assert_series_close(&a.mul(&b).unwrap(), &b.mul(&a).unwrap(), 1e-12);
    }

    #[test]
    fn multiplication_is_associative(a in series(), b in series(), c in series()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert_series_close(&left, &right, 1e-10);
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        let left = a.mul(&b.add(&c)).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap());
        assert_series_close(&left, &right, 1e-10);
    }

    #[test]
    fn reciprocal_inverts(a in unit_series()) {
        let product = a.mul(&a.reciprocal().unwrap()).unwrap();
        assert_series_close(&product, &PowerSeries::one(ORDER), 1e-8);
    }

    #[test]
    fn polynomial_composition_evaluates(p in normalizing_polynomial(), q in normalizing_polynomial(), y in -0.3..0.3f64) {
        let direct = p.eval(q.eval(y));
        let composed = p.compose(&q).eval(y);
        prop_assert!((direct - composed).abs() < 1e-12 * (1.0 + direct.abs()));
    }

    #[test]
    fn residue_of_log_derivative_is_one(p in normalizing_polynomial(), i in 1u32..=5) {
        let e = expand_dp_over_pk::<BigRational>(&p, i, -1).unwrap();
        let expected_residue = if i == 1 { BigRational::one() } else { BigRational::zero() };
        prop_assert_eq!(e.coeff(-1), expected_residue);
        let p1 = BigRational::from_f64(p.coeff(1));
        let mut lead = BigRational::one();
        for _ in 1..i {
            lead /= p1.clone();
        }
        prop_assert_eq!(e.coeff(-(i as i32)), lead);
    }

    #[test]
    fn poly_pick_normalizes(seed in any::<u64>(), k in 1u32..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_residue_vector(&mut rng, k);
        let p = poly_pick(&a, 16).unwrap();
        prop_assert!(p.coeff(0) == 0.0 && p.coeff(1) > 0.0);
        let b = principal_coefficients(&a, &p).unwrap();
        for (j, &v) in b.iter().enumerate() {
            let expected = if j == 0 { 1.0 } else if j + 1 == k as usize { a.a(1) } else { 0.0 };
            let expected = if k == 1 { a.a(1) } else { expected };
            prop_assert!((v - expected).abs() <= 1e-9 * (1.0 + expected.abs()), "b[{}] = {} vs {}", j, v, expected);
        }
    }

    #[test]
    fn jet_changes_have_zero_principal_defect(seed in any::<u64>(), k in 1u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let change = random_jet_change(&mut rng, k, 2);
        let defect = jet_equivalence_defect(k, &change, 6).unwrap();
        prop_assert!(defect.has_zero_principal_part());
    }

    #[test]
    fn exact_forms_have_no_residues(seed in any::<u64>(), k in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = random_compact_one_form(&mut rng, k, 2, 3);
        let piece = d_collar(&mu).unwrap();
        let c = piece.density_on_circle();
        prop_assert!(c.integrate_over_circle().abs() < 1e-12);
    }

    #[test]
    fn reparameterizations_compose(seed in any::<u64>(), k in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = form(seed, k);
        let p = random_normalizing_polynomial(&mut rng, 3);
        let q = random_normalizing_polynomial(&mut rng, 3);
        let lnf = laurent_normal_form(&f).unwrap();
        let twice = reparam_decomposition(&reparam_decomposition(&lnf, &p, 6).unwrap(), &q, 6).unwrap();
        let once = reparam_decomposition(&lnf, &p.compose(&q), 6).unwrap();
        for (a, b) in twice.circles.iter().zip(&once.circles) {
            for i in 1..=k {
                for t in [0.0, 0.13, 0.5, 0.77] {
                    let (x, y) = (a.alpha(i).eval(t), b.alpha(i).eval(t));
                    prop_assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "α_-{} at {}: {} vs {}", i, t, x, y);
                }
            }
        }
    }

    #[test]
    fn log_residues_survive_reparameterization(seed in any::<u64>(), k in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = form(seed, k);
        let p = random_normalizing_polynomial(&mut rng, 3);
        let lnf = laurent_normal_form(&f).unwrap();
        let moved = reparam_decomposition(&lnf, &p, 6).unwrap();
        for (a, b) in lnf.circles.iter().zip(&moved.circles) {
            prop_assert!((a.residue_integral(1) - b.residue_integral(1)).abs() < 1e-12);
        }
    }

    #[test]
    fn cutoff_volume_matches_polynomial_constant(seed in any::<u64>(), k in 1u32..=3) {
        let f = form(seed, k);
        let p = volume_polynomial(&f).unwrap();
        prop_assert_eq!(p.constant_term(), liouville_volume(&f).unwrap());
        let v1 = vol_cutoff(&f, 1e-3).unwrap();
        let v2 = vol_cutoff(&f, 1e-4).unwrap();
        prop_assert!((p.eval(1e3) - v1).abs() >= (p.eval(1e4) - v2).abs() - 1e-9);
    }

    #[test]
    fn constant_circle_function_integrates_to_itself(c in -5.0..5.0f64) {
        prop_assert_eq!(CircleFunction::constant(c).integrate_over_circle(), c);
    }
}
