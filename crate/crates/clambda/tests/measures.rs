use clambda::measures::{
    carleman_test, hankel_hadamard, moment_target, positivity_condition, verify_identity_resolution, verify_moments, weight_function,
    Carleman, MomentProblem, Positivity, ResolutionMode, WeightForm,
};
use clambda::{AlgebraParams, Error};
use proptest::prelude::*;

fn bb(lambda: usize, v: &[f64]) -> AlgebraParams {
    AlgebraParams::from_beta_bar(lambda, v).unwrap()
}

// A · G^{q,0}_{p,q}(y | a; b) from mpmath at 40 digits.
#[test]
fn weight_reference_values() {
    let cases: [(usize, &[f64], usize, usize, f64, f64); 9] = [
        (2, &[2.0], 0, 0, 0.5, 0.035359654530998842764),
        (2, &[2.0], 0, 0, 2.0, 0.01111438443934637535),
        (2, &[2.0], 0, 1, 0.5, std::f64::consts::FRAC_1_PI),
        (3, &[4.0 / 3.0, 2.0 / 3.0], 0, 1, 0.5, 0.054641796338742299044),
        (3, &[4.0 / 3.0, 2.0 / 3.0], 0, 1, 2.0, 0.005502842783693944518),
        (3, &[4.0 / 3.0, 4.0 / 3.0], 1, 1, 0.5, 0.040221813595855794809),
        (4, &[1.5, 1.5, 1.25], 0, 2, 0.2, 0.26678491948798670901),
        (4, &[1.5, 1.5, 1.25], 0, 2, 0.5, 0.28251326390795753332),
        (3, &[1.0 / 3.0, 10.0], 1, 0, 0.7, 0.0016691467483104413884),
    ];
    for (l, v, mu, alpha, y, want) in cases {
        let h = weight_function(&bb(l, v), mu, alpha).unwrap().eval(y).unwrap();
        assert!((h - want).abs() < 1e-9 * want, "{l} {v:?} {mu} {alpha} {y}: {h} vs {want}");
    }
}

#[test]
fn moment_problems() {
    let cases: [(usize, &[f64], usize, usize, f64); 5] = [
        (2, &[2.0], 0, 0, 1e-6),
        (2, &[2.0], 0, 1, 1e-10),
        (3, &[4.0 / 3.0, 2.0 / 3.0], 0, 1, 1e-6),
        (3, &[4.0 / 3.0, 4.0 / 3.0], 1, 1, 1e-6),
        (4, &[1.5, 1.5, 1.25], 0, 2, 1e-6),
    ];
    for (l, v, mu, alpha, tol) in cases {
        let w = weight_function(&bb(l, v), mu, alpha).unwrap();
        let r = verify_moments(&w, w.problem(), 8, tol).unwrap();
        assert!(r.pass, "{l} {v:?} {mu} {alpha}: {}", r.max_rel_error);
        assert_eq!(r.rows.len(), 9);
    }
}

#[test]
fn refused_certificate_is_an_error() {
    // β̄₁ = 4/3, β̄₂ = 2/3: sector μ = 1, α = 1 has a = β̄₂ - 1 < b = β̄₁
    let p = bb(3, &[4.0 / 3.0, 2.0 / 3.0]);
    assert!(matches!(positivity_condition(&p, 1, 1).unwrap(), Positivity::Refused { .. }));
    assert!(matches!(weight_function(&p, 1, 1), Err(Error::PositivityUnavailable(_))));
    assert!(matches!(positivity_condition(&p, 0, 1).unwrap(), Positivity::Certified { .. }));
    assert!(matches!(positivity_condition(&p, 2, 0).unwrap(), Positivity::Unconditional));
}

#[test]
fn carleman_dichotomy() {
    for lambda in 2..=5usize {
        let p = AlgebraParams::new(lambda, &vec![0.0; lambda]).unwrap();
        for alpha in 0..=lambda / 2 {
            let c = carleman_test(&p, alpha).unwrap();
            let satisfied = (lambda % 2 == 1 && 2 * alpha + 1 == lambda) || (lambda % 2 == 0 && 2 * alpha == lambda);
            let boundary = lambda % 2 == 0 && 2 * alpha + 2 == lambda;
            let want = if satisfied {
                Carleman::Unique
            } else if boundary {
                Carleman::Inconclusive
            } else {
                Carleman::PossiblyNonunique
            };
            assert_eq!(c.verdict, want, "lambda {lambda} alpha {alpha}");
        }
    }
}

#[test]
fn meijer_conjecture_agrees_with_series() {
    let w2 = weight_function(&bb(4, &[1.5, 1.5, 1.25]), 0, 2).unwrap();
    let w3 = weight_function(&bb(6, &[2.5, 2.2, 1.9, 0.7, 0.6]), 0, 3).unwrap();
    assert_eq!(w2.form(), WeightForm::Gauss2F1);
    for i in 1..20 {
        let y = i as f64 / 20.0;
        let (o, h2, h3) = (1.0 - y, w2.eval(y).unwrap(), w3.multiple_series(y, 1.0 - y).unwrap());
        assert!((h2 - w2.conjecture(y, o).unwrap()).abs() < 1e-7 * h2.abs(), "alpha 2, {y}");
        assert!((h3 - w3.conjecture(y, o).unwrap()).abs() < 1e-7 * h3.abs(), "alpha 3, {y}");
        assert!((h3 - w3.eval(y).unwrap()).abs() < 1e-7 * h3.abs(), "alpha 3 Appell, {y}");
    }
}

#[test]
fn caption_boundary_behaviour() {
    // Fig. 1: h(0⁺) finite iff β̄₂ > 1, the finite limit being (β̄₁-1)/(3π(β̄₂-1))
    let dashed = weight_function(&bb(3, &[4.0 / 3.0, 4.0 / 3.0]), 0, 1).unwrap();
    let solid = weight_function(&bb(3, &[4.0 / 3.0, 2.0 / 3.0]), 0, 1).unwrap();
    let limit = 1.0 / (3.0 * std::f64::consts::PI);
    assert!((dashed.eval(1e-7).unwrap() - limit).abs() < 1e-4 * limit);
    assert!(solid.eval(1e-6).unwrap() > 100.0 * solid.eval(1e-2).unwrap().max(1.0) || solid.eval(1e-6).unwrap() > solid.eval(1e-3).unwrap() * 5.0);
    // Fig. 2b: h(1⁻) → 0 iff β̄₁ + β̄₂ - β̄₃ > 2
    let near_one = |b2: f64, e: f64| weight_function(&bb(4, &[1.5, b2, 0.75]), 0, 2).unwrap().eval_split(1.0 - e, e).unwrap();
    // (1-y)^{-1/4} growth for β̄₂ = 1
    assert!((near_one(1.0, 1e-8) / near_one(1.0, 1e-4) - 10.0).abs() < 0.1);
    assert!((near_one(1.5, 1e-8) / near_one(1.5, 1e-4) - 0.1).abs() < 1e-3);
    // equality gives the finite limit Γ(β̄₁)Γ(β̄₂)/(πΓ(β̄₃))
    assert!((near_one(1.25, 1e-10) - 0.208656710418518).abs() < 1e-6);
}

#[test]
fn resolution_modes_at_lambda_two() {
    let p = bb(2, &[2.0]);
    let d = verify_identity_resolution(&p, ResolutionMode::EigenstateDiag, 6, 1e-6).unwrap();
    let o = verify_identity_resolution(&p, ResolutionMode::EigenstateOffdiag, 6, 1e-6).unwrap();
    assert!(d.pass && o.pass);
    let gap = (&d.matrix - &o.matrix).iter().map(|x| x.norm()).fold(0.0, f64::max);
    assert!(gap < 1e-8);
    assert!(verify_identity_resolution(&p, ResolutionMode::DiagonalAlpha0, 9, 1e-6).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn alpha_zero_weights_reproduce_moments(l in 2usize..=3, v in prop::collection::vec(0.2f64..3.0, 2), mu in 0usize..3) {
        let p = bb(l, &v[..l - 1]);
        let w = weight_function(&p, mu % l, 0).unwrap();
        let r = verify_moments(&w, w.problem(), 6, 1e-6).unwrap();
        prop_assert!(r.pass, "{}", r.max_rel_error);
    }

    #[test]
    fn moment_sequences_are_log_convex(l in 2usize..=4, v in prop::collection::vec(0.05f64..4.0, 3), k in 1usize..30) {
        // Stieltjes moments satisfy B(k)² ≤ B(k-1) B(k+1)
        let p = bb(l, &v[..l - 1]);
        let prob = MomentProblem::new(&p, 0, 0).unwrap();
        let (a, b, c) = (prob.ln_moment(k - 1), prob.ln_moment(k), prob.ln_moment(k + 1));
        prop_assert!(2.0 * b <= a + c + 1e-12 * (a.abs() + c.abs()));
        prop_assert!((moment_target(&prob, k).ln() - b).abs() < 1e-12 * b.abs().max(1.0));
    }

    #[test]
    fn hankel_matrices_are_positive(l in 2usize..=3, v in prop::collection::vec(0.3f64..3.0, 2)) {
        let prob = MomentProblem::new(&bb(l, &v[..l - 1]), 0, 0).unwrap();
        let (h0, h1) = hankel_hadamard(&prob, 4).unwrap();
        prop_assert!(h0 > 0.0 && h1 > 0.0);
    }
}
