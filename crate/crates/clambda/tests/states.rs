use clambda::states::{
    component_zmu, cs_alpha_state, eigen_normalization, eigenstate, overlap_cs_alpha, overlap_eigenstate, paraboson_normalization,
    paraboson_sector_normalization, residual_cs_alpha, residual_eigenstate,
};
use clambda::{AlgebraParams, CsAlphaSpec, Error, Norm};
use num_complex::Complex64;
use proptest::prelude::*;

fn bb(lambda: usize, v: &[f64]) -> AlgebraParams {
    AlgebraParams::from_beta_bar(lambda, v).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// Σ|c_n|² with c on the lowest sector state set to 1, from 40-digit Fock sums.
#[test]
fn normalization_reference_values() {
    let eigen = [
        (2, vec![10.0], 1.5, 1.2602548946798863603),
        (2, vec![0.25], 1.5, 19.672656179664386027),
        (2, vec![2.0], 0.05, 1.0006257815757243475),
        (3, vec![4.0 / 3.0, 2.0 / 3.0], 1.2, 1.7786592006550518831),
    ];
    for (l, v, r, want) in eigen {
        assert!(rel(eigen_normalization(&bb(l, &v), r).unwrap().value, want) < 1e-12);
    }
    let cs: [(usize, &[f64], usize, usize, f64, f64); 4] = [
        (3, &[1.0 / 3.0, 2.0 / 3.0], 0, 1, 1.0, 1.1912237434213105892),
        (3, &[1.0, 0.01], 0, 1, 0.8, 27.353417147158350459),
        (4, &[1.5, 1.75, 1.25], 0, 2, 0.6, 2.5322348376854555795),
        (3, &[4.0 / 3.0, 2.0 / 3.0], 2, 0, 1.5, 1.0215291936098468262),
    ];
    for (l, v, mu, alpha, z, want) in cs {
        let spec = CsAlphaSpec::new(&bb(l, v), mu, alpha, Complex64::new(z, 0.0)).unwrap();
        assert!(rel(spec.normalization().unwrap().value, want) < 1e-12, "{l} {v:?} {mu} {alpha}");
    }
}

#[test]
fn disc_states_need_unit_disc() {
    let p = bb(2, &[0.8]);
    assert!(CsAlphaSpec::new(&p, 0, 1, Complex64::new(0.99, 0.0)).is_ok());
    assert!(matches!(CsAlphaSpec::new(&p, 0, 1, Complex64::new(1.0, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(CsAlphaSpec::new(&p, 1, 1, Complex64::new(0.5, 0.0)), Err(Error::Sector { .. })));
}

#[test]
fn paraboson_forms_match_series() {
    for b in [0.2, 0.5, 1.0, 3.7] {
        for r in [0.0, 0.3, 1.0, 2.0, 4.0] {
            let series = eigen_normalization(&bb(2, &[b]), r).unwrap().value;
            assert!(rel(paraboson_normalization(b, r).unwrap(), series) < 1e-10, "{b} {r}");
        }
    }
    // sector pieces of |z⟩ are α = 0 states in z²
    let p = bb(2, &[1.3]);
    for mu in 0..2 {
        let z = 1.7f64;
        let spec = CsAlphaSpec::new(&p, mu, 0, Complex64::new(z * z, 0.0)).unwrap();
        assert!(rel(paraboson_sector_normalization(1.3, mu, z).unwrap(), spec.normalization().unwrap().value) < 1e-10);
    }
}

#[test]
fn components_sum_to_eigenstate() {
    let p = bb(3, &[0.6, 1.9]);
    let z = Complex64::new(0.9, 0.6);
    let full = eigenstate(&p, z, 64, Norm::Normalized).unwrap();
    let mut sum = vec![Complex64::new(0.0, 0.0); full.dim];
    for mu in 0..3 {
        let part = component_zmu(&p, z, mu, full.dim).unwrap().resized(full.dim);
        for (s, c) in sum.iter_mut().zip(&part.coeffs) {
            *s += c;
        }
    }
    let err = sum.iter().zip(&full.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-13, "{err}");
}

fn params_strategy() -> impl Strategy<Value = AlgebraParams> {
    (2usize..=4).prop_flat_map(|l| prop::collection::vec(0.05f64..5.0, l - 1).prop_map(move |v| bb(l, &v)))
}

fn z_strategy() -> impl Strategy<Value = Complex64> {
    (0.0f64..2.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cs_alpha_states_solve_eigenproblem(p in params_strategy(), sel in 0usize..12, z in z_strategy()) {
        let lambda = p.lambda();
        let alpha = sel % (lambda / 2 + 1);
        let mu = (sel / 3) % (lambda - alpha);
        let z = if 2 * alpha == lambda { z * 0.45 } else { z };
        let spec = CsAlphaSpec::new(&p, mu, alpha, z).unwrap();
        let psi = cs_alpha_state(&spec, 64, Norm::Normalized).unwrap();
        prop_assert!(residual_cs_alpha(&spec, &psi).unwrap() < 1e-9);
        prop_assert!((psi.norm_sq() - 1.0).abs() < 1e-10);
        let raw = cs_alpha_state(&spec, 64, Norm::Unnormalized).unwrap();
        prop_assert!(rel(raw.norm_sq(), raw.norm_sq_analytic) < 1e-10);
    }

    #[test]
    fn eigenstates_solve_eigenproblem(p in params_strategy(), z in z_strategy()) {
        let psi = eigenstate(&p, z, 64, Norm::Normalized).unwrap();
        prop_assert!(residual_eigenstate(&p, z, &psi).unwrap() < 1e-9);
        let raw = eigenstate(&p, z, 64, Norm::Unnormalized).unwrap();
        prop_assert!(rel(raw.norm_sq(), raw.norm_sq_analytic) < 1e-10);
    }

    #[test]
    fn overlaps_match_vector_products(p in params_strategy(), z in z_strategy(), w in z_strategy()) {
        let a = eigenstate(&p, z, 64, Norm::Normalized).unwrap();
        let b = eigenstate(&p, w, 64, Norm::Normalized).unwrap();
        let dim = a.dim.max(b.dim);
        let v = b.resized(dim).inner(&a.resized(dim));
        let c = overlap_eigenstate(&p, z, w).unwrap();
        prop_assert!((v - c).norm() < 1e-10);

        let lambda = p.lambda();
        let s1 = CsAlphaSpec::new(&p, 0, 0, z).unwrap();
        let s2 = CsAlphaSpec::new(&p, 0, 0, w).unwrap();
        let (x, y) = (cs_alpha_state(&s1, 64, Norm::Normalized).unwrap(), cs_alpha_state(&s2, 64, Norm::Normalized).unwrap());
        let dim = x.dim.max(y.dim);
        let v = x.resized(dim).inner(&y.resized(dim));
        prop_assert!((v - overlap_cs_alpha(&s1, &s2).unwrap()).norm() < 1e-10, "lambda {}", lambda);
    }
}
