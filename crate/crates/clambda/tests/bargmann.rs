use clambda::bargmann::{
    apply_realization, bargmann_inner_product, bargmann_transform, basis_function, check_commutators, check_d_conjugation,
    check_hermiticity, check_intertwining, vector_inner_product, Basis, PolyFunction,
};
use clambda::measures::weight_function;
use clambda::states::cs_alpha_state;
use clambda::{AlgebraParams, CsAlphaSpec, Norm, OpKind};
use num_complex::Complex64;
use proptest::prelude::*;

fn bb(lambda: usize, v: &[f64]) -> AlgebraParams {
    AlgebraParams::from_beta_bar(lambda, v).unwrap()
}

#[test]
fn sector_basis_is_orthonormal() {
    for (p, mu, alpha) in [(bb(2, &[2.0]), 0, 1), (bb(2, &[2.0]), 1, 0), (bb(3, &[4.0 / 3.0, 2.0 / 3.0]), 0, 1)] {
        let w = weight_function(&p, mu, alpha).unwrap();
        for k in 0..5 {
            for j in 0..5 {
                let g = bargmann_inner_product(&w, &basis_function(&p, mu, alpha, k).unwrap(), &basis_function(&p, mu, alpha, j).unwrap()).unwrap();
                let want = if k == j { 1.0 } else { 0.0 };
                assert!((g - want).norm() < 1e-8, "{mu} {alpha} {k} {j}: {g}");
            }
        }
    }
}

#[test]
fn vector_basis_norm_of_coherent_state_component() {
    // a normalized Fock vector keeps its norm in the α = 0 vector realization
    let p = bb(2, &[0.7]);
    let psi = cs_alpha_state(&CsAlphaSpec::new(&p, 1, 0, Complex64::new(0.6, 0.3)).unwrap(), 24, Norm::Normalized).unwrap();
    let f = bargmann_transform(&p, &psi, Basis::VectorAlpha0).unwrap();
    let weights: Vec<_> = (0..2).map(|mu| weight_function(&p, mu, 0).unwrap()).collect();
    let trimmed = PolyFunction::vector(f.components.iter().map(|c| c.iter().take(12).copied().collect()).collect());
    let n = vector_inner_product(&weights, &trimmed, &trimmed).unwrap();
    assert!((n.re - 1.0).abs() < 1e-8 && n.im.abs() < 1e-12, "{n}");
}

#[test]
fn realizations_lower_and_raise_degree() {
    let p = bb(3, &[0.8, 1.6]);
    let f = PolyFunction::monomial(1, 0, 2);
    let basis = Basis::SectorAlpha { mu: 1, alpha: 0 };
    assert_eq!(apply_realization(&p, basis, OpKind::Jplus, &f).unwrap().degree(), Some(3));
    assert_eq!(apply_realization(&p, basis, OpKind::Jminus, &f).unwrap().degree(), Some(1));
    assert_eq!(apply_realization(&p, basis, OpKind::J0, &f).unwrap().degree(), Some(2));
}

#[test]
fn hermiticity_for_certified_weights() {
    for p in [bb(2, &[2.0]), bb(2, &[0.3]), bb(3, &[4.0 / 3.0, 2.0 / 3.0])] {
        let mut bases = vec![Basis::VectorAlpha0];
        for alpha in 0..=p.lambda() / 2 {
            for mu in 0..p.lambda() - alpha {
                if weight_function(&p, mu, alpha).is_ok() {
                    bases.push(Basis::SectorAlpha { mu, alpha });
                }
            }
        }
        for basis in bases {
            let n = if basis == Basis::VectorAlpha0 { p.lambda() } else { 1 };
            let samples: Vec<PolyFunction> = (0..n).flat_map(|c| (0..3).map(move |k| PolyFunction::monomial(n, c, k))).collect();
            let r = check_hermiticity(&p, basis, &samples, 1e-6).unwrap();
            assert!(r.pass, "{}: {}", basis.tag(), r.max_residual);
        }
    }
}

fn params_strategy() -> impl Strategy<Value = AlgebraParams> {
    (2usize..=4).prop_flat_map(|l| prop::collection::vec(0.05f64..5.0, l - 1).prop_map(move |v| bb(l, &v)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn realizations_intertwine_fock_matrices(p in params_strategy(), sel in 0usize..12) {
        let lambda = p.lambda();
        let alpha = sel % (lambda / 2 + 1);
        let mu = (sel / 3) % (lambda - alpha);
        for basis in [Basis::SectorAlpha { mu, alpha }, Basis::VectorAlpha0, Basis::Eigenstate] {
            let r = check_intertwining(&p, basis, 10, 1e-12).unwrap();
            prop_assert!(r.pass, "{} {}", basis.tag(), r.max_residual);
            let r = check_commutators(&p, basis, 10, 1e-12).unwrap();
            prop_assert!(r.pass, "{} {}", basis.tag(), r.max_residual);
        }
        prop_assert!(check_d_conjugation(&p, 10, 1e-12).unwrap().pass);
    }
}
