use clambda::algebra::{build_operator, energy_eigenvalue, interior, sga_structure_poly, structure_function, validate_params};
use clambda::{AlgebraParams, Error, OpKind, TruncatedOperator};
use proptest::prelude::*;

fn params_strategy() -> impl Strategy<Value = AlgebraParams> {
    (2usize..=4).prop_flat_map(|l| {
        prop::collection::vec(0.02f64..6.0, l - 1).prop_map(move |v| AlgebraParams::from_beta_bar(l, &v).unwrap())
    })
}

#[test]
fn spec_examples() {
    assert!(validate_params(3, &[3.0, -3.0, 0.0]).is_ok());
    assert!(matches!(validate_params(2, &[-1.5, 1.5]), Err(Error::PositivityViolation { mu: 1, .. })));
    assert!(matches!(validate_params(3, &[1.0, 1.0, 0.0]), Err(Error::ZeroSumViolation { .. })));
    assert!(matches!(validate_params(1, &[0.0]), Err(Error::Shape(_))));
}

#[test]
fn undeformed_structure_is_number_operator() {
    for lambda in 2..=5 {
        let p = AlgebraParams::new(lambda, &vec![0.0; lambda]).unwrap();
        for n in 0..20 {
            assert_eq!(structure_function(&p, n), n as f64);
            assert_eq!(energy_eigenvalue(&p, n), n as f64 + 0.5);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn structure_function_from_beta_bar(p in params_strategy(), n in 0usize..200) {
        let l = p.lambda();
        let (k, nu) = (n / l, n % l);
        let f = l as f64 * (k as f64 + p.beta_bar(nu as i64));
        prop_assert!((structure_function(&p, n) - f).abs() < 1e-12 * f.max(1.0));
        prop_assert!(n == 0 || structure_function(&p, n) > 0.0);
    }

    #[test]
    fn beta_bar_is_quasi_periodic(p in params_strategy(), nu in -8i64..8) {
        let l = p.lambda() as i64;
        prop_assert!((p.beta_bar(nu + l) - p.beta_bar(nu) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deformed_commutator(p in params_strategy()) {
        let k = 40;
        let a = build_operator(&p, OpKind::A, k).unwrap();
        let ad = build_operator(&p, OpKind::Adag, k).unwrap();
        let mut rhs = TruncatedOperator::identity(k);
        for mu in 0..p.lambda() {
            let proj = build_operator(&p, OpKind::P(mu), k).unwrap();
            rhs.entries += proj.entries.map(|x| x * p.alpha(mu as i64));
        }
        let block = interior(&p, k);
        prop_assert!(a.commutator(&ad).max_diff_on_block(&rhs, block) < 1e-10);
        // a†a = F(N), a a† = F(N+1), H₀ = ½{a, a†}
        let (ada, aad) = (ad.mul(&a), a.mul(&ad));
        let h0 = build_operator(&p, OpKind::H0, k).unwrap();
        for n in 0..block {
            prop_assert!((ada.get(n, n).re - structure_function(&p, n)).abs() < 1e-10);
            prop_assert!((aad.get(n, n).re - structure_function(&p, n + 1)).abs() < 1e-10);
            prop_assert!((h0.get(n, n).re - energy_eigenvalue(&p, n)).abs() < 1e-10);
            prop_assert!((h0.get(n, n).re - 0.5 * (ada.get(n, n).re + aad.get(n, n).re)).abs() < 1e-10);
        }
    }

    #[test]
    fn creation_shifts_sectors(p in params_strategy()) {
        let k = 32;
        let ad = build_operator(&p, OpKind::Adag, k).unwrap();
        let block = interior(&p, k);
        for mu in 0..p.lambda() {
            let lhs = ad.mul(&build_operator(&p, OpKind::P(mu), k).unwrap());
            let rhs = build_operator(&p, OpKind::P((mu + 1) % p.lambda()), k).unwrap().mul(&ad);
            prop_assert_eq!(lhs.max_diff_on_block(&rhs, block), 0.0);
        }
    }

    #[test]
    fn sga_commutators(p in params_strategy()) {
        let k = 48;
        let l = p.lambda();
        let jp = build_operator(&p, OpKind::Jplus, k).unwrap();
        let jm = build_operator(&p, OpKind::Jminus, k).unwrap();
        let j0 = build_operator(&p, OpKind::J0, k).unwrap();
        let c = jp.commutator(&jm);
        let jpjm = jp.mul(&jm);
        for n in 0..interior(&p, k) - l {
            let f = sga_structure_poly(&p, j0.get(n, n).re, n % l).unwrap();
            let scale = jpjm.get(n, n).norm().max(1.0);
            prop_assert!((c.get(n, n).re - f).abs() / scale < 1e-10);
        }
        // [J₀, J₊] = J₊ away from the truncation edge
        let cp = j0.commutator(&jp);
        let scale = jp.entries.iter().map(|x| x.norm()).fold(1.0, f64::max);
        prop_assert!(cp.max_diff_on_block(&jp, interior(&p, k) - l) / scale < 1e-12);
    }
}
