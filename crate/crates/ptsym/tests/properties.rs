use num_complex::Complex64;
use proptest::prelude::*;

use ptsym::algebra::gauss::rat;
use ptsym::algebra::{from_monomials, to_monomials, DiffOp, GaussRational, HermiteSeries, MultiIndex};
use ptsym::c_operator::build_c;
use ptsym::closed_forms::{gamma, zeta_closed};
use ptsym::matrix_model::{self, mat_mul, max_diff, pt_inner, Phase, TwoLevelModel};
use ptsym::perturbation::{first_order_state, schrodinger_residual, ModelId};
use ptsym::spectral::{build_matrix, hurwitz_zeta, HamiltonianFamily};

fn gauss() -> impl Strategy<Value = GaussRational> {
    (-9i64..=9, 1i64..=6, -9i64..=9, 1i64..=6).prop_map(|(a, b, c, d)| GaussRational::new(rat(a, b), rat(c, d)))
}

fn series1() -> impl Strategy<Value = HermiteSeries> {
    prop::collection::vec((0u32..10, gauss()), 0..6)
        .prop_map(|t| HermiteSeries::from_terms(1, t.into_iter().map(|(k, c)| (MultiIndex::new(&[k]), c))).unwrap())
}

fn series2() -> impl Strategy<Value = HermiteSeries> {
    prop::collection::vec((0u32..6, 0u32..6, gauss()), 0..6)
        .prop_map(|t| HermiteSeries::from_terms(2, t.into_iter().map(|(a, b, c)| (MultiIndex::new(&[a, b]), c))).unwrap())
}

fn op1() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((0u32..3, 0u32..3, gauss()), 1..4).prop_map(|t| {
        t.into_iter()
            .map(|(x, d, c)| DiffOp::monomial(1, c, &[x], &[d]).unwrap())
            .reduce(|a, b| a.add(&b).unwrap())
            .unwrap()
    })
}

proptest! {
    #[test]
    fn monomial_round_trip(s in series2()) {
        prop_assert_eq!(from_monomials(&to_monomials(&s)), s);
    }

    #[test]
    fn parity_and_pt_are_involutions(s in series2()) {
        prop_assert_eq!(s.parity().parity(), s.clone());
        prop_assert_eq!(s.pt().pt(), s);
    }

    #[test]
    fn leibniz_rule_for_x(s in series1()) {
        let lhs = s.mul_x(0).unwrap().differentiate(0).unwrap();
        let rhs = s.add(&s.differentiate(0).unwrap().mul_x(0).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cube_matches_three_steps(s in series1()) {
        let step = s.mul_x(0).unwrap().mul_x(0).unwrap().mul_x(0).unwrap();
        prop_assert_eq!(s.mul_x3(0).unwrap(), step);
    }

    #[test]
    fn composition_is_associative(a in op1(), b in op1(), c in op1()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composition_is_action(a in op1(), b in op1(), s in series1()) {
        let ab = a.compose(&b).unwrap().apply_gaussian(&s).unwrap();
        let seq = a.apply_gaussian(&b.apply_gaussian(&s).unwrap()).unwrap();
        prop_assert_eq!(ab, seq);
    }

    #[test]
    fn gaussian_pairing_is_symmetric(a in series2(), b in series2()) {
        prop_assert_eq!(a.gaussian_inner_product(&b).unwrap(), b.gaussian_inner_product(&a).unwrap());
    }

    #[test]
    fn gamma_reflection(z in 0.01f64..0.99) {
        let lhs = gamma(z) * gamma(1.0 - z) * (std::f64::consts::PI * z).sin();
        prop_assert!((lhs - std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn gamma_recurrence(x in 0.1f64..20.0) {
        prop_assert!((gamma(x + 1.0) / (x * gamma(x)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hurwitz_shift(s in 1.05f64..6.0, q in 0.1f64..5.0) {
        let lhs = hurwitz_zeta(s, q);
        let rhs = q.powf(-s) + hurwitz_zeta(s, q + 1.0);
        prop_assert!((lhs - rhs).abs() < 1e-11 * lhs);
    }

    #[test]
    fn zeta_closed_positive(eps in 0.05f64..6.0) {
        let z = zeta_closed(eps).unwrap();
        prop_assert!(z.is_finite() && z > 0.0);
    }

    #[test]
    fn unbroken_matrix_model(r in 0.1f64..3.0, theta in -3.1f64..3.1, margin in 0.05f64..3.0, neg in any::<bool>(),
                             a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, d in -1.0f64..1.0) {
        let s = (r * theta.sin().abs() + margin) * if neg { -1.0 } else { 1.0 };
        let sol = matrix_model::solve(TwoLevelModel::new(r, s, theta));
        prop_assert_eq!(sol.phase, Phase::Unbroken);
        let cm = sol.c_matrix.unwrap();
        let scale = max_diff(&cm, &[[Complex64::new(0.0, 0.0); 2]; 2]).powi(2);
        prop_assert!(max_diff(&mat_mul(&cm, &cm), &matrix_model::identity()) < 1e-13 * scale);
        let h = sol.model.hamiltonian();
        prop_assert!(max_diff(&mat_mul(&cm, &h), &mat_mul(&h, &cm)) < 1e-13 * scale * (r + s.abs()));
        let psi = [Complex64::new(a, b), Complex64::new(c, d)];
        if psi.iter().any(|z| z.norm() > 1e-3) {
            prop_assert!(sol.cpt_inner(&psi, &psi).unwrap().re > 0.0);
        }
        let t = a.abs() * 5.0;
        let later = sol.evolve(&psi, t);
        let before = sol.cpt_inner(&psi, &psi).unwrap();
        prop_assert!((sol.cpt_inner(&later, &later).unwrap() - before).norm() < 1e-10 * before.norm().max(1.0));
    }

    #[test]
    fn broken_matrix_model_has_null_pt_norms(r in 0.5f64..3.0, theta in 0.3f64..2.8, frac in 0.0f64..0.95) {
        let s = frac * r * theta.sin();
        let sol = matrix_model::solve(TwoLevelModel::new(r, s, theta));
        prop_assert_eq!(sol.phase, Phase::Broken);
        for v in &sol.eigenvectors {
            prop_assert!(pt_inner(v, v).norm() < 1e-10);
        }
        let (e0, e1) = (sol.eigenvalues[0], sol.eigenvalues[1]);
        prop_assert!((e0 - e1.conj()).norm() < 1e-12 * (r + s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn graded_matrices_are_pt_transposed(eps in -0.95f64..1.95, n in 8usize..40) {
        let m = build_matrix(HamiltonianFamily::Epsilon { eps }, n).unwrap();
        prop_assert!(m.pt_transpose_residual() < 1e-10);
        let m = build_matrix(HamiltonianFamily::Cubic { eps }, n).unwrap();
        prop_assert!(m.pt_transpose_residual() < 1e-12);
    }

    #[test]
    fn first_order_states_solve_the_equation(i in 0u32..5, j in 0u32..5, k in 0u32..5) {
        let st = first_order_state(ModelId::Ix2y, &MultiIndex::new(&[i, j])).unwrap();
        prop_assert!(schrodinger_residual(&st, 1).unwrap().iter().all(|r| r.is_zero()));
        let st = first_order_state(ModelId::Ixyz, &MultiIndex::new(&[i, j, k])).unwrap();
        prop_assert!(schrodinger_residual(&st, 1).unwrap().iter().all(|r| r.is_zero()));
        let c = build_c(ModelId::Ixyz, 1).unwrap();
        prop_assert!(c.apply_c(&st).unwrap().iter().all(|r| r.is_zero()));
    }
}
